"""
SVG Figures

Thin matplotlib renderers over the data the experiments already produce:
- G against the average decomposition entropy, with the bisector
- F, G, s against N, with the s(N) curve
- S and F of squeezed states against r
- the Sylvester determinant over the (r, g2) grid

Figures never feed back into any check.
"""

import logging
from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")

from matplotlib.figure import Figure  # noqa: E402

from pairent.services.convexity import sylvester_grid  # noqa: E402
from pairent.services.ensembles import ScatterRecord  # noqa: E402
from pairent.services.logbase import BaseLike, as_base  # noqa: E402

logger = logging.getLogger(__name__)


def _unit(base: BaseLike) -> str:
    return "ebits" if as_base(base).value == "2" else "nats"


def _save(fig: Figure, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg")
    logger.info(f"Wrote {path}")
    return path


def bisector_figure(records: Sequence[ScatterRecord], path: Path, base: BaseLike = None) -> Path:
    """G (and F) against the average entropy; every point should sit below the diagonal."""
    fig = Figure(figsize=(5, 5))
    ax = fig.add_subplot()
    avg = [r.avg_entropy for r in records]
    ax.scatter(avg, [r.G for r in records], s=4, label="G")
    ax.scatter(avg, [r.F for r in records], s=4, alpha=0.5, label="F")
    top = max(avg, default=1.0)
    ax.plot([0, top], [0, top], color="black", linewidth=1)
    ax.set_xlabel(f"average entropy ({_unit(base)})")
    ax.set_ylabel(f"bound ({_unit(base)})")
    ax.legend()
    return _save(fig, path)


def bounds_figure(
    records: Sequence[ScatterRecord],
    curve: List[Dict[str, float]],
    path: Path,
    base: BaseLike = None,
) -> Path:
    """F, G and s of each sample against its negativity."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    n = [r.negativity for r in records]
    for name in ("F", "G", "s"):
        ax.scatter(n, [getattr(r, name) for r in records], s=4, label=name)
    ax.plot([p["N"] for p in curve], [p["s"] for p in curve], color="black", linewidth=1)
    ax.set_xlabel("N")
    ax.set_ylabel(f"bound ({_unit(base)})")
    ax.legend()
    return _save(fig, path)


def squeezed_figure(rows: Sequence[Dict[str, float]], path: Path, base: BaseLike = None) -> Path:
    """S(r) and F(r) of two-mode squeezed states."""
    fig = Figure(figsize=(6, 4))
    ax = fig.add_subplot()
    r = [row["r"] for row in rows]
    ax.plot(r, [row["S"] for row in rows], label="S")
    ax.plot(r, [row["F"] for row in rows], linestyle="--", label="F")
    ax.set_xlabel("r")
    ax.set_ylabel(_unit(base))
    ax.legend()
    return _save(fig, path)


def determinant_heatmap(n: int, eps: float, path: Path, base: BaseLike = None) -> Path:
    """det = alpha gamma - beta^2 over the scan grid."""
    r_axis, g_axis, values = sylvester_grid(n, eps, base)
    fig = Figure(figsize=(6, 5))
    ax = fig.add_subplot()
    mesh = ax.pcolormesh(r_axis, g_axis, values["det"], shading="auto")
    fig.colorbar(mesh, ax=ax, label="det")
    ax.set_xlabel("r")
    ax.set_ylabel("g2")
    return _save(fig, path)
