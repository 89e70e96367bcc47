"""
Sample Command

Random decompositions of d-dimensional pair states: one CSV row per sample
and a JSON summary with violation counts and dominance fractions.
"""

import argparse
import logging
from pathlib import Path
from typing import Dict, Optional

from pairent.api.v1.models import ReportEnvelope, RunConfig, emit
from pairent.config import settings
from pairent.errors import CertificationFailure, UsageError
from pairent.services import ensembles
from pairent.services.bounds import s_curve
from pairent.services.figures import bisector_figure, bounds_figure

logger = logging.getLogger(__name__)


class SampleSummary(ReportEnvelope):
    """Response model for the sample command."""

    dim: int
    samples: int
    k_policy: str
    sampling_measure: str = ensembles.SAMPLING_MEASURE
    g_violations: int
    f_violations: int
    dominance: Dict[str, float]
    csv: Optional[str] = None


def summary_path(csv_path: Path) -> Path:
    """<stem>_summary.json next to the CSV; never the CSV itself."""
    return csv_path.with_name(f"{csv_path.stem}_summary.json")


def resolve_policy(members: Optional[int]) -> ensembles.KPolicy:
    if members is not None:
        return ensembles.KPolicy(fixed=members)
    if settings.k_policy == "fixed":
        raise UsageError("PAIRENT_K_POLICY=fixed needs --members or PAIRENT_MEMBERS")
    return ensembles.KPolicy()


def run(args: argparse.Namespace) -> int:
    config = RunConfig.from_args(args)
    if args.dim < 2:
        raise UsageError(f"--dim must be >= 2, got {args.dim}")
    policy = resolve_policy(config.members)

    result = ensembles.run_fig1_experiment(
        args.dim, config.num_samples, policy, config.seed, config.log_base, config.threads
    )
    csv_path = config.out
    if csv_path is not None:
        try:
            rows = ensembles.write_records_csv(result.records, csv_path)
        except OSError as e:
            raise UsageError(f"Cannot write {csv_path}: {e}") from e
        logger.info(f"Wrote {rows} samples to {csv_path}")

    summary = SampleSummary(
        command="sample",
        log_base=config.log_base,
        seed=config.seed,
        dim=args.dim,
        samples=len(result.records),
        k_policy=policy.describe(),
        g_violations=result.g_violations,
        f_violations=result.f_violations,
        dominance=ensembles.dominance_fractions(result.records),
        csv=str(csv_path) if csv_path is not None else None,
    )
    emit(summary, summary_path(csv_path) if csv_path is not None else None)

    if args.svg is not None:
        ordered = sorted(result.records, key=lambda r: r.negativity)
        bisector_figure(result.records, args.svg.with_name(args.svg.stem + "_bisector.svg"), config.log_base)
        bounds_figure(
            ordered,
            s_curve(args.dim, base=config.log_base),
            args.svg.with_name(args.svg.stem + "_bounds.svg"),
            config.log_base,
        )

    if result.f_violations:
        return CertificationFailure.exit_code
    return 0


def register(subparsers, parents) -> None:
    parser = subparsers.add_parser("sample", parents=parents, help="Random decomposition experiments")
    parser.add_argument("--dim", type=int, required=True, help="Pair-basis dimension d")
    parser.add_argument("--num", dest="num_samples", type=int, help="Number of samples")
    parser.add_argument("--members", type=int, help="Fixed decomposition size K (default: uniform on d..2d)")
    parser.add_argument("--svg", type=Path, help="Figure prefix; writes <stem>_bisector.svg and <stem>_bounds.svg")
    parser.set_defaults(handler=run)
