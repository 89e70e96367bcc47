"""
Convexity Certification

Numerical certification that F is convex on {v >= 0, |v|^2 <= 1/4}.

F splits into terms F_k(r, g2) = g2^2 [H_C(r) - f(r) log g2^2] with r = |v| and
g2 = v_k / r. Each F_k is convex when, on (0, 1/2) x (0, 1],
alpha = G20, eta = (r G10 - g2 G01) / r^2 and det = alpha gamma - beta^2 are all
non-negative. This module evaluates those quantities on grids, checks the
auxiliary polynomial p(z), and samples finite-difference Hessians of F itself.

Everything is computed in nats; entropic outputs are divided by ln(base).
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.special import entr

from pairent.errors import DomainError
from pairent.services.bounds import F_from_moduli
from pairent.services.jacobi import min_eigenvalue
from pairent.services.logbase import BaseLike, as_base

logger = logging.getLogger(__name__)

SIGN_TOL = 1e-9
ENDPOINT_BAND = 1e-6
FD_STEP = 1e-6
HESSIAN_STEP = 1e-4
INTERIOR_MARGIN = 1e-4


@dataclass(frozen=True)
class QubitEntropyTerms:
    """H_C(r), f(r) and their first two derivatives."""

    HC: float
    dHC: float
    d2HC: float
    f: float
    df: float
    d2f: float


@dataclass(frozen=True)
class ConvexityPoint:
    """All Sylvester quantities of one F_k at (r, g2)."""

    r: float
    g2: float
    HC: float
    f: float
    dHC: float
    d2HC: float
    df: float
    d2f: float
    G10: float
    G01: float
    G20: float
    G11: float
    G02: float
    alpha: float
    beta: float
    gamma_: float
    eta: float
    det: float


@dataclass
class GridCertificate:
    """Outcome of a Sylvester grid scan."""

    grid_size: int
    margin: float
    log_base: str
    min_alpha: float
    min_eta: float
    min_det: float
    det_monotone_in_r: bool
    passed: bool
    failures: List[Tuple[float, float]] = field(default_factory=list)


# ---------------------------------------------------------------------------
# H_C and f
# ---------------------------------------------------------------------------


def _hc_f_values(r):
    """H_C and f in nats, stable at both ends (f = 2r^2 / (1 + u))."""
    r = np.asarray(r, dtype=float)
    u = np.sqrt(np.clip(1.0 - 4.0 * r * r, 0.0, None))
    f = 2.0 * r * r / (1.0 + u)
    return entr(1.0 - f) + entr(f), f


def _hc_f_analytic(r):
    """Closed-form derivatives on the open interval."""
    r = np.asarray(r, dtype=float)
    u = np.sqrt(1.0 - 4.0 * r * r)
    hc, f = _hc_f_values(r)
    df = 2.0 * r / u
    d2f = 2.0 / u**3
    # ln(a / b) with a = 1 - f, b = f equals 2 atanh(u)
    log_ratio = 2.0 * np.arctanh(u)
    dhc = df * log_ratio
    d2hc = 4.0 * (np.arctanh(u) - u) / u**3
    return hc, dhc, d2hc, f, df, d2f


def _one_sided(fn, r: float, h: float = FD_STEP) -> Tuple[float, float]:
    """First and second derivatives by one-sided differences, stepping inward."""
    step = h if r < 0.25 else -h
    f0, f1, f2 = fn(r), fn(r + step), fn(r + 2.0 * step)
    return (f1 - f0) / step, (f2 - 2.0 * f1 + f0) / (step * step)


def _hc_and_f_nats(r: float) -> QubitEntropyTerms:
    if r < 0.0 or r > 0.5:
        raise DomainError(f"r = {r} outside [0, 1/2]")
    if r < ENDPOINT_BAND or r > 0.5 - ENDPOINT_BAND:
        hc, f = (float(x) for x in _hc_f_values(r))
        dhc, d2hc = _one_sided(lambda t: float(_hc_f_values(t)[0]), r)
        df, d2f = _one_sided(lambda t: float(_hc_f_values(t)[1]), r)
        return QubitEntropyTerms(hc, dhc, d2hc, f, df, d2f)
    return QubitEntropyTerms(*(float(x) for x in _hc_f_analytic(r)))


def hc_and_f(r: float, base: BaseLike = None) -> QubitEntropyTerms:
    """
    Two-qubit entropy H_C(r) and f(r) = (1 - sqrt(1 - 4r^2)) / 2 with derivatives.

    H_C and its derivatives are in the selected base; f is dimensionless.
    Within 1e-6 of either endpoint the derivatives fall back to one-sided
    finite differences.

    Raises:
        DomainError: outside [0, 1/2]
    """
    scale = as_base(base).ln_base
    terms = _hc_and_f_nats(r)
    return QubitEntropyTerms(
        HC=terms.HC / scale,
        dHC=terms.dHC / scale,
        d2HC=terms.d2HC / scale,
        f=terms.f,
        df=terms.df,
        d2f=terms.d2f,
    )


# ---------------------------------------------------------------------------
# Sylvester quantities
# ---------------------------------------------------------------------------


def _sylvester_arrays(r, g2) -> Dict[str, np.ndarray]:
    """Vectorized Sylvester quantities in nats for r in (0, 1/2), g2 in (0, 1]."""
    r = np.asarray(r, dtype=float)
    g2 = np.asarray(g2, dtype=float)
    hc, dhc, d2hc, f, df, d2f = _hc_f_analytic(r)
    log_g = np.log(g2 * g2)
    g_sq = g2 * g2

    G10 = g_sq * (dhc - df * log_g)
    G01 = 2.0 * g2 * (hc - f * (1.0 + log_g))
    G20 = g_sq * (d2hc - d2f * log_g)
    G11 = 2.0 * g2 * (dhc - df * (1.0 + log_g))
    G02 = 2.0 * (hc - f * (3.0 + log_g))

    perp = 1.0 - g_sq
    eta = (r * G10 - g2 * G01) / (r * r)
    alpha = G20
    beta = np.sqrt(perp) / r * (G11 - G01 / r)
    gamma_ = perp / (r * r) * G02 + eta
    det = alpha * gamma_ - beta * beta
    return {
        "HC": hc, "dHC": dhc, "d2HC": d2hc, "f": f, "df": df, "d2f": d2f,
        "G10": G10, "G01": G01, "G20": G20, "G11": G11, "G02": G02,
        "alpha": alpha, "beta": beta, "gamma_": gamma_, "eta": eta, "det": det,
    }


_ENTROPIC = ("HC", "dHC", "d2HC", "G10", "G01", "G20", "G11", "G02", "alpha", "beta", "gamma_", "eta")


def _to_base(values: Dict[str, np.ndarray], scale: float) -> Dict[str, np.ndarray]:
    out = dict(values)
    for key in _ENTROPIC:
        out[key] = values[key] / scale
    out["det"] = values["det"] / (scale * scale)
    return out


def sylvester_point(
    r: float, g2: float, base: BaseLike = None, eps: float = 0.0
) -> ConvexityPoint:
    """
    Gradient, Hessian entries and Sylvester minors of F_k at (r, g2).

    Raises:
        DomainError: unless eps < r < 1/2 - eps and eps < g2 <= 1
    """
    if not (eps < r < 0.5 - eps) or not (eps < g2 <= 1.0):
        raise DomainError(f"(r, g2) = ({r}, {g2}) outside the open domain")
    values = _to_base(_sylvester_arrays(r, g2), as_base(base).ln_base)
    return ConvexityPoint(r=r, g2=g2, **{k: float(v) for k, v in values.items()})


def grid_axes(n: int, eps: float) -> Tuple[np.ndarray, np.ndarray]:
    """n points over (eps, 1/2 - eps) for r and (eps, 1] for g2."""
    r_axis = np.linspace(eps, 0.5 - eps, n + 2)[1:-1]
    g_axis = np.linspace(eps, 1.0, n + 1)[1:]
    return r_axis, g_axis


def sylvester_grid(
    n: int, eps: float, base: BaseLike = None
) -> Tuple[np.ndarray, np.ndarray, Dict[str, np.ndarray]]:
    """Sylvester quantities on the full n x n grid (rows: g2, columns: r)."""
    r_axis, g_axis = grid_axes(n, eps)
    rr, gg = np.meshgrid(r_axis, g_axis)
    values = _to_base(_sylvester_arrays(rr, gg), as_base(base).ln_base)
    return r_axis, g_axis, values


def scan_grid(
    n: int = 200, eps: float = 1e-6, base: BaseLike = None, max_failures: int = 50
) -> GridCertificate:
    """
    Evaluate alpha, eta and det on an n x n grid and certify their signs.

    The certificate passes when all three minima are >= -1e-9. Whether det
    grows with r along every g2 line is reported but does not affect the verdict.

    Raises:
        DomainError: if n < 100 or eps outside (0, 1e-3]
    """
    if n < 100:
        raise DomainError(f"Grid size {n} below 100")
    if not (0.0 < eps <= 1e-3):
        raise DomainError(f"Margin {eps} outside (0, 1e-3]")
    base = as_base(base)
    r_axis, g_axis, values = sylvester_grid(n, eps, base)
    alpha, eta, det = values["alpha"], values["eta"], values["det"]

    bad = (alpha < -SIGN_TOL) | (eta < -SIGN_TOL) | (det < -SIGN_TOL)
    rows, cols = np.nonzero(bad)
    failures = [
        (float(r_axis[c]), float(g_axis[r])) for r, c in zip(rows[:max_failures], cols[:max_failures])
    ]
    monotone = bool(np.all(np.diff(det, axis=1) >= -SIGN_TOL))

    certificate = GridCertificate(
        grid_size=n,
        margin=eps,
        log_base=base.value,
        min_alpha=float(alpha.min()),
        min_eta=float(eta.min()),
        min_det=float(det.min()),
        det_monotone_in_r=monotone,
        passed=not bool(bad.any()),
        failures=failures,
    )
    logger.info(
        f"Grid {n}x{n} (eps={eps}): min alpha={certificate.min_alpha:.3e}, "
        f"min eta={certificate.min_eta:.3e}, min det={certificate.min_det:.3e}, "
        f"pass={certificate.passed}"
    )
    if not certificate.passed:
        logger.error(f"{int(bad.sum())} grid points violate the Sylvester conditions")
    return certificate


def write_heatmap_csv(n: int, eps: float, path: Path, base: BaseLike = None) -> int:
    """Dump (r, g2, alpha, eta, det) for every grid point; returns the row count."""
    r_axis, g_axis, values = sylvester_grid(n, eps, base)
    count = 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["r", "g2", "alpha", "eta", "det"])
        for i, g2 in enumerate(g_axis):
            for j, r in enumerate(r_axis):
                writer.writerow(
                    [
                        f"{value:.17g}"
                        for value in (
                            r, g2, values["alpha"][i, j], values["eta"][i, j], values["det"][i, j]
                        )
                    ]
                )
                count += 1
    return count


# ---------------------------------------------------------------------------
# Auxiliary checks
# ---------------------------------------------------------------------------


def eta_contributions(r: float, base: BaseLike = None) -> Tuple[float, float]:
    """The two brackets of eta: (r f' - 2f, r H_C' - 2H_C + 2f), the second in base units."""
    terms = _hc_and_f_nats(r)
    first = r * terms.df - 2.0 * terms.f
    second = r * terms.dHC - 2.0 * terms.HC + 2.0 * terms.f
    return first, second / as_base(base).ln_base


def p_of_z(z: float, base: BaseLike = None) -> float:
    """
    p(z) = (2z - 1)(r H_C' - 2 H_C + 2f) with r^2 = z(1 - z), z in [1/2, 1].

    Raises:
        DomainError: outside [1/2, 1]
    """
    if z < 0.5 or z > 1.0:
        raise DomainError(f"z = {z} outside [1/2, 1]")
    if z == 1.0:
        return 0.0
    r = float(np.sqrt(max(0.0, z * (1.0 - z))))
    _, bracket = eta_contributions(min(r, 0.5), base)
    return (2.0 * z - 1.0) * bracket


def fk_terms(v: Sequence[float], base: BaseLike = None) -> np.ndarray:
    """F_k(v) = g2^2 [H_C(r) - f(r) log g2^2] for every component, in base units."""
    v = np.abs(np.asarray(v, dtype=float))
    r = float(np.sqrt(np.sum(v * v)))
    if r == 0.0:
        return np.zeros(v.size)
    if r > 0.5 + 1e-12:
        raise DomainError(f"|v| = {r} exceeds 1/2")
    hc, f = (float(x) for x in _hc_f_values(min(r, 0.5)))
    g_sq = (v / r) ** 2
    # g2^2 log g2^2 with 0 log 0 := 0
    g_log_g = -entr(g_sq)
    return (g_sq * hc - f * g_log_g) / as_base(base).ln_base


def gradient_F(v: Sequence[float], base: BaseLike = None) -> np.ndarray:
    """
    Analytic gradient of F as the sum over k of G10 grad g1 + G01 grad g2.

    Requires every component positive and |v| inside (0, 1/2).
    """
    v = np.asarray(v, dtype=float)
    r = float(np.sqrt(np.sum(v * v)))
    if np.any(v <= 0.0) or not (0.0 < r < 0.5):
        raise DomainError("Gradient needs positive components with 0 < |v| < 1/2")
    grad = np.zeros(v.size)
    grad_g1 = v / r
    for k in range(v.size):
        g2 = v[k] / r
        values = _sylvester_arrays(r, g2)
        grad_g2 = -v[k] * v / r**3
        grad_g2[k] += 1.0 / r
        grad += float(values["G10"]) * grad_g1 + float(values["G01"]) * grad_g2
    return grad / as_base(base).ln_base


def check_interior(v: np.ndarray) -> None:
    if np.any(v <= INTERIOR_MARGIN) or float(np.sum(v * v)) > 0.25 - INTERIOR_MARGIN:
        raise DomainError(
            f"Point must satisfy v_i > {INTERIOR_MARGIN} and |v|^2 <= 1/4 - {INTERIOR_MARGIN}"
        )


def fd_hessian(v: Sequence[float], base: BaseLike = None, h: float = HESSIAN_STEP) -> np.ndarray:
    """Symmetrized central finite-difference Hessian of F at v."""
    v = np.asarray(v, dtype=float)
    n = v.size
    hessian = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            ei = np.zeros(n)
            ej = np.zeros(n)
            ei[i] = h
            ej[j] = h
            value = (
                F_from_moduli(v + ei + ej, base)
                - F_from_moduli(v + ei - ej, base)
                - F_from_moduli(v - ei + ej, base)
                + F_from_moduli(v - ei - ej, base)
            ) / (4.0 * h * h)
            hessian[i, j] = value
            hessian[j, i] = value
    return hessian


def hessian_fd_check(v: Sequence[float], base: BaseLike = None) -> float:
    """
    Minimum eigenvalue of the finite-difference Hessian of F at an interior point.

    Raises:
        DomainError: if v is within 1e-4 of the domain boundary
    """
    v = np.abs(np.asarray(v, dtype=float).ravel())
    check_interior(v)
    return min_eigenvalue(fd_hessian(v, base))


def random_interior_points(
    dim: int, count: int, seed: int, r_max: float = 0.45, floor: float = 1e-2
) -> np.ndarray:
    """Random first-row moduli for a d-dimensional state, away from the boundary."""
    rng = np.random.default_rng(seed)
    points = np.empty((count, dim - 1))
    for row in range(count):
        direction = rng.exponential(size=dim - 1)
        direction = np.sqrt(direction / direction.sum())
        radius = rng.uniform(0.05, r_max)
        points[row] = np.maximum(direction * radius, floor)
    # rescale any point pushed outside by the floor
    norms = np.sqrt(np.sum(points**2, axis=1))
    over = norms > r_max
    points[over] *= (r_max / norms[over])[:, None]
    return points
