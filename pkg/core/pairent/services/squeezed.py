"""
Two-Mode Squeezed States

Truncated two-mode squeezed vacua c_n = tanh^n(r) / cosh(r) and their exact
measures:
- N = e^r sinh r
- S = cosh^2 r log cosh^2 r - sinh^2 r log sinh^2 r
- F in two closed forms: the Heaviside expression, and the first-row bound
  evaluated on the state (equal to S up to cosh^2 r = 2)

Truncated states are renormalized so they are valid pure pair states.
"""

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np
from scipy.special import xlogy

from pairent.errors import DomainError, ToleranceExceeded
from pairent.services.bounds import bound_F, bound_s
from pairent.services.logbase import BaseLike, LogBase, as_base
from pairent.services.measures import entropy_pure, negativity
from pairent.services.pairstate import PurePairState
from pairent.services.parallel import ordered_map

logger = logging.getLogger(__name__)

DEFAULT_TAIL = 1e-30
MAX_TAIL = 1e-6
MAX_VERIFY_R = 3.0
MAX_R = 350.0
MAX_AMPLITUDES = 10_000_000
SWITCH_R = math.log(1.0 + math.sqrt(2.0))
CSV_HEADER = ["r", "S", "F", "N", "n_max", "tail_weight"]


@dataclass(frozen=True)
class SqueezedState:
    """Truncated squeezed state; tail_weight is the discarded probability."""

    r: float
    n_max: int
    state: PurePairState
    tail_weight: float

    @property
    def dim(self) -> int:
        return self.state.dim


@dataclass(frozen=True)
class ClosedForm:
    """Exact measures of the untruncated state."""

    r: float
    N: float
    S: float
    F_heaviside: float
    F_first_row: float
    log_base: LogBase

    @property
    def F(self) -> float:
        return self.F_heaviside

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "N": self.N,
            "S": self.S,
            "F": self.F,
            "F_first_row": self.F_first_row,
            "log_base": self.log_base.value,
        }


@dataclass(frozen=True)
class TruncationReport:
    """Truncated-numeric measures against the closed forms."""

    r: float
    n_max: int
    tail_weight: float
    tolerance: float
    closed_form: ClosedForm
    numeric_N: float
    numeric_S: float
    numeric_F: float
    s_by_dim: Dict[int, float]
    forms_agree: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "r": self.r,
            "n_max": self.n_max,
            "tail_weight": self.tail_weight,
            "tolerance": self.tolerance,
            "closed_form": self.closed_form.to_dict(),
            "numeric": {"N": self.numeric_N, "S": self.numeric_S, "F": self.numeric_F},
            "s_by_dim": {str(d): v for d, v in self.s_by_dim.items()},
            "forms_agree": self.forms_agree,
        }


def _check_r(r: float) -> None:
    if not 0.0 <= r <= MAX_R:
        raise DomainError(f"Squeezing parameter must lie in [0, {MAX_R}], got {r}")


def log_tanh_sq(r: float) -> float:
    """
    ln tanh^2(r) = 2 [ln(1 - e^{-2r}) - ln(1 + e^{-2r})], exact where tanh(r) rounds to 1.

    Raises:
        DomainError: for r = 0 or once e^{-2r} underflows
    """
    _check_r(r)
    if r == 0.0:
        raise DomainError("ln tanh^2(0) is -inf")
    x = math.exp(-2.0 * r)
    log_t = 2.0 * (math.log1p(-x) - math.log1p(x))
    if not log_t < 0.0 or math.isinf(log_t):
        raise DomainError(f"ln tanh^2(r) is not finite and negative at r={r}")
    return log_t


def truncation_cutoff(r: float, tail_threshold: float = DEFAULT_TAIL) -> int:
    """Smallest N with tanh^{2(N+1)}(r) < tail_threshold; 0 at r = 0."""
    _check_r(r)
    if not 0.0 < tail_threshold <= MAX_TAIL:
        raise DomainError(f"Tail threshold {tail_threshold} outside (0, {MAX_TAIL}]")
    if r == 0.0:
        return 0
    log_t = log_tanh_sq(r)
    log_tail = math.log(tail_threshold)
    n = max(0, math.floor(log_tail / log_t))
    if n < 2**50:
        # Nudge across floating-point edges of the floor
        while (n + 1) * log_t >= log_tail:
            n += 1
        while n > 0 and n * log_t < log_tail:
            n -= 1
    return n


def tail_weight(r: float, n_max: int) -> float:
    """Discarded probability tanh^{2(n_max+1)}(r); 0 at r = 0."""
    if r == 0.0:
        return 0.0
    return math.exp((n_max + 1) * log_tanh_sq(r))


def make_squeezed(r: float, tail_threshold: float = DEFAULT_TAIL) -> SqueezedState:
    """
    Truncated, renormalized squeezed state.

    r = 0 gives |0,0>, padded to c = (1, 0).

    Raises:
        DomainError: when the cutoff needs more than MAX_AMPLITUDES amplitudes
    """
    n_max = truncation_cutoff(r, tail_threshold)
    if n_max == 0:
        return SqueezedState(r=r, n_max=0, state=PurePairState(coeffs=np.array([1.0, 0.0])), tail_weight=0.0)
    if n_max + 1 > MAX_AMPLITUDES:
        raise DomainError(f"r={r} needs {n_max + 1} amplitudes, above {MAX_AMPLITUDES}")
    coeffs = np.exp(0.5 * log_tanh_sq(r) * np.arange(n_max + 1))
    coeffs /= np.linalg.norm(coeffs)
    return SqueezedState(
        r=r,
        n_max=n_max,
        state=PurePairState(coeffs=coeffs),
        tail_weight=tail_weight(r, n_max),
    )


def _entropy_nats(r: float) -> float:
    """cosh^2 ln cosh^2 - sinh^2 ln sinh^2 = ln cosh^2 + sinh^2 ln(1 + 1/sinh^2)."""
    if r == 0.0:
        return 0.0
    sh2 = math.sinh(r) ** 2
    return 2.0 * math.log(math.cosh(r)) + sh2 * math.log1p(1.0 / sh2)


def _sech_sq(r: float) -> float:
    return 1.0 / math.cosh(r) ** 2


def _tanh_sq_log(r: float) -> float:
    """tanh^2 ln tanh^2 with tanh^2 = 1 - sech^2."""
    sech2 = _sech_sq(r)
    return (1.0 - sech2) * math.log1p(-sech2) if sech2 < 1.0 else 0.0


def _bracket_nats(r: float) -> float:
    sech2 = _sech_sq(r)
    return float(xlogy(sech2, sech2)) - _tanh_sq_log(r)


def closed_form_measures(r: float, base: BaseLike = None) -> ClosedForm:
    """
    N, S and both closed forms of F; all zero at r = 0.

    The Heaviside step is 0 at the switch point cosh^2 r = 2, where the extra
    bracket vanishes anyway.
    """
    _check_r(r)
    base = as_base(base)
    s_nats = _entropy_nats(r)
    sech2 = _sech_sq(r)
    step = 1.0 if 0.5 - sech2 > 0.0 else 0.0
    f_heaviside = s_nats + step * _bracket_nats(r)

    if sech2 >= 0.5:
        f_first_row = s_nats
    else:
        # H2(tanh^2) + sech^2 S
        f_first_row = -float(xlogy(sech2, sech2)) - _tanh_sq_log(r) + sech2 * s_nats

    return ClosedForm(
        r=r,
        N=math.exp(r) * math.sinh(r),
        S=base.from_nats(s_nats),
        F_heaviside=base.from_nats(f_heaviside),
        F_first_row=base.from_nats(f_first_row),
        log_base=base,
    )


def s_limit(n: float, dims: Sequence[int], base: BaseLike = None) -> Dict[int, float]:
    """s(N, d) over growing d; it tends to 0 at fixed N."""
    return {d: bound_s(n, d, base) for d in dims}


def verify_against_truncation(
    r: float, tail_threshold: float = DEFAULT_TAIL, base: BaseLike = None
) -> TruncationReport:
    """
    Compare the truncated state's N, S and F with the closed forms.

    The numeric F (bounds module on the truncated state) is checked against
    the first-row closed form. s is evaluated at the numeric N for
    d = (n_max + 1) * 2^k, k = 0..3, and must decrease strictly when N > 0.

    Raises:
        DomainError: for r outside [0, 3]
        ToleranceExceeded: with diagnostics when any comparison fails
    """
    if not 0.0 <= r <= MAX_VERIFY_R:
        raise DomainError(f"Verification range is r in [0, {MAX_VERIFY_R}], got {r}")
    base = as_base(base)
    squeezed = make_squeezed(r, tail_threshold)
    exact = closed_form_measures(r, base)
    tol = max(1e-8, 10.0 * tail_threshold)

    numeric_n = negativity(squeezed.state)
    numeric_s = entropy_pure(squeezed.state, base)
    numeric_f = bound_F(squeezed.state, base)
    dims = [squeezed.dim * 2**k for k in range(4)]
    s_values = s_limit(numeric_n, dims, base)

    diagnostics = {
        "r": r,
        "n_max": squeezed.n_max,
        "tolerance": tol,
        "N_error": abs(numeric_n - exact.N),
        "S_error": abs(numeric_s - exact.S),
        "F_error": abs(numeric_f - exact.F_first_row),
    }
    failed = [key for key in ("N_error", "S_error", "F_error") if diagnostics[key] > tol]
    if numeric_n > 0.0:
        ordered = [s_values[d] for d in dims]
        if any(b >= a for a, b in zip(ordered, ordered[1:])):
            failed.append("s_not_decreasing")
            diagnostics["s_by_dim"] = {str(d): v for d, v in s_values.items()}
    if failed:
        raise ToleranceExceeded(f"Truncation check failed at r={r}: {', '.join(failed)}", diagnostics)

    logger.debug(f"r={r}: n_max={squeezed.n_max}, N error {diagnostics['N_error']:.2e}")
    return TruncationReport(
        r=r,
        n_max=squeezed.n_max,
        tail_weight=squeezed.tail_weight,
        tolerance=tol,
        closed_form=exact,
        numeric_N=numeric_n,
        numeric_S=numeric_s,
        numeric_F=numeric_f,
        s_by_dim=s_values,
        forms_agree=abs(exact.F_heaviside - exact.F_first_row) <= 1e-9,
    )


def sweep_curve(
    r_min: float,
    r_max: float,
    steps: int,
    base: BaseLike = None,
    tail_threshold: float = DEFAULT_TAIL,
    threads: Optional[int] = None,
) -> List[Dict[str, float]]:
    """
    Uniform r grid with closed-form S, F and N; rows carry n_max and tail_weight.

    Raises:
        DomainError: unless 0 <= r_min < r_max and steps >= 2
    """
    if r_min < 0.0 or r_min >= r_max or steps < 2:
        raise DomainError(f"Need 0 <= r_min < r_max and steps >= 2, got ({r_min}, {r_max}, {steps})")

    def row(r: float) -> Dict[str, float]:
        exact = closed_form_measures(r, base)
        n_max = truncation_cutoff(r, tail_threshold)
        return {
            "r": r,
            "S": exact.S,
            "F": exact.F,
            "N": exact.N,
            "n_max": n_max,
            "tail_weight": tail_weight(r, n_max),
        }

    return ordered_map(row, [float(r) for r in np.linspace(r_min, r_max, steps)], threads)


def write_curve_rows(rows: Iterable[Dict[str, float]], handle: TextIO) -> int:
    """Header plus one row per r value; returns the row count."""
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    count = 0
    for row in rows:
        writer.writerow([f"{row[k]:.17g}" if k != "n_max" else str(row[k]) for k in CSV_HEADER])
        count += 1
    return count


def write_curve_csv(rows: Iterable[Dict[str, float]], path: Path) -> int:
    with open(path, "w", newline="") as handle:
        return write_curve_rows(rows, handle)
