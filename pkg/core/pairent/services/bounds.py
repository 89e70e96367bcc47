"""
EOF Lower Bounds

Lower bounds to the entanglement of formation of pair states:
- F: entropy of the alpha spectrum built from the first row of rho
  (relabeled so that Gamma_1 >= Gamma_2 >= ...), a proven bound
- G: the same construction with every row contributing its own alpha
- s(N): the negativity-only bound with its gamma(N) helper
- best_bound: max{F, G, s}
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import numpy as np

from pairent.errors import DomainError
from pairent.services.logbase import BaseLike, LogBase, as_base, shannon
from pairent.services.measures import negativity
from pairent.services.pairstate import (
    CLAMP_TOL,
    PairDensityMatrix,
    PurePairState,
    coupling_squares,
    relabel_by_gamma,
    sqrt_gap,
)
from pairent.services.parallel import ordered_map

logger = logging.getLogger(__name__)

PairState = Union[PairDensityMatrix, PurePairState]


@dataclass(frozen=True)
class FirstRowVector:
    """Off-diagonal first-row entries x = (rho_12, ..., rho_1d) after relabeling."""

    components: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.components.size) + 1

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.components)

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.moduli**2))


@dataclass(frozen=True)
class AlphaSpectrum:
    """alpha_i^2 values; normalized in F mode only."""

    alphas_sq: np.ndarray
    mode: Literal["F", "G"]

    def entropy(self, base: BaseLike = None) -> float:
        return shannon(self.alphas_sq, base)


@dataclass(frozen=True)
class BoundReport:
    """All three bounds for one state, and their maximum."""

    F: float
    G: float
    s: float
    best: float
    negativity: float
    dim: int
    log_base: LogBase

    def to_dict(self) -> Dict[str, Any]:
        return {
            "F": self.F,
            "G": self.G,
            "s": self.s,
            "best": self.best,
            "N": self.negativity,
            "dim": self.dim,
            "log_base": self.log_base.value,
        }


def _gamma_order(state: PairState) -> np.ndarray:
    if isinstance(state, PurePairState):
        weights = state.weights
        return np.argsort(-(weights * (1.0 - weights)), kind="stable")
    return np.argsort(-coupling_squares(state), kind="stable")


def first_row_vector(state: PairState) -> FirstRowVector:
    """
    First-row off-diagonals in the Gamma-relabeled basis.

    Pure states are handled from their amplitudes (rho_1j = c_1 conj(c_j)) so
    large truncated states never need a d x d matrix.
    """
    if isinstance(state, PurePairState):
        c = state.coeffs[_gamma_order(state)]
        return FirstRowVector(components=c[0] * np.conj(c[1:]))
    relabeled, _ = relabel_by_gamma(state)
    return FirstRowVector(components=np.array(relabeled.entries[0, 1:]))


def alpha_spectrum_F(x: Union[FirstRowVector, Sequence[float]]) -> AlphaSpectrum:
    """
    alpha_1^2 = (1 + sqrt(1 - 4|x|^2)) / 2, alpha_i^2 = |x_i|^2 / alpha_1^2.

    Raises:
        DomainError: if |x|^2 exceeds 1/4 beyond round-off
    """
    moduli = x.moduli if isinstance(x, FirstRowVector) else np.abs(np.asarray(x, dtype=float))
    moduli_sq = moduli**2
    a1 = 0.5 * (1.0 + sqrt_gap(float(np.sum(moduli_sq))))
    return AlphaSpectrum(alphas_sq=np.concatenate(([a1], moduli_sq / a1)), mode="F")


def F_from_moduli(v: Sequence[float], base: BaseLike = None) -> float:
    """F as a function of the real non-negative vector v = (|x_2|, ..., |x_d|)."""
    return alpha_spectrum_F(v).entropy(base)


def bound_F(state: PairState, base: BaseLike = None) -> float:
    """Lower bound F from the relabeled first row; 0 when that row vanishes."""
    return alpha_spectrum_F(first_row_vector(state)).entropy(base)


def row_norms_sq(state: PairState) -> np.ndarray:
    """|x_i|^2 = Gamma_i^2 for every row, in the Gamma-relabeled order."""
    if isinstance(state, PurePairState):
        weights = state.weights
        gamma_sq = weights * (1.0 - weights)
    else:
        gamma_sq = coupling_squares(state)
    return np.sort(gamma_sq, kind="stable")[::-1]


def alpha_spectrum_G(state: PairState) -> AlphaSpectrum:
    """
    alpha_1^2 = (1 + sqrt(1 - 4|x_1|^2)) / 2, alpha_i^2 = (1 - sqrt(1 - 4|x_i|^2)) / 2.

    The minus branch is evaluated as 2|x_i|^2 / (1 + sqrt(1 - 4|x_i|^2)).
    """
    norms_sq = row_norms_sq(state)
    gaps = np.array([sqrt_gap(float(n), "|x_i|^2") for n in norms_sq])
    alphas_sq = 2.0 * norms_sq / (1.0 + gaps)
    alphas_sq[0] = 0.5 * (1.0 + gaps[0])
    return AlphaSpectrum(alphas_sq=alphas_sq, mode="G")


def bound_G(state: PairState, base: BaseLike = None) -> float:
    """Lower bound G from all rows; 0 for diagonal rho."""
    return alpha_spectrum_G(state).entropy(base)


def binary_entropy(p: float, base: BaseLike = None) -> float:
    """
    H2(p) = -p log p - (1 - p) log(1 - p).

    Raises:
        DomainError: if p lies outside [0, 1] by more than 1e-12
    """
    if p < -CLAMP_TOL or p > 1.0 + CLAMP_TOL:
        raise DomainError(f"Binary entropy argument {p} outside [0, 1]")
    p = min(max(p, 0.0), 1.0)
    return shannon([p, 1.0 - p], base)


def _check_negativity(n: float, d: int) -> float:
    if d < 2:
        raise DomainError(f"Dimension must be >= 2, got {d}")
    top = 0.5 * (d - 1)
    if n < -CLAMP_TOL or n > top + CLAMP_TOL:
        raise DomainError(f"Negativity {n} outside [0, {top}] for d={d}")
    return min(max(n, 0.0), top)


def s_breakpoint(d: int) -> float:
    """N* = 3/2 - 2/d, where the two branches of s(N) meet."""
    return 1.5 - 2.0 / d


def gamma_of_N(n: float, d: int) -> float:
    """gamma(N) = [sqrt(2N + 1) + sqrt((d - 1)(d - 2N - 1))]^2 / d^2, in [1/d, 1]."""
    n = _check_negativity(n, d)
    root = np.sqrt(2.0 * n + 1.0) + np.sqrt(max(0.0, (d - 1) * (d - 2.0 * n - 1.0)))
    return float(min(1.0, root * root / (d * d)))


def bound_s(n: float, d: int, base: BaseLike = None) -> float:
    """
    Negativity-only bound s(N).

    For N <= N*: H2(gamma) + (1 - gamma) log(d - 1).
    Above N*: (2N + 1 - d) / (d - 2) * log(d - 1) + log d.
    d = 2 only has the first branch.
    """
    base = as_base(base)
    n = _check_negativity(n, d)
    if d == 2 or n <= s_breakpoint(d):
        gamma = gamma_of_N(n, d)
        return binary_entropy(gamma, base) + (1.0 - gamma) * float(base.log(d - 1))
    return float(
        (2.0 * n + 1.0 - d) / (d - 2.0) * base.log(d - 1) + base.log(d)
    )


def s_curve(d: int, points: int = 101, base: BaseLike = None) -> List[Dict[str, float]]:
    """s(N) sampled on a uniform grid over [0, (d - 1)/2]."""
    grid = np.linspace(0.0, 0.5 * (d - 1), points)
    return [{"N": float(n), "s": bound_s(float(n), d, base)} for n in grid]


def best_bound(state: PairState, base: BaseLike = None) -> BoundReport:
    """F, G, s(N(rho)) and best = max{F, G, s}."""
    base = as_base(base)
    n = negativity(state)
    f_value = bound_F(state, base)
    g_value = bound_G(state, base)
    s_value = bound_s(n, state.dim, base)
    return BoundReport(
        F=f_value,
        G=g_value,
        s=s_value,
        best=max(f_value, g_value, s_value),
        negativity=n,
        dim=state.dim,
        log_base=base,
    )


def best_bounds(
    states: Sequence[PairState], base: BaseLike = None, threads: Optional[int] = None
) -> List[BoundReport]:
    """best_bound over many states; output order matches input order."""
    return ordered_map(lambda state: best_bound(state, base), states, threads)
