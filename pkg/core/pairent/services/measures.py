"""
Entanglement Measures

Exact measures for pair-basis states:
- von Neumann entropy of pure states
- generalized concurrence D = 2 sum_{i<j} |c_i c_j|
- negativity sum_{i<j} |rho_ij| and logarithmic negativity
- a full d^2 x d^2 partial-transpose oracle for pure states
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional, Union

import numpy as np

from pairent.errors import DimensionMismatch, DimensionTooLarge
from pairent.services.jacobi import eigvalsh
from pairent.services.logbase import BaseLike, LogBase, as_base, shannon
from pairent.services.pairstate import (
    PairDensityMatrix,
    PurePairState,
    density_of_pure,
    sqrt_gap,
)

logger = logging.getLogger(__name__)

ORACLE_MAX_DIM = 32


@dataclass(frozen=True)
class MeasureReport:
    """Measures of one state; entropy and D are only defined for pure inputs."""

    negativity: float
    log_negativity: float
    log_base: LogBase
    entropy: Optional[float] = None
    concurrence_sum_D: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "S": self.entropy,
            "D": self.concurrence_sum_D,
            "N": self.negativity,
            "E_N": self.log_negativity,
            "log_base": self.log_base.value,
        }


def entropy_pure(psi: PurePairState, base: BaseLike = None) -> float:
    """S = -sum mu_i^2 log mu_i^2, in [0, log d]."""
    return shannon(psi.weights, base)


def concurrence_sum(psi: PurePairState) -> float:
    """
    D = 2 sum_{i<j} |c_i c_j| = (sum |c_i|)^2 - 1.

    Evaluated as (sum |c_i|)^2 - sum |c_i|^2, which is the pair sum term by term.
    """
    moduli = np.abs(psi.coeffs)
    total = float(np.sum(moduli))
    return max(0.0, total * total - float(np.sum(moduli * moduli)))


def negativity(state: Union[PairDensityMatrix, PurePairState]) -> float:
    """
    N = sum_{i<j} |rho_ij|; zero only for diagonal rho.

    Pure inputs use D/2, which avoids building the d x d matrix.
    """
    if isinstance(state, PurePairState):
        return 0.5 * concurrence_sum(state)
    return float(np.sum(np.triu(np.abs(state.entries), k=1)))


def log_negativity(
    state: Union[PairDensityMatrix, PurePairState], base: BaseLike = None
) -> float:
    """E_N = log(1 + 2N)."""
    return float(as_base(base).log(1.0 + 2.0 * negativity(state)))


def measure(
    state: Union[PairDensityMatrix, PurePairState], base: BaseLike = None
) -> MeasureReport:
    """All measures of a state in one report."""
    base = as_base(base)
    n = negativity(state)
    pure = isinstance(state, PurePairState)
    return MeasureReport(
        negativity=n,
        log_negativity=float(base.log(1.0 + 2.0 * n)),
        log_base=base,
        entropy=entropy_pure(state, base) if pure else None,
        concurrence_sum_D=concurrence_sum(state) if pure else None,
    )


def wootters_eof(rho: PairDensityMatrix, base: BaseLike = None) -> float:
    """
    Closed-form EOF of a d=2 pair state.

    The concurrence of rho is 2|rho_12|, so the EOF is H2((1 + sqrt(1 - C^2)) / 2).
    """
    if rho.dim != 2:
        raise DimensionMismatch(f"Closed-form EOF needs d=2, got d={rho.dim}")
    modulus = float(abs(rho.entries[0, 1]))
    a = 0.5 * (1.0 + sqrt_gap(modulus * modulus, "|rho_12|^2"))
    return shannon([a, 1.0 - a], base)


def partial_transpose_full(psi: PurePairState) -> np.ndarray:
    """
    rho^{T_A} of a pure pair state in the full |i,j> basis (index i*d + j).

    <i,j| rho^{T_A} |i',j'> = <i',j| rho |i,j'> = delta_{ij'} delta_{i'j} c_i' conj(c_i).

    Raises:
        DimensionTooLarge: above d = 32
    """
    d = psi.dim
    if d > ORACLE_MAX_DIM:
        raise DimensionTooLarge(f"Oracle limited to d <= {ORACLE_MAX_DIM}, got {d}")
    full = np.zeros((d * d, d * d), dtype=complex)
    c = psi.coeffs
    for i in range(d):
        for k in range(d):
            # row |i,k>, column |k,i>
            full[i * d + k, k * d + i] = c[k] * np.conj(c[i])
    return full


def pt_spectrum_oracle(psi: PurePairState) -> np.ndarray:
    """All d^2 eigenvalues of rho^{T_A}, ascending, from an independent diagonalization."""
    return eigvalsh(partial_transpose_full(psi))


def trace_norm_pt(psi: PurePairState) -> float:
    """||rho^{T_A}||_1 from the oracle spectrum; equals 1 + 2N."""
    return float(np.sum(np.abs(pt_spectrum_oracle(psi))))


def oracle_negativity(psi: PurePairState) -> float:
    """|sum of negative partial-transpose eigenvalues|."""
    spectrum = pt_spectrum_oracle(psi)
    return float(-np.sum(spectrum[spectrum < 0.0]))


def negativity_of_pure(psi: PurePairState) -> float:
    """Negativity read off the density matrix of psi rather than its amplitudes."""
    return negativity(density_of_pure(psi))
