"""
Pair-Basis States

Core state types for pure and mixed states written in a pair basis |i,i>:
- PurePairState: amplitudes c_i
- PairDensityMatrix: the d x d block rho_ij in the pair basis
- SchmidtProfile: Schmidt weights, couplings Gamma_i and sign flags

All types are immutable; every operation is a pure function.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from pairent.errors import (
    DimensionMismatch,
    DomainError,
    HermiticityViolation,
    NegativeDiagonal,
    PSDViolation,
    TraceViolation,
    ZeroVector,
)
from pairent.services.jacobi import min_eigenvalue

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-9
TRACE_TOL = 1e-10
DIAGONAL_FLOOR = -1e-12
PSD_TOL = 1e-9
CLAMP_TOL = 1e-12
ZERO_NORM = 1e-14


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def clamped_gap(value: float, what: str = "1 - 4|x|^2") -> float:
    """Clamp round-off negatives of a quantity that must be >= 0."""
    if value >= 0.0:
        return value
    if value >= -CLAMP_TOL:
        return 0.0
    raise DomainError(f"{what} = {value:.3e} is negative beyond round-off")


def sqrt_gap(norm_sq: float, what: str = "|x|^2") -> float:
    """sqrt(1 - 4 * norm_sq) with the boundary clamp."""
    if norm_sq > 0.25 + CLAMP_TOL:
        raise DomainError(f"{what} = {norm_sq:.15g} exceeds 1/4")
    return float(np.sqrt(max(0.0, 1.0 - 4.0 * norm_sq)))


@dataclass(frozen=True)
class PurePairState:
    """Pure state sum_i c_i |i,i> with unit-norm amplitudes."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(self.coeffs))
        if self.coeffs.ndim != 1 or self.coeffs.size < 2:
            raise DimensionMismatch(
                f"Pure pair states need a 1-D vector with dim >= 2, got {self.coeffs.shape}"
            )
        norm_sq = float(np.sum(np.abs(self.coeffs) ** 2))
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise DomainError(f"Coefficients are not normalized (norm^2 = {norm_sq})")

    @property
    def dim(self) -> int:
        return int(self.coeffs.size)

    @property
    def weights(self) -> np.ndarray:
        """Schmidt weights mu_i^2 = |c_i|^2."""
        return np.abs(self.coeffs) ** 2

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "pure",
            "dim": self.dim,
            "real": self.coeffs.real.tolist(),
            "imag": self.coeffs.imag.tolist(),
        }


@dataclass(frozen=True)
class PairDensityMatrix:
    """Mixed pair state rho_ij; validated Hermitian, unit trace and PSD."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))
        validate_density(self.entries)

    @classmethod
    def from_trusted(cls, entries: np.ndarray) -> "PairDensityMatrix":
        """Build from entries that are PSD by construction (mixtures, permutations)."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "entries", _frozen(entries))
        validate_density(obj.entries, check_psd=False)
        return obj

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": "mixed",
            "dim": self.dim,
            "real": self.entries.real.tolist(),
            "imag": self.entries.imag.tolist(),
        }


@dataclass(frozen=True)
class SchmidtProfile:
    """Schmidt weights, couplings and sign flags of a pure pair state."""

    weights: np.ndarray
    couplings: np.ndarray
    signs: np.ndarray
    permutation: Tuple[int, ...] = field(default=())

    def reconstructed_weights(self) -> np.ndarray:
        """mu_i^2 = (1 - eps_i sqrt(1 - 4 Gamma_i^2)) / 2."""
        gaps = np.array([sqrt_gap(g * g, "Gamma_i^2") for g in self.couplings])
        return 0.5 * (1.0 - self.signs * gaps)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "weights": self.weights.tolist(),
            "couplings": self.couplings.tolist(),
            "signs": self.signs.astype(int).tolist(),
            "permutation": list(self.permutation),
        }


def validate_density(entries: np.ndarray, check_psd: bool = True) -> None:
    """
    Check the pair density-matrix invariants.

    Raises:
        DimensionMismatch, HermiticityViolation, TraceViolation,
        NegativeDiagonal or PSDViolation
    """
    if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
        raise DimensionMismatch(f"Density matrix must be square, got {entries.shape}")
    if entries.shape[0] < 2:
        raise DimensionMismatch("Density matrix dimension must be >= 2")

    asym = float(np.max(np.abs(entries - entries.conj().T)))
    if asym > HERMITIAN_TOL:
        raise HermiticityViolation(f"max |rho_ij - conj(rho_ji)| = {asym:.3e}")

    diag = np.diag(entries)
    if np.max(np.abs(diag.imag)) > HERMITIAN_TOL:
        raise HermiticityViolation("Diagonal has an imaginary part")
    trace = float(np.sum(diag.real))
    if abs(trace - 1.0) > TRACE_TOL:
        raise TraceViolation(f"Trace is {trace!r}")
    if float(np.min(diag.real)) < DIAGONAL_FLOOR:
        raise NegativeDiagonal(f"Smallest diagonal entry {np.min(diag.real):.3e}")

    if not check_psd:
        return
    lowest = min_eigenvalue(entries)
    if lowest < -PSD_TOL:
        raise PSDViolation(f"Minimum eigenvalue {lowest:.3e}")


def make_pure(dim: int, coeffs: Sequence[complex]) -> PurePairState:
    """
    Build a normalized pure pair state; input phases are kept verbatim.

    Raises:
        DimensionMismatch: if len(coeffs) != dim or dim < 2
        ZeroVector: if the vector norm is below 1e-14
    """
    vector = np.asarray(coeffs, dtype=complex).ravel()
    if dim < 2 or vector.size != dim:
        raise DimensionMismatch(f"Expected {dim} >= 2 coefficients, got {vector.size}")
    norm = float(np.linalg.norm(vector))
    if norm < ZERO_NORM:
        raise ZeroVector(f"Coefficient norm {norm:.3e} is zero")
    return PurePairState(coeffs=vector / norm)


def make_density(entries: Any) -> PairDensityMatrix:
    return PairDensityMatrix(entries=np.asarray(entries, dtype=complex))


def density_of_pure(psi: PurePairState) -> PairDensityMatrix:
    """rho_ij = c_i conj(c_j)."""
    return PairDensityMatrix.from_trusted(np.outer(psi.coeffs, psi.coeffs.conj()))


def mix(weights: Sequence[float], states: List[PurePairState]) -> PairDensityMatrix:
    """Convex combination sum_k p_k |psi_k><psi_k| of pure pair states."""
    p = np.asarray(weights, dtype=float)
    if p.size != len(states) or p.size == 0:
        raise DimensionMismatch(f"{p.size} weights for {len(states)} states")
    if np.any(p < 0.0) or abs(float(p.sum()) - 1.0) > 1e-12:
        raise DomainError("Weights must lie on the probability simplex")
    dims = {s.dim for s in states}
    if len(dims) != 1:
        raise DimensionMismatch(f"States have mixed dimensions {sorted(dims)}")
    amplitudes = np.stack([s.coeffs for s in states])
    entries = np.einsum("k,ki,kj->ij", p, amplitudes, amplitudes.conj())
    return PairDensityMatrix.from_trusted(entries)


def coupling_squares(rho: PairDensityMatrix) -> np.ndarray:
    """Gamma_i^2 = sum_{j != i} |rho_ij|^2."""
    moduli_sq = np.abs(rho.entries) ** 2
    return moduli_sq.sum(axis=1) - np.diag(moduli_sq)


def _eps_signs(weights: np.ndarray) -> np.ndarray:
    signs = np.ones(weights.size)
    signs[weights > 0.5] = -1.0
    return signs


def schmidt_from_pure(psi: PurePairState) -> SchmidtProfile:
    """
    Schmidt weights, couplings and sign flags of a pure state.

    Gamma_i^2 = mu_i^2 (1 - mu_i^2); eps_i = -1 only for a weight above 1/2.
    The permutation sorts Gamma descending (stable).
    """
    weights = psi.weights
    couplings_sq = weights * (1.0 - weights)
    couplings = np.sqrt(np.clip(couplings_sq, 0.0, None))
    permutation = tuple(np.argsort(-couplings_sq, kind="stable").tolist())
    return SchmidtProfile(
        weights=weights,
        couplings=couplings,
        signs=_eps_signs(weights),
        permutation=permutation,
    )


def recover_weights(rho: PairDensityMatrix, first_sign: float = -1.0) -> np.ndarray:
    """
    Recover Schmidt weights of a pure state from the first row of rho.

    mu_1^2 comes from Gamma_1 with the supplied sign; the rest follow from
    mu_j^2 = |rho_1j|^2 / mu_1^2.

    Raises:
        DomainError: if mu_1^2 vanishes
    """
    gamma_sq = coupling_squares(rho)
    mu1_sq = 0.5 * (1.0 - first_sign * sqrt_gap(float(gamma_sq[0]), "Gamma_1^2"))
    if mu1_sq <= 0.0:
        raise DomainError("First Schmidt weight is zero; first row carries no data")
    weights = np.abs(rho.entries[0]) ** 2 / mu1_sq
    weights[0] = mu1_sq
    return weights


def relabel_by_gamma(rho: PairDensityMatrix) -> Tuple[PairDensityMatrix, Tuple[int, ...]]:
    """
    Permute rows and columns so Gamma_i is non-increasing.

    Ties keep the original index order.

    Returns:
        The permuted matrix and the permutation (new position -> old index)
    """
    order = np.argsort(-coupling_squares(rho), kind="stable")
    permuted = rho.entries[np.ix_(order, order)]
    return PairDensityMatrix.from_trusted(permuted), tuple(order.tolist())
