"""
Convex-Roof Oracle

Numerical entanglement of formation for small pair states (d <= 4).

Every decomposition of rho with K members is U W^T, where W holds the
sqrt(lambda)-weighted eigenvectors of rho as columns and U is a K x rank
isometry. The search rotates pairs of rows of U (Givens rotations, real and
imaginary generators) and keeps a move only when the average entropy drops,
halving the step after a sweep without improvement. Random restarts run in
parallel; the reported value is an upper bound on the true EOF.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import entr

from pairent.config import settings as run_settings
from pairent.errors import CertificationFailure, DimensionTooLarge, RankError
from pairent.services.bounds import BoundReport, best_bound
from pairent.services.ensembles import EnsembleSample, derive_seed
from pairent.services.jacobi import jacobi_eigh
from pairent.services.logbase import BaseLike, as_base, shannon
from pairent.services.measures import wootters_eof
from pairent.services.pairstate import PairDensityMatrix, PurePairState
from pairent.services.parallel import ordered_map

logger = logging.getLogger(__name__)

MAX_DIM = 4
RANK_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-10
INITIAL_STEP = np.pi / 8
MIN_STEP = 1e-7
STALE_RESTARTS = 5
STALE_IMPROVEMENT = 1e-8
CERTIFY_SLACK = 1e-6
MEMBER_FLOOR = 1e-15


@dataclass(frozen=True)
class RoofResult:
    """Best decomposition found by the search."""

    eof_estimate: float
    best_decomposition: EnsembleSample
    restarts_used: int
    converged: bool
    members: int
    rank: int
    trace: Tuple[float, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eof_estimate": self.eof_estimate,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "members": self.members,
            "rank": self.rank,
            "log_base": self.best_decomposition.log_base.value,
            "decomposition": {
                "weights": self.best_decomposition.weights.tolist(),
                "states": [s.to_dict() for s in self.best_decomposition.states],
            },
        }


@dataclass(frozen=True)
class CertificationReport:
    """Roof estimate against the three lower bounds."""

    roof: RoofResult
    bounds: BoundReport
    gaps: Dict[str, float]
    wootters: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "eof_estimate": self.roof.eof_estimate,
            "F": self.bounds.F,
            "G": self.bounds.G,
            "s": self.bounds.s,
            "best": self.bounds.best,
            "gaps": self.gaps,
            "roof": self.roof.to_dict(),
        }
        if self.wootters is not None:
            data["wootters"] = self.wootters
        return data


@dataclass
class _Search:
    """Mutable state of one restart."""

    isometry: np.ndarray
    amplitudes: np.ndarray
    row_costs: np.ndarray
    trace: List[float] = field(default_factory=list)

    @property
    def value(self) -> float:
        return float(np.sum(self.row_costs))


def weighted_eigenvectors(rho: PairDensityMatrix) -> np.ndarray:
    """
    Columns sqrt(lambda_j) v_j for the eigenvalues above RANK_TOL.

    Returns:
        d x rank matrix W with W W^dagger = rho
    """
    eig = jacobi_eigh(rho.entries)
    keep = eig.values > RANK_TOL
    return eig.vectors[:, keep] * np.sqrt(eig.values[keep])


def _row_costs(amplitudes: np.ndarray) -> np.ndarray:
    # p_k H(psi_k) = sum_i entr(|Psi_ki|^2) - entr(p_k), in nats
    moduli_sq = np.abs(amplitudes) ** 2
    return entr(moduli_sq).sum(axis=1) - entr(moduli_sq.sum(axis=1))


def average_entropy(isometry: np.ndarray, weighted: np.ndarray, base: BaseLike = None) -> float:
    """Average member entropy of the decomposition U W^T."""
    return float(as_base(base).from_nats(np.sum(_row_costs(isometry @ weighted.T))))


def random_isometry(members: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-like K x rank isometry from the QR factor of a complex Gaussian."""
    gauss = rng.normal(size=(members, rank)) + 1j * rng.normal(size=(members, rank))
    q, r = np.linalg.qr(gauss)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def identity_isometry(members: int, rank: int) -> np.ndarray:
    return np.eye(members, rank, dtype=complex)


def reconstruct(amplitudes: np.ndarray) -> np.ndarray:
    """rho_ij = sum_k Psi_ki conj(Psi_kj)."""
    return amplitudes.T @ amplitudes.conj()


def _check_decomposition(search: _Search, target: np.ndarray) -> None:
    """
    Compare the rebuilt state with W W^dagger, the rank-truncated rho.

    Eigenvalues at or below RANK_TOL (including the slightly negative ones the
    PSD validator admits) are not part of any decomposition.
    """
    if search.amplitudes.shape[1] != target.shape[0]:
        raise CertificationFailure("Decomposition members left the pair basis")
    drift = float(np.max(np.abs(reconstruct(search.amplitudes) - target)))
    if drift > RECONSTRUCTION_TOL:
        raise CertificationFailure(f"Decomposition no longer reproduces rho (drift {drift:.3e})")


def _givens(theta: float, imaginary: bool) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    if imaginary:
        return np.array([[c, 1j * s], [1j * s, c]])
    return np.array([[c, -s], [s, c]])


def _sweep(search: _Search, step: float, target: np.ndarray, audit: bool) -> bool:
    """One pass over all row pairs and generators; True if any move was kept."""
    improved = False
    members = search.amplitudes.shape[0]
    for a in range(members):
        for b in range(a + 1, members):
            rows = [a, b]
            for imaginary in (False, True):
                for theta in (step, -step):
                    g = _givens(theta, imaginary)
                    trial = g @ search.amplitudes[rows]
                    costs = _row_costs(trial)
                    if costs.sum() < search.row_costs[rows].sum():
                        search.amplitudes[rows] = trial
                        search.isometry[rows] = g @ search.isometry[rows]
                        search.row_costs[rows] = costs
                        improved = True
                        if audit:
                            _check_decomposition(search, target)
    return improved


def _run_restart(
    weighted: np.ndarray,
    members: int,
    iters: int,
    restart: int,
    seed: int,
) -> _Search:
    rank = weighted.shape[1]
    if restart == 0:
        isometry = identity_isometry(members, rank)
    else:
        isometry = random_isometry(members, rank, np.random.default_rng(derive_seed(seed, restart)))
    amplitudes = isometry @ weighted.T
    target = weighted @ weighted.conj().T
    search = _Search(isometry=isometry, amplitudes=amplitudes, row_costs=_row_costs(amplitudes))
    search.trace.append(search.value)

    step = INITIAL_STEP
    for _ in range(iters):
        if step < MIN_STEP:
            break
        if not _sweep(search, step, target, audit=run_settings.debug):
            step *= 0.5
        search.trace.append(search.value)
    _check_decomposition(search, target)
    return search


def _to_sample(
    search: _Search, rho: PairDensityMatrix, seed: int, base: BaseLike
) -> EnsembleSample:
    base = as_base(base)
    weights = np.sum(np.abs(search.amplitudes) ** 2, axis=1)
    keep = weights > MEMBER_FLOOR
    states = tuple(
        PurePairState(coeffs=row / np.sqrt(p))
        for row, p in zip(search.amplitudes[keep], weights[keep])
    )
    avg = float(sum(p * shannon(s.weights, base) for p, s in zip(weights[keep], states)))
    return EnsembleSample(
        weights=weights[keep], states=states, rho=rho, avg_entropy=avg, seed=seed, log_base=base
    )


def eof_convex_roof(
    rho: PairDensityMatrix,
    members: Optional[int] = None,
    restarts: int = 8,
    iters: int = 400,
    seed: int = 0,
    base: BaseLike = None,
    threads: Optional[int] = None,
) -> RoofResult:
    """
    Minimize the average entropy over decompositions of rho.

    Restart 0 starts from the eigen-decomposition itself; restart i > 0 from a
    random isometry seeded by (seed, i). Restarts are evaluated in batches and
    reduced in index order, stopping once STALE_RESTARTS consecutive restarts
    improve the running minimum by less than STALE_IMPROVEMENT.

    Args:
        rho: Pair density matrix with d <= 4
        members: Decomposition size K (defaults to rank + 2)
        restarts: Maximum number of restarts
        iters: Coordinate sweeps per restart
        seed: Root seed
        base: Logarithm base of the estimate

    Returns:
        RoofResult; eof_estimate is the best decomposition's average entropy

    Raises:
        DimensionTooLarge: for d > 4
        RankError: if K is below the numerical rank of rho
    """
    if rho.dim > MAX_DIM:
        raise DimensionTooLarge(f"Convex-roof search is limited to d <= {MAX_DIM}, got {rho.dim}")
    weighted = weighted_eigenvectors(rho)
    rank = weighted.shape[1]
    members = rank + 2 if members is None else members
    if members < rank:
        raise RankError(f"K={members} is below the rank {rank} of rho")

    batch = max(1, threads or run_settings.threads)
    best: Optional[_Search] = None
    best_index = 0
    stale = 0
    used = 0
    converged = False
    while used < restarts and not converged:
        indices = range(used, min(restarts, used + batch))
        results = ordered_map(
            lambda i: _run_restart(weighted, members, iters, i, seed), indices, threads
        )
        for index, search in zip(indices, results):
            used = index + 1
            if best is None:
                best, best_index = search, index
                continue
            improvement = best.value - search.value
            stale = stale + 1 if improvement < STALE_IMPROVEMENT else 0
            if search.value < best.value:
                best, best_index = search, index
            if stale >= STALE_RESTARTS:
                converged = True
                break

    if not converged:
        logger.warning(f"Convex-roof search used all {used} restarts without settling (d={rho.dim})")
    sample = _to_sample(best, rho, derive_seed(seed, best_index), base)
    logger.info(f"Roof estimate {sample.avg_entropy:.10f} from restart {best_index} of {used}")
    return RoofResult(
        eof_estimate=sample.avg_entropy,
        best_decomposition=sample,
        restarts_used=used,
        converged=converged,
        members=members,
        rank=rank,
        trace=tuple(as_base(base).from_nats(v) for v in best.trace),
    )


def certify_bounds(
    rho: PairDensityMatrix,
    members: Optional[int] = None,
    restarts: int = 8,
    iters: int = 400,
    seed: int = 0,
    base: BaseLike = None,
    threads: Optional[int] = None,
) -> CertificationReport:
    """
    Check that the roof estimate dominates F, G and s.

    Raises:
        CertificationFailure: if eof_estimate < max{F, G, s} - 1e-6
    """
    roof = eof_convex_roof(rho, members, restarts, iters, seed, base, threads)
    bounds = best_bound(rho, base)
    gaps = {
        name: roof.eof_estimate - value
        for name, value in (("F", bounds.F), ("G", bounds.G), ("s", bounds.s), ("best", bounds.best))
    }
    if roof.eof_estimate < bounds.best - CERTIFY_SLACK:
        raise CertificationFailure(
            f"Roof estimate {roof.eof_estimate:.10f} is below the lower bound {bounds.best:.10f}"
        )
    return CertificationReport(
        roof=roof,
        bounds=bounds,
        gaps=gaps,
        wootters=wootters_eof(rho, base) if rho.dim == 2 else None,
    )
