"""
Random Ensembles

Random pure-state decompositions {p_k, psi_k} with real non-negative amplitudes,
and the two stochastic experiments built on them:
- average decomposition entropy against the G (and F) bounds
- F, G, s and their maximum across states ordered by negativity

Weights and squared amplitudes are both flat-Dirichlet (normalized exponentials).
Sample i always uses the seed derived from (seed, i), so results do not depend
on how samples are scheduled across threads.
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from pairent.errors import DomainError
from pairent.services.bounds import bound_s, best_bound, s_curve
from pairent.services.logbase import BaseLike, LogBase, as_base, shannon
from pairent.services.pairstate import PairDensityMatrix, PurePairState, mix
from pairent.services.parallel import ordered_map

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-9
SAMPLING_MEASURE = "flat-dirichlet"
CSV_HEADER = ["dim", "seed", "K", "N", "avg_entropy", "F", "G", "s", "best"]


@dataclass(frozen=True)
class KPolicy:
    """Number of decomposition members per sample: fixed, or uniform on {d, ..., 2d}."""

    fixed: Optional[int] = None

    def draw(self, dim: int, rng: np.random.Generator) -> int:
        if self.fixed is not None:
            return self.fixed
        return int(rng.integers(dim, 2 * dim + 1))

    def describe(self) -> str:
        return f"fixed:{self.fixed}" if self.fixed is not None else "uniform:{d..2d}"


@dataclass(frozen=True)
class EnsembleSample:
    """One decomposition rho = sum_k p_k |psi_k><psi_k|."""

    weights: np.ndarray
    states: Tuple[PurePairState, ...]
    rho: PairDensityMatrix
    avg_entropy: float
    seed: int
    log_base: LogBase

    @property
    def dim(self) -> int:
        return self.rho.dim

    @property
    def members(self) -> int:
        return len(self.states)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "members": self.members,
            "seed": self.seed,
            "weights": self.weights.tolist(),
            "states": [s.to_dict() for s in self.states],
            "avg_entropy": self.avg_entropy,
            "log_base": self.log_base.value,
        }


@dataclass(frozen=True)
class ScatterRecord:
    """Bounds and average entropy of one sampled decomposition."""

    dim: int
    seed: int
    members: int
    negativity: float
    avg_entropy: float
    F: float
    G: float
    s: float
    best: float

    def row(self) -> List[str]:
        return [str(self.dim), str(self.seed), str(self.members)] + [
            f"{value:.17g}"
            for value in (self.negativity, self.avg_entropy, self.F, self.G, self.s, self.best)
        ]


@dataclass
class BisectorResult:
    """Average entropy vs bounds; a violation is a bound above the average entropy."""

    records: List[ScatterRecord]
    g_violations: int
    f_violations: int

    def summary(self) -> Dict[str, Any]:
        return {
            "samples": len(self.records),
            "g_violations": self.g_violations,
            "f_violations": self.f_violations,
        }


@dataclass
class DominanceResult:
    """Bounds ordered by negativity, plus the s(N) reference curve."""

    records: List[ScatterRecord]
    reference_curve: List[Dict[str, float]]
    dominance: Dict[str, float] = field(default_factory=dict)

    def summary(self) -> Dict[str, Any]:
        return {"samples": len(self.records), "dominance": self.dominance}


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed: numpy's hash-mixed spawn of (seed, index)."""
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(index,))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def _simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    draws = rng.exponential(size=size)
    return draws / draws.sum()


def sample_ensemble(
    dim: int, members: int, seed: int, base: BaseLike = None
) -> EnsembleSample:
    """
    Draw one decomposition with K = members real non-negative pure states.

    Deterministic in seed.
    """
    if dim < 2 or members < 1:
        raise DomainError(f"Need dim >= 2 and members >= 1, got ({dim}, {members})")
    base = as_base(base)
    rng = np.random.default_rng(seed)
    weights = _simplex(rng, members)
    states = tuple(
        PurePairState(coeffs=np.sqrt(_simplex(rng, dim))) for _ in range(members)
    )
    rho = mix(weights, list(states))
    avg = float(sum(p * shannon(s.weights, base) for p, s in zip(weights, states)))
    return EnsembleSample(
        weights=weights, states=states, rho=rho, avg_entropy=avg, seed=seed, log_base=base
    )


def _sample_with_policy(
    dim: int, seed: int, index: int, policy: KPolicy, base: LogBase
) -> EnsembleSample:
    sample_seed = derive_seed(seed, index)
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index, 1)))
    return sample_ensemble(dim, policy.draw(dim, rng), sample_seed, base)


def _record(sample: EnsembleSample) -> ScatterRecord:
    report = best_bound(sample.rho, sample.log_base)
    return ScatterRecord(
        dim=sample.dim,
        seed=sample.seed,
        members=sample.members,
        negativity=report.negativity,
        avg_entropy=sample.avg_entropy,
        F=report.F,
        G=report.G,
        s=report.s,
        best=report.best,
    )


def sample_records(
    dim: int,
    num_samples: int,
    seed: int,
    policy: KPolicy = KPolicy(),
    base: BaseLike = None,
    threads: Optional[int] = None,
) -> List[ScatterRecord]:
    """Sample and bound num_samples decompositions; record i depends only on (seed, i)."""
    base = as_base(base)
    return ordered_map(
        lambda index: _record(_sample_with_policy(dim, seed, index, policy, base)),
        range(num_samples),
        threads,
    )


def run_fig1_experiment(
    dim: int,
    num_samples: int,
    policy: KPolicy = KPolicy(),
    seed: int = 0,
    base: BaseLike = None,
    threads: Optional[int] = None,
) -> BisectorResult:
    """
    Compare every sample's average entropy with G and F computed from rho.

    F above the average entropy contradicts the convexity theorem and is logged
    as an error; G violations are the quantity under test.
    """
    logger.info(f"Bisector experiment: d={dim}, samples={num_samples}, K={policy.describe()}")
    records = sample_records(dim, num_samples, seed, policy, base, threads)
    g_violations = sum(1 for r in records if r.G > r.avg_entropy + VIOLATION_TOL)
    f_violations = sum(1 for r in records if r.F > r.avg_entropy + VIOLATION_TOL)
    if f_violations:
        logger.error(f"F exceeded the average entropy in {f_violations} samples (d={dim})")
    logger.info(f"d={dim}: {g_violations} G violations, {f_violations} F violations")
    return BisectorResult(records=records, g_violations=g_violations, f_violations=f_violations)


def dominance_fractions(records: Iterable[ScatterRecord]) -> Dict[str, float]:
    """Fraction of records in which each bound attains the maximum (ties count for each)."""
    records = list(records)
    if not records:
        return {"F": 0.0, "G": 0.0, "s": 0.0}
    counts = {"F": 0, "G": 0, "s": 0}
    for r in records:
        for name in counts:
            if getattr(r, name) == r.best:
                counts[name] += 1
    return {name: count / len(records) for name, count in counts.items()}


def run_fig2_experiment(
    dim: int,
    num_samples: int,
    seed: int = 0,
    base: BaseLike = None,
    policy: KPolicy = KPolicy(),
    curve_points: int = 101,
    threads: Optional[int] = None,
) -> DominanceResult:
    """Bounds for random states sorted by negativity, with dominance statistics."""
    logger.info(f"Bound comparison: d={dim}, samples={num_samples}")
    records = sample_records(dim, num_samples, seed, policy, base, threads)
    records.sort(key=lambda r: r.negativity)
    return DominanceResult(
        records=records,
        reference_curve=s_curve(dim, curve_points, base),
        dominance=dominance_fractions(records),
    )


def s_decay(n: float, dims: Iterable[int], base: BaseLike = None) -> Dict[int, float]:
    """s(N) at fixed N across dimensions."""
    return {d: bound_s(n, d, base) for d in dims}


def write_records_csv(records: Iterable[ScatterRecord], path: Path) -> int:
    """One row per sample; header always written. Returns the row count."""
    count = 0
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for record in records:
            writer.writerow(record.row())
            count += 1
    return count


def write_summary(summary: Dict[str, Any], path: Path) -> None:
    path.write_text(json.dumps(summary, indent=2, sort_keys=True))
