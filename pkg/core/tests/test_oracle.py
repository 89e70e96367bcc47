"""
Tests for the convex-roof oracle
"""

import math

import numpy as np
import pytest

from pairent.config import settings
from pairent.errors import DimensionTooLarge, RankError
from pairent.services.bounds import best_bound
from pairent.services.measures import entropy_pure, wootters_eof
from pairent.services.oracle import certify_bounds, eof_convex_roof, reconstruct, weighted_eigenvectors
from pairent.services.pairstate import density_of_pure, make_density, make_pure, mix


def random_density(dim: int, rng: np.random.Generator):
    states = [make_pure(dim, rng.normal(size=dim) + 1j * rng.normal(size=dim)) for _ in range(dim)]
    weights = rng.exponential(size=dim)
    return mix(weights / weights.sum(), states)


def random_qubit_pair(rng: np.random.Generator):
    p = rng.uniform(0.05, 0.95)
    modulus = rng.uniform() * math.sqrt(p * (1.0 - p))
    z = modulus * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
    return make_density([[p, z], [np.conj(z), 1.0 - p]])


def test_diagonal_state_is_separable():
    result = eof_convex_roof(make_density(np.diag([0.5, 0.3, 0.2])), restarts=2, iters=50)
    assert result.eof_estimate == pytest.approx(0.0, abs=1e-12)


def test_pure_state_gives_its_entropy():
    psi = make_pure(3, [1.0, 2.0, 0.5j])
    result = eof_convex_roof(density_of_pure(psi), restarts=2, iters=50)
    assert result.rank == 1
    assert result.eof_estimate == pytest.approx(entropy_pure(psi), abs=1e-10)


def test_qubit_example_matches_wootters():
    rho = make_density([[0.5, 0.3], [0.3, 0.5]])
    result = eof_convex_roof(rho, restarts=4, iters=400, seed=1)
    assert result.eof_estimate == pytest.approx(0.4689955935892812, abs=1e-4)
    assert result.eof_estimate >= wootters_eof(rho) - 1e-9


def test_decomposition_reproduces_rho():
    rho = random_density(3, np.random.default_rng(4))
    result = eof_convex_roof(rho, restarts=2, iters=100, seed=4)
    sample = result.best_decomposition
    rebuilt = sum(p * np.outer(s.coeffs, s.coeffs.conj()) for p, s in zip(sample.weights, sample.states))
    np.testing.assert_allclose(rebuilt, rho.entries, atol=1e-10)
    assert all(s.dim == 3 for s in sample.states)
    assert result.eof_estimate == pytest.approx(sample.avg_entropy, abs=1e-12)


def test_search_is_monotone():
    rho = random_density(3, np.random.default_rng(8))
    trace = eof_convex_roof(rho, restarts=1, iters=100, seed=8).trace
    assert all(b <= a + 1e-15 for a, b in zip(trace, trace[1:]))


def test_weighted_eigenvectors_factor_rho():
    rho = random_density(4, np.random.default_rng(2))
    w = weighted_eigenvectors(rho)
    np.testing.assert_allclose(w @ w.conj().T, rho.entries, atol=1e-10)
    np.testing.assert_allclose(reconstruct(w.T), rho.entries, atol=1e-10)


def test_rank_error():
    rho = make_density([[0.5, 0.3], [0.3, 0.5]])
    with pytest.raises(RankError) as info:
        eof_convex_roof(rho, members=1)
    assert info.value.reason == "rank_error"


def test_dimension_limit():
    with pytest.raises(DimensionTooLarge):
        eof_convex_roof(make_density(np.eye(5) / 5))


def test_result_independent_of_threads():
    rho = random_density(2, np.random.default_rng(6))
    serial = eof_convex_roof(rho, restarts=4, iters=100, seed=6, threads=1)
    parallel = eof_convex_roof(rho, restarts=4, iters=100, seed=6, threads=3)
    assert serial.eof_estimate == parallel.eof_estimate
    assert serial.restarts_used == parallel.restarts_used


def test_debug_mode_audits_every_step(monkeypatch):
    monkeypatch.setattr(settings, "debug", True)
    rho = random_density(2, np.random.default_rng(12))
    result = eof_convex_roof(rho, restarts=2, iters=50, seed=12)
    assert result.eof_estimate >= 0.0


def test_converges_with_enough_restarts():
    rho = make_density(np.diag([0.6, 0.4]))
    result = eof_convex_roof(rho, restarts=10, iters=20)
    assert result.converged
    assert result.restarts_used == 6


def test_certify_maximally_entangled_qutrit():
    report = certify_bounds(density_of_pure(make_pure(3, [1.0, 1.0, 1.0])), restarts=2, iters=50)
    assert report.roof.eof_estimate == pytest.approx(math.log2(3), abs=1e-10)
    assert report.gaps["s"] == pytest.approx(0.0, abs=1e-9)
    assert report.gaps["F"] > 0.3
    assert report.wootters is None


def test_certify_diagonal_has_zero_gaps():
    report = certify_bounds(make_density(np.diag([0.2, 0.8])), restarts=2, iters=50)
    assert all(abs(gap) <= 1e-12 for gap in report.gaps.values())
    assert report.to_dict()["wootters"] == pytest.approx(0.0, abs=1e-12)


def test_certify_random_qutrits():
    rng = np.random.default_rng(30)
    for _ in range(3):
        report = certify_bounds(random_density(3, rng), restarts=3, iters=200, seed=30)
        assert report.gaps["best"] >= -1e-6


def test_random_qubits_match_wootters():
    rng = np.random.default_rng(31)
    for _ in range(10):
        rho = random_qubit_pair(rng)
        result = eof_convex_roof(rho, restarts=4, iters=400, seed=31)
        assert abs(result.eof_estimate - wootters_eof(rho)) <= 1e-4


@pytest.mark.slow
def test_roof_dominates_bounds_full():
    rng = np.random.default_rng(20140501)
    for _ in range(20):
        rho = random_density(3, rng)
        roof = eof_convex_roof(rho, seed=20140501)
        assert roof.eof_estimate >= best_bound(rho).best - 1e-6
    for _ in range(200):
        rho = random_qubit_pair(rng)
        roof = eof_convex_roof(rho, seed=20140501)
        assert abs(roof.eof_estimate - wootters_eof(rho)) <= 1e-4


def test_state_at_psd_tolerance_edge():
    # eigenvalues 1 + 5e-10 and -5e-10; the validator admits the negative one
    rho = make_density([[0.5, 0.5 + 5e-10], [0.5 + 5e-10, 0.5]])
    result = eof_convex_roof(rho, restarts=2, iters=20)
    assert result.rank == 1
    assert result.eof_estimate == pytest.approx(1.0, abs=1e-8)


def test_state_at_psd_tolerance_edge_with_audit(monkeypatch):
    monkeypatch.setattr(settings, "debug", True)
    rho = make_density([[0.5, 0.5 + 5e-10], [0.5 + 5e-10, 0.5]])
    result = eof_convex_roof(rho, members=3, restarts=2, iters=20)
    assert result.eof_estimate == pytest.approx(1.0, abs=1e-8)
