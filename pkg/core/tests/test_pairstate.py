"""
Tests for pair-basis state types
"""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pairent.errors import (
    DimensionMismatch,
    DomainError,
    HermiticityViolation,
    NegativeDiagonal,
    PSDViolation,
    TraceViolation,
    ZeroVector,
)
from pairent.services.pairstate import (
    PairDensityMatrix,
    PurePairState,
    coupling_squares,
    density_of_pure,
    make_density,
    make_pure,
    mix,
    recover_weights,
    relabel_by_gamma,
    schmidt_from_pure,
)

amplitudes = st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=8)


def test_make_pure_normalizes():
    psi = make_pure(2, [3.0, 4.0])
    np.testing.assert_allclose(psi.coeffs, [0.6, 0.8])
    assert psi.dim == 2


def test_make_pure_keeps_phases():
    psi = make_pure(2, [1.0, 1j])
    assert psi.coeffs[1].imag > 0.0


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector) as info:
        make_pure(3, [0.0, 0.0, 0.0])
    assert info.value.reason == "zero_vector"


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        make_pure(3, [1.0, 0.0])


def test_unnormalized_pure_state_rejected():
    with pytest.raises(DomainError):
        PurePairState(coeffs=np.array([1.0, 1.0]))


def test_density_validators():
    with pytest.raises(HermiticityViolation) as info:
        make_density([[0.5, 0.1], [0.2, 0.5]])
    assert info.value.reason == "not_hermitian"
    with pytest.raises(TraceViolation):
        make_density([[0.5, 0.0], [0.0, 0.6]])
    with pytest.raises(NegativeDiagonal):
        make_density([[1.1, 0.0], [0.0, -0.1]])
    with pytest.raises(PSDViolation) as info:
        make_density([[0.5, 0.6], [0.6, 0.5]])
    assert info.value.reason == "psd_violation"


def test_density_of_pure_is_rank_one():
    psi = make_pure(3, [1.0, 2.0, 2.0])
    rho = density_of_pure(psi)
    np.testing.assert_allclose(rho.entries, np.outer(psi.coeffs, psi.coeffs.conj()))
    assert rho.to_dict()["kind"] == "mixed"


def test_entries_are_read_only():
    rho = make_density(np.eye(2) / 2)
    with pytest.raises(ValueError):
        rho.entries[0, 0] = 1.0


def test_schmidt_signs_and_reconstruction():
    profile = schmidt_from_pure(make_pure(2, [np.sqrt(0.8), np.sqrt(0.2)]))
    np.testing.assert_allclose(profile.signs, [-1.0, 1.0])
    np.testing.assert_allclose(profile.reconstructed_weights(), [0.8, 0.2], atol=1e-12)


def test_recover_weights_from_first_row():
    psi = make_pure(3, [np.sqrt(0.6), np.sqrt(0.3), np.sqrt(0.1)])
    weights = recover_weights(density_of_pure(psi), first_sign=-1.0)
    np.testing.assert_allclose(weights, [0.6, 0.3, 0.1], atol=1e-12)


def test_mix_validates_weights():
    states = [make_pure(2, [1.0, 0.0]), make_pure(2, [0.0, 1.0])]
    with pytest.raises(DimensionMismatch):
        mix([1.0], states)
    with pytest.raises(DomainError):
        mix([0.7, 0.7], states)
    rho = mix([0.25, 0.75], states)
    np.testing.assert_allclose(rho.entries, np.diag([0.25, 0.75]))


def test_relabel_sorts_couplings_with_stable_ties():
    psi = make_pure(4, [0.1, 0.7, 0.7, 0.1])
    relabeled, order = relabel_by_gamma(density_of_pure(psi))
    assert order == (1, 2, 0, 3)
    gamma_sq = coupling_squares(relabeled)
    assert np.all(np.diff(gamma_sq) <= 1e-15)
    assert isinstance(relabeled, PairDensityMatrix)


@settings(max_examples=50, deadline=None)
@given(amplitudes)
def test_couplings_of_pure_states(values):
    psi = make_pure(len(values), values)
    w = psi.weights
    np.testing.assert_allclose(coupling_squares(density_of_pure(psi)), w * (1.0 - w), atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(amplitudes)
def test_schmidt_reconstruction_roundtrip(values):
    psi = make_pure(len(values), values)
    profile = schmidt_from_pure(psi)
    np.testing.assert_allclose(profile.reconstructed_weights(), psi.weights, atol=1e-7)


def random_mixed(dim: int, rng: np.random.Generator):
    states = [make_pure(dim, rng.normal(size=dim) + 1j * rng.normal(size=dim)) for _ in range(dim)]
    weights = rng.exponential(size=dim)
    return mix(weights / weights.sum(), states), weights / weights.sum(), states


def test_relabel_is_idempotent():
    rng = np.random.default_rng(12)
    for dim in (2, 3, 5, 8):
        rho, _, _ = random_mixed(dim, rng)
        once, _ = relabel_by_gamma(rho)
        twice, order = relabel_by_gamma(once)
        assert order == tuple(range(dim))
        np.testing.assert_array_equal(twice.entries, once.entries)


def test_relabel_is_a_permutation_similarity():
    rng = np.random.default_rng(13)
    for dim in (3, 4, 6):
        rho, _, _ = random_mixed(dim, rng)
        relabeled, order = relabel_by_gamma(rho)
        np.testing.assert_array_equal(relabeled.entries, rho.entries[np.ix_(order, order)])
        np.testing.assert_array_equal(
            np.sort(np.abs(relabeled.entries).ravel()), np.sort(np.abs(rho.entries).ravel())
        )
        np.testing.assert_array_equal(np.sort(np.diag(relabeled.entries).real), np.sort(np.diag(rho.entries).real))
        assert np.trace(relabeled.entries).real == pytest.approx(np.trace(rho.entries).real, abs=1e-15)
        np.testing.assert_allclose(
            np.linalg.eigvalsh(relabeled.entries), np.linalg.eigvalsh(rho.entries), atol=1e-13
        )


def test_mix_is_sum_of_pure_densities():
    rng = np.random.default_rng(14)
    for dim in (2, 4, 7):
        rho, weights, states = random_mixed(dim, rng)
        expected = sum(p * density_of_pure(s).entries for p, s in zip(weights, states))
        np.testing.assert_allclose(rho.entries, expected, atol=1e-12)
