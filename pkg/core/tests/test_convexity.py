"""
Tests for the convexity certification of F
"""

import csv
import math

import numpy as np
import pytest

from pairent.errors import DomainError
from pairent.services.bounds import F_from_moduli
from pairent.services.convexity import (
    eta_contributions,
    fk_terms,
    gradient_F,
    hc_and_f,
    hessian_fd_check,
    p_of_z,
    random_interior_points,
    scan_grid,
    sylvester_grid,
    sylvester_point,
    write_heatmap_csv,
)


def test_qubit_entropy_endpoints():
    start = hc_and_f(0.0)
    assert start.HC == pytest.approx(0.0, abs=1e-12)
    assert start.f == 0.0
    end = hc_and_f(0.5)
    assert end.HC == pytest.approx(1.0, abs=1e-12)
    assert end.f == pytest.approx(0.5, abs=1e-12)


def test_analytic_derivatives_match_differences():
    h = 1e-5
    for r in (0.05, 0.2, 0.4):
        mid = hc_and_f(r, "e")
        lo, hi = hc_and_f(r - h, "e"), hc_and_f(r + h, "e")
        assert mid.dHC == pytest.approx((hi.HC - lo.HC) / (2 * h), rel=1e-6)
        assert mid.df == pytest.approx((hi.f - lo.f) / (2 * h), rel=1e-6)
        assert mid.d2HC == pytest.approx((hi.dHC - lo.dHC) / (2 * h), rel=1e-5)
        assert mid.d2f == pytest.approx((hi.df - lo.df) / (2 * h), rel=1e-5)


def test_hc_domain():
    with pytest.raises(DomainError):
        hc_and_f(0.6)


def test_sylvester_point_on_boundary_line():
    point = sylvester_point(0.3, 1.0)
    assert point.beta == 0.0
    assert point.det == pytest.approx(point.alpha * point.eta, rel=1e-12)
    assert point.alpha >= 0.0
    assert point.eta >= 0.0


def test_sylvester_point_domain():
    with pytest.raises(DomainError):
        sylvester_point(0.0, 0.5)
    with pytest.raises(DomainError):
        sylvester_point(0.2, 0.0)


def test_grid_certificate_passes():
    certificate = scan_grid(200, 1e-6)
    assert certificate.passed
    assert certificate.min_alpha >= -1e-9
    assert certificate.min_eta >= -1e-9
    assert certificate.min_det >= -1e-9
    assert certificate.failures == []


def test_first_derivatives_non_negative_on_grid():
    _, _, values = sylvester_grid(200, 1e-6)
    assert float(np.min(values["G10"])) >= -1e-9
    assert float(np.min(values["G01"])) >= -1e-9


def test_coarse_margin_passes():
    assert scan_grid(100, 1e-3).passed


@pytest.mark.slow
def test_fine_grid_certificate():
    certificate = scan_grid(400, 1e-6)
    assert certificate.passed


def test_grid_arguments_checked():
    with pytest.raises(DomainError):
        scan_grid(50, 1e-6)
    with pytest.raises(DomainError):
        scan_grid(100, 0.01)


def test_heatmap_csv(tmp_path):
    path = tmp_path / "grid.csv"
    rows = write_heatmap_csv(100, 1e-6, path)
    assert rows == 100 * 100
    with open(path) as handle:
        reader = csv.reader(handle)
        assert next(reader) == ["r", "g2", "alpha", "eta", "det"]
        assert sum(1 for _ in reader) == rows


def test_p_vanishes_at_both_ends():
    assert abs(p_of_z(0.5)) <= 1e-10
    assert abs(p_of_z(1.0)) <= 1e-10


def test_p_non_negative():
    for z in np.linspace(0.5, 1.0, 10_000):
        assert p_of_z(float(z)) >= -1e-9


def test_p_domain():
    with pytest.raises(DomainError):
        p_of_z(0.4)


def test_eta_contributions_non_negative():
    for r in np.linspace(1e-4, 0.5 - 1e-4, 500):
        first, second = eta_contributions(float(r))
        assert first >= -1e-9
        assert second >= -1e-9


def test_fk_terms_sum_to_F():
    rng = np.random.default_rng(11)
    for dim in (2, 3, 5):
        for v in random_interior_points(dim, 10, int(rng.integers(1 << 30))):
            assert float(np.sum(fk_terms(v))) == pytest.approx(F_from_moduli(v), abs=1e-12)


def test_fk_terms_vanish_at_origin():
    np.testing.assert_array_equal(fk_terms([0.0, 0.0]), [0.0, 0.0])


def test_gradient_matches_differences_and_is_non_negative():
    h = 1e-6
    for v in random_interior_points(4, 10, seed=3):
        grad = gradient_F(v)
        assert np.all(grad >= -1e-12)
        for i in range(v.size):
            step = np.zeros(v.size)
            step[i] = h
            numeric = (F_from_moduli(v + step) - F_from_moduli(v - step)) / (2 * h)
            assert grad[i] == pytest.approx(numeric, abs=1e-6)


def test_interior_points_stay_inside():
    points = random_interior_points(5, 50, seed=1)
    assert points.shape == (50, 4)
    assert np.all(points > 1e-4)
    assert np.all(np.sum(points**2, axis=1) <= 0.25 - 1e-4)


def test_hessian_rejects_boundary_points():
    with pytest.raises(DomainError):
        hessian_fd_check([0.0, 0.3])
    with pytest.raises(DomainError):
        hessian_fd_check([0.36, 0.36])


@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_hessian_positive_semidefinite(dim):
    for v in random_interior_points(dim, 20, seed=dim):
        assert hessian_fd_check(v) >= -1e-6


@pytest.mark.slow
@pytest.mark.parametrize("dim", [2, 3, 4, 5])
def test_hessian_positive_semidefinite_full(dim):
    for v in random_interior_points(dim, 200, seed=100 + dim):
        assert hessian_fd_check(v) >= -1e-6


def test_log_base_scaling():
    bits = sylvester_point(0.2, 0.5)
    nats = sylvester_point(0.2, 0.5, "e")
    assert nats.alpha == pytest.approx(bits.alpha * math.log(2), rel=1e-12)
    assert nats.det == pytest.approx(bits.det * math.log(2) ** 2, rel=1e-12)
