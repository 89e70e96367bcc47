"""
Tests for two-mode squeezed states
"""

import csv
import math

import numpy as np
import pytest

from pairent.errors import DomainError, ToleranceExceeded
from pairent.services.squeezed import (
    CSV_HEADER,
    SWITCH_R,
    MAX_R,
    closed_form_measures,
    log_tanh_sq,
    make_squeezed,
    s_limit,
    sweep_curve,
    truncation_cutoff,
    verify_against_truncation,
    write_curve_csv,
)


def test_cutoff_rule():
    n_max = truncation_cutoff(1.0, 1e-12)
    t2 = math.tanh(1.0) ** 2
    assert t2 ** (n_max + 1) < 1e-12 <= t2**n_max
    assert n_max == 50


def test_unsqueezed_state_is_padded_product():
    state = make_squeezed(0.0)
    assert state.n_max == 0
    np.testing.assert_array_equal(state.state.coeffs, [1.0, 0.0])
    assert state.tail_weight == 0.0


def test_coefficients_follow_tanh_powers():
    state = make_squeezed(0.5, 1e-12)
    c = state.state.coeffs.real
    ratios = c[1:] / c[:-1]
    np.testing.assert_allclose(ratios, math.tanh(0.5), rtol=1e-12)
    assert np.all(np.diff(c) < 0.0)
    assert state.tail_weight <= 1e-12
    assert c[0] == pytest.approx(1.0 / math.cosh(0.5), abs=1e-6)


def test_closed_forms_at_zero():
    exact = closed_form_measures(0.0)
    assert (exact.N, exact.S, exact.F) == (0.0, 0.0, 0.0)
    assert exact.F_first_row == 0.0


def test_closed_forms_at_one():
    exact = closed_form_measures(1.0)
    assert exact.N == pytest.approx(3.194528, abs=1e-6)
    assert exact.S == pytest.approx(2.3369, abs=2e-4)
    assert exact.F == pytest.approx(2.2670, abs=2e-4)
    assert exact.F_first_row < exact.F


def test_switch_point():
    assert math.cosh(SWITCH_R) ** 2 == pytest.approx(2.0, abs=1e-12)
    at_switch = closed_form_measures(SWITCH_R)
    assert at_switch.F == pytest.approx(at_switch.S, abs=1e-9)
    assert at_switch.F_first_row == pytest.approx(at_switch.S, abs=1e-9)
    below = closed_form_measures(SWITCH_R - 1e-10)
    above = closed_form_measures(SWITCH_R + 1e-10)
    assert abs(above.F - below.F) <= 1e-9
    assert abs(above.F_first_row - below.F_first_row) <= 1e-9


def test_forms_agree_below_switch():
    for r in np.linspace(0.0, SWITCH_R - 1e-6, 20):
        exact = closed_form_measures(float(r))
        assert exact.F == exact.S
        assert exact.F_first_row == exact.S


@pytest.mark.parametrize("r", [0.25, 0.5, 1.0, 2.0, 3.0])
def test_truncated_state_matches_closed_forms(r):
    report = verify_against_truncation(r)
    assert abs(report.numeric_N - report.closed_form.N) <= 1e-8
    assert abs(report.numeric_S - report.closed_form.S) <= 1e-8
    assert abs(report.numeric_F - report.closed_form.F_first_row) <= 1e-8
    values = list(report.s_by_dim.values())
    assert all(b < a for a, b in zip(values, values[1:]))


def test_truncated_negativity_at_one():
    report = verify_against_truncation(1.0)
    assert report.numeric_N == pytest.approx(3.194528, abs=1e-6)
    assert report.to_dict()["closed_form"]["log_base"] == "2"


def test_mild_squeezing_keeps_F_close_to_S():
    exact = closed_form_measures(0.3)
    assert exact.F <= exact.S
    assert exact.F / exact.S >= 0.9


def test_loose_threshold_fails_verification():
    with pytest.raises(ToleranceExceeded) as info:
        verify_against_truncation(1.0, tail_threshold=1e-6)
    assert info.value.diagnostics["N_error"] > info.value.diagnostics["tolerance"]
    assert info.value.exit_code == 3


def test_verification_range():
    with pytest.raises(DomainError):
        verify_against_truncation(3.5)


def test_refining_threshold_is_stable():
    coarse = verify_against_truncation(1.0, 1e-20)
    fine = verify_against_truncation(1.0, 5e-21)
    assert abs(coarse.numeric_N - fine.numeric_N) < 1e-8
    assert abs(coarse.numeric_S - fine.numeric_S) < 1e-8


def test_s_vanishes_with_dimension():
    n = closed_form_measures(0.5).N
    values = list(s_limit(n, [8, 16, 32, 64]).values())
    assert all(b < a for a, b in zip(values, values[1:]))


def test_sweep_curve():
    rows = sweep_curve(0.0, 3.0, 300)
    assert len(rows) == 300
    assert rows[0]["S"] == 0.0 and rows[0]["F"] == 0.0 and rows[0]["N"] == 0.0
    for prev, row in zip(rows, rows[1:]):
        assert row["F"] <= row["S"] + 1e-12
        assert row["N"] > prev["N"]
        assert row["S"] > prev["S"]
        assert row["F"] > prev["F"]


def test_sweep_endpoints():
    rows = sweep_curve(0.5, 1.0, 2)
    assert [row["r"] for row in rows] == [0.5, 1.0]
    assert rows[1]["F"] == closed_form_measures(1.0).F


def test_sweep_arguments():
    with pytest.raises(DomainError):
        sweep_curve(2.0, 1.0, 10)
    with pytest.raises(DomainError):
        sweep_curve(0.0, 1.0, 1)


def test_curve_csv(tmp_path):
    path = tmp_path / "squeezed.csv"
    assert write_curve_csv(sweep_curve(0.0, 1.0, 5), path) == 5
    with open(path) as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 6


def test_log_tanh_where_tanh_rounds_to_one():
    assert math.tanh(20.0) == 1.0
    assert log_tanh_sq(20.0) == pytest.approx(-4.0 * math.exp(-40.0), rel=1e-12)
    assert log_tanh_sq(1.0) == pytest.approx(2.0 * math.log(math.tanh(1.0)), rel=1e-14)


def test_strong_squeezing_sweep():
    rows = sweep_curve(0.0, 20.0, 3)
    strong = rows[-1]
    assert strong["r"] == 20.0
    assert strong["n_max"] > 10**18
    assert 0.0 < strong["tail_weight"] <= 1e-30 * (1.0 + 1e-9)
    # S -> ln cosh^2 r + 1 nats once sinh^2 r is large
    expected = (2.0 * math.log(math.cosh(20.0)) + 1.0) / math.log(2.0)
    assert strong["S"] == pytest.approx(expected, rel=1e-12)
    assert strong["F"] <= strong["S"]
    assert all(math.isfinite(row[key]) for row in rows for key in ("S", "F", "N"))


def test_large_r_entropy_matches_direct_formula():
    for r in (2.0, 3.5, 5.0):
        ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
        direct = (ch2 * math.log(ch2) - sh2 * math.log(sh2)) / math.log(2.0)
        assert closed_form_measures(r).S == pytest.approx(direct, rel=1e-9)


def test_unrepresentable_squeezing():
    with pytest.raises(DomainError):
        make_squeezed(20.0)
    with pytest.raises(DomainError):
        closed_form_measures(MAX_R + 1.0)
    with pytest.raises(DomainError):
        sweep_curve(0.0, MAX_R + 1.0, 3)
