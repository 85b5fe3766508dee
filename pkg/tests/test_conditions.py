import numpy as np
import pytest

from pyfastgate.core.conditions import (TARGET_PHASE, closure_residuals, condition_error, cost, cost_from_error,
                                        gate_time, landscape_scan, phase_error, phase_theta, wrap_phase_error)
from pyfastgate.core.errors import DomainError
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.schemes.families import SchemeFamily

from conftest import HALF_PERIOD, STRETCH_HALF_PERIOD


def test_exact_direct_scheme_meets_every_condition(exact_direct_scheme, exact_direct_delays, trap):
    report = condition_error(exact_direct_scheme, trap)
    assert report.theta == pytest.approx(TARGET_PHASE, abs=1e-12)
    assert abs(report.c_c) < 1e-12
    assert abs(report.c_r) < 1e-12
    assert report.e_total < 1e-12
    assert report.gate_time == pytest.approx(np.sum(exact_direct_delays))
    assert exact_direct_scheme.n_pairs == 8


def test_conditions_are_shift_invariant(exact_direct_scheme, trap):
    shifted = exact_direct_scheme.shifted(3.7)
    assert phase_theta(shifted, trap) == pytest.approx(phase_theta(exact_direct_scheme, trap), abs=1e-12)
    for c, c_shifted in zip(closure_residuals(exact_direct_scheme), closure_residuals(shifted)):
        assert abs(c_shifted) == pytest.approx(abs(c), abs=1e-12)
    assert gate_time(shifted) == pytest.approx(gate_time(exact_direct_scheme))


def test_single_kick(trap):
    report = condition_error(KickScheme.from_arrays([1], [0.2]), trap)
    assert report.theta == 0.0
    assert abs(report.c_c) == pytest.approx(1.0)
    assert abs(report.c_r) == pytest.approx(1.0)
    assert report.e_phase == pytest.approx(0.75)
    assert report.gate_time == 0.0
    assert 0 < report.e_motional < 1


def test_phase_of_two_kicks(trap):
    dt = 0.3
    scheme = KickScheme.from_arrays([1, -2], [0.0, dt])
    kernel = np.sin(2 * np.pi * dt) - np.sin(2 * np.sqrt(3) * np.pi * dt) / np.sqrt(3)
    assert phase_theta(scheme, trap) == pytest.approx(4 * trap.eta ** 2 * -2 * kernel)
    assert phase_theta(KickScheme.from_arrays([1, 1], [0.0, 0.25]), trap) == pytest.approx(0.12226, abs=1e-5)


def test_half_period_delays_close_the_modes():
    c_c, _ = closure_residuals(KickScheme.from_arrays([1, 1], [0.0, HALF_PERIOD]))
    _, c_r = closure_residuals(KickScheme.from_arrays([1, 1], [0.0, STRETCH_HALF_PERIOD]))
    assert abs(c_c) < 1e-12
    assert abs(c_r) < 1e-12


@pytest.mark.parametrize('z, t, closed', [
    ([1, 1], [0.0, HALF_PERIOD], False),
    ([1, 1], [0.0, STRETCH_HALF_PERIOD], False),
    ([1, -1], [0.0, 1.0], False),
    ([1, 1, 1, 1], [0.0, STRETCH_HALF_PERIOD, HALF_PERIOD, HALF_PERIOD + STRETCH_HALF_PERIOD], True),
])
def test_motional_error_vanishes_only_when_both_modes_close(z, t, closed, trap):
    report = condition_error(KickScheme.from_arrays(z, t), trap)
    assert (abs(report.c_c) < 1e-12 and abs(report.c_r) < 1e-12) == closed
    if closed:
        assert report.e_motional == pytest.approx(0.0, abs=1e-12)
    else:
        assert report.e_motional > 1e-6


@pytest.mark.parametrize('theta, expected', [
    (np.pi / 4, 0.0),
    (3 * np.pi / 4, 0.0),
    (-np.pi / 4, 0.0),
    (np.pi / 4 - 0.1, 0.1),
    (np.pi / 4 + 0.1, -0.1),
])
def test_wrap_phase_error(theta, expected):
    assert wrap_phase_error(theta) == pytest.approx(expected, abs=1e-12)


def test_phase_error_is_periodic():
    assert phase_error(np.pi / 4 + np.pi / 2) == pytest.approx(0.0, abs=1e-12)
    assert phase_error(0.0) == pytest.approx(0.75)


def test_cost():
    assert cost_from_error(0.0, 1.0) == pytest.approx(11.0)
    assert cost_from_error(0.01, 0.5, a=1.0, b=10.0) == pytest.approx(0.5 + np.exp(0.1))
    with pytest.raises(DomainError):
        cost_from_error(0.0, 1.0, a=0.0)
    with pytest.raises(DomainError):
        cost_from_error(0.0, 1.0, b=-1.0)


def test_cost_increases_with_the_error(trap):
    costs = [cost_from_error(e, 1.0) for e in np.linspace(0.0, 0.5, 26)]
    assert np.all(np.diff(costs) > 0)
    scheme = KickScheme.from_arrays([1, 1], [0.0, 0.25])
    report = condition_error(scheme, trap)
    assert report.e_total > 0
    assert cost(scheme, trap) == pytest.approx(cost_from_error(report.e_total, report.gate_time))


def test_cost_of_exact_scheme(exact_direct_scheme, trap):
    assert cost(exact_direct_scheme, trap) == pytest.approx(gate_time(exact_direct_scheme) + 10.0, abs=1e-9)


def test_landscape_minimum_lies_next_to_the_solution(direct_family, trap):
    landscape = landscape_scan(direct_family, {'d1': HALF_PERIOD, 'd2': STRETCH_HALF_PERIOD},
                               {'d3': [0.55, 0.6, 0.65]}, trap)
    assert landscape.names == ('d3',)
    assert landscape.values.shape == (3,)
    assert landscape.argmin() == pytest.approx((0.6,))
    assert len(landscape.to_rows()) == 3
    # the family passed in is left untouched
    assert direct_family.n_params == 3


def test_two_dimensional_landscape(direct_family, trap):
    landscape = landscape_scan(direct_family, {'d1': HALF_PERIOD}, {'d2': [0.2, 0.3], 'd3': [0.5, 0.6, 0.7]}, trap)
    assert landscape.values.shape == (2, 3)
    rows = landscape.to_rows()
    assert len(rows) == 6
    assert rows[0][:2] == (0.2, 0.5)


def test_landscape_marks_cancelled_points(trap, caplog):
    family = SchemeFamily('alternating_split', n_delays=2, trap=trap)
    landscape = landscape_scan(family, {'d2': 0.0}, {'d1': [0.2, 0.3]}, trap)
    assert np.all(np.isnan(landscape.values))
    assert 'cancels to an empty scheme' in caplog.text



@pytest.mark.parametrize('fixed, grid', [
    ({'d1': 0.5}, {'d2': [0.2]}),
    ({'d1': 0.5, 'd2': 0.3}, {'d3': [0.0, 0.5]}),
    ({'d9': 0.5, 'd2': 0.3}, {'d3': [0.5]}),
    ({}, {'d1': [0.5], 'd2': [0.5], 'd3': [0.5]}),
])
def test_landscape_domain_errors(direct_family, trap, fixed, grid):
    with pytest.raises(DomainError):
        landscape_scan(direct_family, fixed, grid, trap)
