import numpy as np
import pytest

from pyfastgate.core.errors import DomainError, InfeasibleError
from pyfastgate.optimize.crs import OptimizerConfig
from pyfastgate.optimize.study import (STRETCH_HALF_PERIOD, FitResult, delay_structure_report, fit_power_law,
                                       scaling_study)
from pyfastgate.schemes.families import SchemeFamily


def test_exact_power_law():
    n_pairs = np.array([20, 40, 80, 160, 320])
    fit = fit_power_law(n_pairs, 5.0 * n_pairs ** -0.65)
    assert fit.exponent == pytest.approx(-0.65)
    assert fit.prefactor == pytest.approx(5.0)
    assert fit.residual == pytest.approx(0.0, abs=1e-12)


def test_fit_domain():
    with pytest.raises(DomainError):
        fit_power_law([10], [1.0])
    with pytest.raises(DomainError):
        fit_power_law([10, 20], [1.0, -1.0])
    with pytest.raises(DomainError):
        FitResult(-0.5, 1.0, -1.0)


def test_scaling_study_needs_three_sizes(trap):
    with pytest.raises(DomainError):
        scaling_study(SchemeFamily('gzc', trap=trap), [1, 2])


def test_scaling_study_without_feasible_sizes(trap):
    config = OptimizerConfig(max_evaluations=200, n_starts=1, polish=False)
    with pytest.raises(InfeasibleError):
        scaling_study(SchemeFamily('free_times', n_free=1, trap=trap), [1, 1, 1], trap, config=config)


@pytest.mark.parametrize('delay, matches', [
    (0.5, (('0.5', 1),)),
    (STRETCH_HALF_PERIOD, (('1/(2*sqrt(3))', 1),)),
    (1.0, (('0.5', 2),)),
    (0.5 + STRETCH_HALF_PERIOD, (('0.5+1/(2*sqrt(3))', 1),)),
    (0.4, ()),
])
def test_delay_structure(delay, matches):
    report = delay_structure_report([delay])
    assert report[0].matches == matches
    assert report[0].matched == bool(matches)


def test_delay_structure_tolerance():
    assert delay_structure_report([0.5005])[0].matched
    assert not delay_structure_report([0.5005], tol=1e-4)[0].matched
