"""Long acceptance runs against published gate times and tolerances; deselected by default, run with `pytest -m acceptance`."""
import numpy as np
import pytest
from scipy.optimize import brentq

from pyfastgate.core.conditions import TARGET_PHASE, condition_error, phase_theta
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.phase_space import geometric_phase_difference
from pyfastgate.core.trap import TrapParams
from pyfastgate.optics.splitter import network_of
from pyfastgate.optimize.crs import OptimizerConfig, optimize
from pyfastgate.optimize.study import delay_structure_report, scaling_study
from pyfastgate.oracle.fidelity import perturbation_coefficient, process_fidelity, worst_case_fidelity
from pyfastgate.oracle.fock import OracleConfig, StateSearch, evolve_scheme
from pyfastgate.robustness.sweeps import angle_sweep, timing_sweep
from pyfastgate.schemes.families import SchemeFamily

from conftest import HALF_PERIOD, STRETCH_HALF_PERIOD

pytestmark = pytest.mark.acceptance

SEARCH = OptimizerConfig(n_starts=4, seed=0)


def structure_labels(delays) -> set:
    return {label for match in delay_structure_report(delays) for label, _ in match.matches}


def random_exact_direct_scheme(rng: np.random.Generator):
    """A direct cascade closed by odd multiples of both half periods, with one delay solved for the target phase."""
    while True:
        trap = TrapParams(eta=rng.uniform(0.1, 0.2), nbar=0.1)
        family = SchemeFamily('direct_split', n_delays=int(rng.integers(3, 5)), trap=trap)
        fixed = [HALF_PERIOD * rng.choice([1, 3]), STRETCH_HALF_PERIOD * rng.choice([1, 3])]
        fixed += list(rng.uniform(0.05, 1.0, family.n_delays - 3))

        def phase_mismatch(x):
            return phase_theta(family.generate(fixed + [x]), trap) - TARGET_PHASE

        grid = np.linspace(0.01, 2.0, 200)
        mismatch = np.array([phase_mismatch(x) for x in grid])
        brackets = np.flatnonzero(np.sign(mismatch[:-1]) != np.sign(mismatch[1:]))
        if brackets.size:
            k = int(rng.choice(brackets))
            x = brentq(phase_mismatch, grid[k], grid[k + 1], xtol=1e-14)
            return family.generate(fixed + [x]), trap


@pytest.fixture(scope='module')
def symmetric_solutions(trap):
    solutions = {}
    for n in (2, 8):
        family = SchemeFamily('symmetric_abc', abc=(1, 2, 2), n=n, trap=trap)
        result = optimize(family, trap, config=SEARCH)
        assert result.feasible
        solutions[n] = (family, result)
    return solutions


@pytest.fixture(scope='module')
def four_pair_direct():
    """The 4-pair direct scheme closed by both half periods, at the Lamb-Dicke parameter that gives the target phase."""
    delays = [HALF_PERIOD, STRETCH_HALF_PERIOD]

    def phase_mismatch(eta):
        trap = TrapParams(eta=eta)
        return phase_theta(SchemeFamily('direct_split', n_delays=2, trap=trap).generate(delays), trap) - TARGET_PHASE

    trap = TrapParams(eta=brentq(phase_mismatch, 0.2, 0.45, xtol=1e-14))
    return SchemeFamily('direct_split', n_delays=2, trap=trap).generate(delays), trap


def test_oracle_agrees_with_the_conditions_on_random_exact_schemes():
    rng = np.random.default_rng(2024)
    config = OracleConfig(n_max=40, nbar=0.1)
    for _ in range(50):
        scheme, trap = random_exact_direct_scheme(rng)
        assert condition_error(scheme, trap).e_total <= 1e-4
        assert 1 - process_fidelity(evolve_scheme(scheme, config, trap), config, trap) <= 3e-4


def test_geometric_phase_matches_closed_form_on_random_schemes(trap):
    rng = np.random.default_rng(7)
    for _ in range(1000):
        n_groups = int(rng.integers(1, 51))
        z = rng.integers(1, 4, n_groups) * rng.choice([-1, 1], n_groups)
        t = np.sort(rng.uniform(-2.0, 2.0, n_groups))
        if n_groups > 1 and np.min(np.diff(t)) <= 0:
            continue
        scheme = KickScheme.from_arrays(z, t)
        assert geometric_phase_difference(scheme, trap) == pytest.approx(phase_theta(scheme, trap), abs=1e-9)


def test_direct_split_gate_time(direct_family, trap):
    result = optimize(direct_family, trap, config=SEARCH)
    assert result.feasible
    assert result.report.gate_time == pytest.approx(1.37, rel=0.1)
    assert {'0.5', '1/(2*sqrt(3))'} <= structure_labels(result.delays)


def test_alternating_split_gate_time(trap):
    family = SchemeFamily('alternating_split', n_delays=3, n_laser_pulses=2, trap=trap)
    result = optimize(family, trap, config=SEARCH)
    assert result.feasible
    assert result.report.e_total <= 1e-4
    assert result.scheme.n_pairs == 16
    assert result.report.gate_time == pytest.approx(1.18, rel=0.1)
    assert '0.5+1/(2*sqrt(3))' in structure_labels(result.delays)


def test_eighty_pair_symmetric_gate_time(symmetric_solutions):
    _, result = symmetric_solutions[8]
    assert result.scheme.n_pairs == 80
    assert result.report.gate_time == pytest.approx(0.29, rel=0.1)


def test_symmetric_scaling(trap):
    study = scaling_study(SchemeFamily('symmetric_abc', abc=(1, 2, 2), trap=trap), [2, 4, 8, 16, 32], trap,
                          config=SEARCH)
    assert all(row.feasible for row in study.rows)
    assert study.fit.prefactor == pytest.approx(5.37, rel=0.15)
    assert -0.72 <= study.fit.exponent <= -0.61
    by_pairs = {row.n_pairs: row.gate_time for row in study.rows}
    assert by_pairs[80] == pytest.approx(0.29, rel=0.1)
    assert by_pairs[320] == pytest.approx(0.12, rel=0.1)


def test_gzc_scaling(trap):
    study = scaling_study(SchemeFamily('gzc', trap=trap), range(1, 9), trap, config=SEARCH)
    assert study.fit.prefactor == pytest.approx(6.30, rel=0.15)
    assert -0.72 <= study.fit.exponent <= -0.61


def test_oracle_agrees_with_the_error_estimate(exact_direct_scheme, symmetric_solutions, trap):
    config = OracleConfig(n_max=40, nbar=0.1)
    for scheme in (exact_direct_scheme, symmetric_solutions[2][1].scheme):
        u = evolve_scheme(scheme, config, trap)
        assert 1 - process_fidelity(u, config, trap) <= condition_error(scheme, trap).e_total + 2e-4


def test_truncation_convergence(exact_direct_scheme, trap):
    fidelities = [process_fidelity(evolve_scheme(exact_direct_scheme, OracleConfig(n_max=n_max), trap),
                                   OracleConfig(n_max=n_max), trap) for n_max in (32, 40)]
    assert abs(fidelities[1] - fidelities[0]) < 1e-6


def test_four_pair_area_error_is_quadratic(four_pair_direct):
    scheme, trap = four_pair_direct
    assert scheme.n_pairs == 4
    assert condition_error(scheme, trap).e_total < 1e-10
    config = OracleConfig(n_max=40, state_search=StateSearch(alpha_max=1.0))

    fit = perturbation_coefficient(scheme, config, trap)
    assert fit.c > 0
    assert abs(fit.b) < 1e-2 * fit.c * 1e-3

    for epsilon in (1e-4, 1e-3, 4e-3):
        assert perturbation_coefficient(scheme, config, trap, epsilons=(-epsilon, epsilon)).c == \
            pytest.approx(fit.c, rel=0.05)

    infidelity = 1 - worst_case_fidelity(evolve_scheme(scheme, config.replace(epsilon=5e-3), trap), config).fidelity
    assert 8e-3 / 3 <= infidelity <= 3 * 8e-3


def test_angle_tolerance_shrinks_with_pulse_count(symmetric_solutions, trap):
    thresholds = {n: angle_sweep(result.scheme, (-0.02, 0.02, 41), trap).threshold
                  for n, (_, result) in symmetric_solutions.items()}
    assert 2e-3 <= thresholds[2] <= 1.5e-2
    assert thresholds[2] / thresholds[8] == pytest.approx(4.0, rel=0.3)


def test_symmetric_timing_tolerance(symmetric_solutions, trap):
    family, result = symmetric_solutions[2]
    network = network_of(family, result.delays)
    sweep = timing_sweep(network, family, (-1e-10, 1e-10, 21), trap, values=result.delays)
    assert 5e-12 <= sweep.threshold <= 4.5e-11
    assert sweep.extra['mirror_displacement_m'] < 1.5e-2
