import numpy as np
import pytest

from pyfastgate.core.errors import DomainError
from pyfastgate.oracle.fidelity import (coherent_state, error_growth_scan, internal_minimum, perturbation_coefficient,
                                        process_fidelity, relative_phase, thermal_weights, worst_case_fidelity)
from pyfastgate.oracle.fock import GateUnitary, OracleConfig, PairGroup, StateSearch, evolve_scheme

QUICK_SEARCH = StateSearch(alpha_max=0.5, refine_steps=0)


def test_thermal_weights():
    m_c, m_r, weights, leakage = thermal_weights(0.5, 40)
    assert weights.sum() == pytest.approx(1.0)
    assert m_c.shape == m_r.shape == weights.shape
    assert leakage < 1e-6
    assert weights[(m_c == 0) & (m_r == 0)][0] == pytest.approx(max(weights))
    *_, zero_weights, _ = thermal_weights(0.0, 8)
    np.testing.assert_allclose(zero_weights, [1.0])


def test_coherent_state():
    psi = coherent_state(1.5 * np.exp(0.3j), 40)
    assert np.linalg.norm(psi) == pytest.approx(1.0)
    assert np.sum(np.arange(40) * np.abs(psi) ** 2) == pytest.approx(2.25, rel=1e-6)
    np.testing.assert_allclose(coherent_state(0.0, 8), np.eye(8)[0])


def test_internal_minimum():
    assert internal_minimum(np.diag([1.0, -1.0]).astype(complex))[0] == pytest.approx(0.0, abs=1e-12)
    value, _ = internal_minimum(np.diag([1.0, 1j]))
    assert value == pytest.approx(0.5, abs=1e-9)


def test_identity_is_half_as_good_as_the_gate(trap):
    config = OracleConfig(n_max=8, state_search=QUICK_SEARCH)
    identity = GateUnitary.identity(8, trap)
    assert process_fidelity(identity, config, trap) == pytest.approx(0.5, abs=1e-6)
    assert worst_case_fidelity(identity, config).fidelity == pytest.approx(0.5, abs=1e-6)


def test_ideal_gate_is_perfect(trap):
    config = OracleConfig(n_max=8, state_search=QUICK_SEARCH)
    gate = GateUnitary.phase_gate(np.pi / 4, 8, trap)
    assert process_fidelity(gate, config, trap) == pytest.approx(1.0, abs=1e-12)
    assert worst_case_fidelity(gate, config).fidelity == pytest.approx(1.0, abs=1e-9)
    assert np.exp(4j * relative_phase(gate)) == pytest.approx(-1.0)


def test_single_pair_group_in_the_ground_state(trap):
    config = OracleConfig(n_max=30, nbar=0.0)
    u = GateUnitary(30, trap, (PairGroup(1),))
    expected = (4 + 2 * np.exp(-32 * trap.eta_c ** 2) + 2 * np.exp(-8 * trap.eta_r ** 2)) / 16
    assert process_fidelity(u, config, trap) == pytest.approx(expected, abs=1e-9)


def test_closed_scheme_fidelities(exact_direct_scheme, trap):
    config = OracleConfig(n_max=30, state_search=StateSearch(alpha_max=1.0, refine_steps=50))
    u = evolve_scheme(exact_direct_scheme, config, trap)
    assert process_fidelity(u, config, trap) >= 1 - 2e-4
    assert np.exp(4j * relative_phase(u)) == pytest.approx(-1.0, abs=1e-6)
    worst = worst_case_fidelity(u, config)
    assert worst.fidelity >= 1 - 1e-4
    assert abs(worst.alpha_c) <= 1.0 + 1e-12 and abs(worst.alpha_r) <= 1.0 + 1e-12
    assert set(worst.to_dict()) == {'fidelity', 'alpha_c', 'alpha_r', 'converged'}
    assert not u.flags


def test_no_pulses_no_area_error_response(trap):
    fit = perturbation_coefficient(None, OracleConfig(n_max=8, state_search=QUICK_SEARCH), trap)
    assert fit.c == pytest.approx(0.0, abs=1e-9)
    assert fit.b == pytest.approx(0.0, abs=1e-9)
    assert fit.f_w0 == pytest.approx(0.5, abs=1e-6)
    assert len(fit.to_dict()['f_w']) == 6


def test_perturbation_domain(trap):
    config = OracleConfig(n_max=8, state_search=QUICK_SEARCH)
    with pytest.raises(DomainError):
        perturbation_coefficient(None, config, trap, epsilons=[0.0, 1e-3])
    with pytest.raises(DomainError):
        perturbation_coefficient(None, config, trap, epsilons=[1e-3])
    with pytest.raises(DomainError):
        error_growth_scan([], config, trap)
