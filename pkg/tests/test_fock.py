import numpy as np
import pytest

from pyfastgate.core.errors import DomainError, TruncationWarning
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.trap import TrapParams
from pyfastgate.oracle.fock import (FreeEvolution, GateUnitary, OracleConfig, PairGroup, StateSearch, evolve_scheme,
                                    guard_population, kick_unitary, pair_unitary)

SMALL = OracleConfig(n_max=8)


def random_states(n_max: int, batch: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    states = rng.normal(size=(2, 2, n_max, n_max, batch)) + 1j * rng.normal(size=(2, 2, n_max, n_max, batch))
    return states / np.linalg.norm(states.reshape(-1, batch), axis=0)


def test_zero_area_pulse_is_the_identity(trap):
    np.testing.assert_allclose(kick_unitary(0.0, 1, SMALL, trap).matrix(), np.eye(4 * 8 ** 2), atol=1e-14)


@pytest.mark.parametrize('direction', [1, -1])
def test_pulse_pair_is_an_exact_pair_group(trap, direction):
    states = random_states(12, 3)
    paired = pair_unitary(direction, OracleConfig(n_max=12), trap).apply(states)
    exact = GateUnitary(12, trap, (PairGroup(direction),)).apply(states)
    np.testing.assert_allclose(paired, exact, atol=1e-10)


def test_imperfect_pulse_pair_is_unitary(trap):
    m = pair_unitary(1, OracleConfig(n_max=8, epsilon=0.01), trap).matrix()
    np.testing.assert_allclose(m.conj().T @ m, np.eye(m.shape[0]), atol=1e-10)


def test_free_evolution_round_trip(trap):
    u = GateUnitary(8, trap, (FreeEvolution(0.37), FreeEvolution(-0.37)))
    np.testing.assert_allclose(u.matrix(), np.eye(u.dim), atol=1e-14)


def test_compose_applies_the_argument_first(trap):
    first = GateUnitary(8, trap, (PairGroup(1),))
    second = GateUnitary(8, trap, (FreeEvolution(0.25),))
    np.testing.assert_allclose(second.compose(first).matrix(), second.matrix() @ first.matrix(), atol=1e-12)
    with pytest.raises(DomainError):
        second.compose(GateUnitary(10, trap))


def test_closed_scheme_returns_the_motion(exact_direct_scheme, trap):
    u = evolve_scheme(exact_direct_scheme, OracleConfig(n_max=30), trap)
    states = np.zeros((2, 2, 30, 30, 4), dtype=complex)
    for column, (i1, i2) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        states[i1, i2, 0, 0, column] = 1.0
    out = u.apply(states)
    for column, (i1, i2) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        assert abs(out[i1, i2, 0, 0, column]) == pytest.approx(1.0, abs=1e-8)


def test_empty_scheme_is_the_identity(trap):
    assert evolve_scheme(None, SMALL, trap).factors == ()
    assert evolve_scheme([], SMALL, trap).factors == ()


def test_pulse_level_scheme_factors(trap):
    scheme = KickScheme.from_arrays([2, -1], [0.0, 0.5])
    u = evolve_scheme(scheme, OracleConfig(n_max=8, epsilon=0.001, intra_pair_delay=0.01), trap)
    kinds = [type(f).__name__ for f in u.factors]
    assert kinds.count('Pulse') == 6
    assert kinds[-1] == 'FreeEvolution'
    assert u.factors[-1].dt == pytest.approx(-0.51)


def test_overlapping_pairs_are_rejected(trap):
    scheme = KickScheme.from_arrays([3, 1], [0.0, 0.01])
    with pytest.raises(DomainError):
        evolve_scheme(scheme, OracleConfig(n_max=8, intra_pair_delay=0.005), trap)


def test_large_displacements_warn():
    with pytest.warns(TruncationWarning):
        u = kick_unitary(np.pi / 2, 1, SMALL, TrapParams(eta=0.6))
    assert 'displacement_guard' in u.flags


def test_guard_population():
    states = np.zeros((2, 2, 8, 8, 2), dtype=complex)
    states[0, 0, 0, 0, 0] = 1.0
    states[0, 0, 7, 0, 1] = 1.0
    assert guard_population(states) == 1.0
    assert guard_population(states, np.array([0.75, 0.25])) == pytest.approx(0.25)


def test_matrix_is_limited_to_small_truncations(trap):
    with pytest.raises(DomainError):
        GateUnitary.identity(20, trap).matrix()
    with pytest.raises(DomainError):
        GateUnitary.identity(8, trap).apply(np.zeros((2, 2, 8, 8)))


@pytest.mark.parametrize('kwargs', [{'n_max': 4}, {'n_max': 8.5}, {'epsilon': 1.0}, {'nbar': -0.1},
                                    {'intra_pair_delay': -0.01}, {'frame': 'inertial'}])
def test_invalid_oracle_config(kwargs):
    with pytest.raises(DomainError):
        OracleConfig(**kwargs)


def test_invalid_state_search():
    with pytest.raises(DomainError):
        StateSearch(alpha_max=-1.0)
    with pytest.raises(DomainError):
        StateSearch(n_phases=0)


def test_invalid_pulse_direction(trap):
    with pytest.raises(DomainError):
        kick_unitary(np.pi / 2, 0, SMALL, trap)
