import numpy as np
import pytest

from pyfastgate.core.conditions import phase_theta
from pyfastgate.core.errors import DomainError
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.phase_space import (MODES, branch_eigenvalue, composition_phase, geometric_phase_difference,
                                         kick_amplitudes, trajectory)


def random_scheme(rng: np.random.Generator, n_groups: int) -> KickScheme:
    z = rng.integers(1, 4, n_groups) * rng.choice([-1, 1], n_groups)
    t = np.sort(rng.uniform(-1.0, 1.0, n_groups))
    return KickScheme.from_arrays(z, t)


@pytest.mark.parametrize('seed', range(5))
def test_geometric_phase_matches_closed_form(trap, seed):
    scheme = random_scheme(np.random.default_rng(seed), 7)
    assert geometric_phase_difference(scheme, trap) == pytest.approx(phase_theta(scheme, trap), abs=1e-12)


@pytest.mark.parametrize('mode', MODES)
def test_exact_scheme_closes_both_modes(exact_direct_scheme, trap, mode):
    path = trajectory(exact_direct_scheme, trap, mode)
    assert path.is_closed(1e-12)
    np.testing.assert_allclose(path.points[-1], path.points[0], atol=1e-12)
    assert path.points.shape == (2 * exact_direct_scheme.n_groups + 1, 2)
    assert path.signed_area() == pytest.approx(path.accumulated_phase, abs=1e-12)


def test_square_trajectory(trap):
    scheme = KickScheme.from_arrays([1, 1, 1, 1], [0.0, 0.25, 0.5, 0.75])
    path = trajectory(scheme, trap, 'centre_of_mass')
    side = np.sqrt(2) * 4 * trap.eta_c
    assert path.is_closed()
    assert path.enclosed_area() == pytest.approx(side ** 2)
    assert path.signed_area() == pytest.approx(side ** 2)
    assert path.accumulated_phase == pytest.approx(side ** 2)
    assert path.is_simple()


def test_open_trajectory(trap):
    path = trajectory(KickScheme.from_arrays([1], [0.0]), trap, 'stretch')
    assert not path.is_closed()
    assert abs(path.net_displacement) == pytest.approx(2 * trap.eta_r)
    assert path.enclosed_area() == 0.0


def test_lab_frame_keeps_distance_from_origin(exact_direct_scheme, trap):
    rotating = trajectory(exact_direct_scheme, trap, 'stretch', initial_alpha=0.3 + 0.1j)
    lab = trajectory(exact_direct_scheme, trap, 'stretch', initial_alpha=0.3 + 0.1j, frame='lab')
    np.testing.assert_allclose(np.hypot(*lab.points.T), np.hypot(*rotating.points.T), atol=1e-12)
    assert lab.frame == 'lab'


def test_branch_eigenvalues():
    assert branch_eigenvalue('centre_of_mass', '00') == 2
    assert branch_eigenvalue('centre_of_mass', '01') == 0
    assert branch_eigenvalue('centre_of_mass', '11') == -2
    assert branch_eigenvalue('stretch', '01') == 2
    assert branch_eigenvalue('stretch', '10') == -2
    assert branch_eigenvalue('stretch', '00') == 0


def test_branches_without_stretch_displacement_stay_put(exact_direct_scheme, trap):
    alphas = kick_amplitudes(exact_direct_scheme, trap, 'stretch', '00')
    np.testing.assert_array_equal(alphas, np.zeros_like(alphas))
    assert composition_phase(alphas) == 0.0


@pytest.mark.parametrize('kwargs', [{'mode': 'radial'}, {'mode': 'stretch', 'frame': 'inertial'},
                                    {'mode': 'stretch', 'branch': '02'}])
def test_trajectory_domain_errors(trap, kwargs):
    with pytest.raises(DomainError):
        trajectory(KickScheme.from_arrays([1], [0.0]), trap, **kwargs)
