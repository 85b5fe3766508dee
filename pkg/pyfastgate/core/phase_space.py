"""
Phase-space trajectories of the two axial modes under a kick scheme, and the geometric phase obtained by composing
displacement operators. Quadratures are \\(X = (a + a^\\dagger)/\\sqrt{2}\\) and
\\(P = (a - a^\\dagger)/(i\\sqrt{2})\\), so a coherent amplitude \\(\\alpha\\) sits at
\\((\\sqrt{2}\\,\\mathrm{Re}\\,\\alpha, \\sqrt{2}\\,\\mathrm{Im}\\,\\alpha)\\).
"""
import dataclasses
import typing

import numpy as np
from shapely.geometry import LineString, Polygon

from pyfastgate.core.errors import DomainError
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.trap import TrapParams

MODES = ('centre_of_mass', 'stretch')
FRAMES = ('rotating', 'lab')
BRANCHES = ('00', '01', '10', '11')
DEFAULT_BRANCH = {'centre_of_mass': '00', 'stretch': '01'}


def _check_mode(mode: str):
    if mode not in MODES:
        raise DomainError(f'Unknown mode {mode!r}. Must be one of {MODES}.')


def branch_eigenvalue(mode: str, branch: str) -> int:
    """
    ### Description:

    Eigenvalue of \\(\\sigma_1^z + \\sigma_2^z\\) (centre of mass) or \\(\\sigma_1^z - \\sigma_2^z\\) (stretch) on
    an internal basis state. `'0'` has \\(\\sigma^z = +1\\).
    """
    _check_mode(mode)
    if branch not in BRANCHES:
        raise DomainError(f'Unknown internal branch {branch!r}. Must be one of {BRANCHES}.')
    s1, s2 = (1 if ch == '0' else -1 for ch in branch)
    return s1 + s2 if mode == 'centre_of_mass' else s1 - s2


def mode_frequency_factor(mode: str) -> float:
    _check_mode(mode)
    return 1.0 if mode == 'centre_of_mass' else float(np.sqrt(3))


def kick_amplitudes(scheme: KickScheme, params: TrapParams, mode: str, branch: str = None) -> np.ndarray:
    """
    ### Description:

    Rotating-frame displacement of each kick group. For the centre-of-mass mode
    \\(\\alpha_k = -2i\\,s\\,\\eta_c z_k e^{i\\nu t_k}\\) and for the stretch mode
    \\(\\alpha_k = -i\\,s\\,\\eta_r z_k e^{i\\sqrt{3}\\nu t_k}\\), where \\(s\\) is the branch eigenvalue.

    ### Returns:

    Complex `np.ndarray` of shape `(n_groups,)`
    """
    branch = DEFAULT_BRANCH[mode] if branch is None and mode in DEFAULT_BRANCH else branch
    s = branch_eigenvalue(mode, branch)
    z, t = scheme.z, scheme.t
    if mode == 'centre_of_mass':
        return -2j * s * params.eta_c * z * np.exp(2j * np.pi * t)
    return -1j * s * params.eta_r * z * np.exp(2j * np.pi * np.sqrt(3) * t)


def composition_phase(alphas: np.ndarray) -> float:
    """Phase of \\(D(\\alpha_N)\\cdots D(\\alpha_1)\\) relative to \\(D(\\sum_k\\alpha_k)\\):
    \\(\\sum_{m>k}\\mathrm{Im}(\\alpha_m \\alpha_k^*)\\)."""
    alphas = np.asarray(alphas, dtype=complex)
    preceding = np.concatenate(([0j], np.cumsum(alphas)[:-1]))
    return float(np.sum(np.imag(alphas * np.conj(preceding))))


@dataclasses.dataclass(frozen=True, eq=False)
class Trajectory:
    """
    ### Description:

    Piecewise trajectory of one mode for one internal branch. `points` holds \\((X, P)\\) at the start and before
    and after every kick, `times` the matching times (trap periods).
    """
    mode: str
    branch: str
    frame: str
    times: np.ndarray
    points: np.ndarray
    net_displacement: complex
    accumulated_phase: float

    def is_closed(self, tol: float = 1e-12) -> bool:
        return abs(self.net_displacement) <= tol

    def signed_area(self) -> float:
        """Shoelace area of the polygon through `points`, positive when traversed counter-clockwise."""
        x, p = self.points[:, 0], self.points[:, 1]
        return float(0.5 * np.sum(x * np.roll(p, -1) - np.roll(x, -1) * p))

    def _distinct_points(self) -> typing.List[tuple]:
        distinct = [tuple(self.points[0])]
        for point in self.points[1:]:
            if np.hypot(point[0] - distinct[-1][0], point[1] - distinct[-1][1]) > 1e-12:
                distinct.append(tuple(point))
        return distinct

    def enclosed_area(self) -> float:
        """
        ### Description:

        Unsigned area of the trajectory outline, computed with the
        [shapely](https://shapely.readthedocs.io/en/stable/manual.html) library.
        """
        points = self._distinct_points()
        if len(points) < 3:
            return 0.0
        return float(Polygon(points).area)

    def is_simple(self) -> bool:
        """Whether the trajectory polyline is free of self-intersections (shapely `LineString.is_simple`)."""
        points = self._distinct_points()
        if len(points) < 2:
            return True
        return bool(LineString(points).is_simple)

    def to_rows(self) -> typing.List[tuple]:
        return [(idx, float(t), float(x), float(p), self.branch, self.frame)
                for idx, (t, (x, p)) in enumerate(zip(self.times, self.points))]


def trajectory(scheme: KickScheme, params: TrapParams, mode: str, initial_alpha: complex = 0j,
               frame: str = 'rotating', branch: str = None) -> Trajectory:
    """
    ### Description:

    Traces the coherent-state centre of one motional mode through the scheme. In the frame rotating at the mode
    frequency free evolution leaves the state in place and every kick group adds its amplitude from
    `kick_amplitudes`; in the lab frame the same points are rotated back by \\(e^{-i\\omega t}\\).

    ### Args:

    `scheme`: the `pyfastgate.core.kick_scheme.KickScheme`

    `params`: the `pyfastgate.core.trap.TrapParams`

    `mode`: `"centre_of_mass"` or `"stretch"`

    `initial_alpha`: starting coherent amplitude in the rotating frame. Default: `0j`.

    `frame`: `"rotating"` or `"lab"`. Default: `"rotating"`.

    `branch`: internal basis state label (`"00"`, `"01"`, `"10"` or `"11"`). Defaults to the branch with
    eigenvalue \\(+2\\): `"00"` for the centre of mass and `"01"` for the stretch mode.

    ### Returns:

    A `pyfastgate.core.phase_space.Trajectory` with \\(2N_{groups} + 1\\) points
    """
    _check_mode(mode)
    if frame not in FRAMES:
        raise DomainError(f'Unknown frame {frame!r}. Must be one of {FRAMES}.')
    branch = DEFAULT_BRANCH[mode] if branch is None else branch
    alphas = kick_amplitudes(scheme, params, mode, branch)
    t = scheme.t

    amplitudes = [complex(initial_alpha)]
    times = [t[0]]
    current = complex(initial_alpha)
    for alpha_k, t_k in zip(alphas, t):
        amplitudes.append(current)
        current = current + alpha_k
        amplitudes.append(current)
        times.extend([t_k, t_k])
    amplitudes = np.array(amplitudes)
    times = np.array(times)
    if frame == 'lab':
        amplitudes = amplitudes * np.exp(-2j * np.pi * mode_frequency_factor(mode) * times)
    points = np.sqrt(2) * np.column_stack((amplitudes.real, amplitudes.imag))
    return Trajectory(mode=mode, branch=branch, frame=frame, times=times, points=points,
                      net_displacement=complex(np.sum(alphas)), accumulated_phase=composition_phase(alphas))


def geometric_phase_difference(scheme: KickScheme, params: TrapParams) -> float:
    """
    ### Description:

    Half the difference between the displacement-composition phases of the `"00"` branch (displaced only in the
    centre-of-mass mode) and of the `"01"` branch (displaced only in the stretch mode). Equal to \\(\\Theta\\) of
    `pyfastgate.core.conditions.phase_theta`, computed without it.
    """
    phase_c = composition_phase(kick_amplitudes(scheme, params, 'centre_of_mass', '00'))
    phase_r = composition_phase(kick_amplitudes(scheme, params, 'stretch', '01'))
    return (phase_c - phase_r) / 2
