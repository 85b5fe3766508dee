"""
Truncated two-mode Fock-space simulation of a gate. States of two qubits and the two axial modes are held as
arrays of shape `(2, 2, n_max, n_max, B)` (ion 1, ion 2, centre-of-mass level, stretch level, batch column).
Internal index 0 is \\(|0\\rangle\\) with \\(\\sigma^z = +1\\). Displacements come from `scipy.linalg.expm` of the
truncated quadrature \\(a + a^\\dagger\\), which keeps every factor exactly unitary on the truncated space.
"""
import dataclasses
import logging
import typing
import warnings

import numpy as np
from scipy.linalg import expm

from pyfastgate.core.errors import DomainError, TruncationWarning
from pyfastgate.core.kick_scheme import KickScheme, as_kick_scheme
from pyfastgate.core.trap import TrapParams

logger = logging.getLogger(__name__)

GUARD_POPULATION = 1e-6
MAX_MATRIX_LEVELS = 16


@dataclasses.dataclass(frozen=True)
class StateSearch:
    """
    ### Description:

    Worst-case state search: coherent amplitudes with \\(|\\alpha| \\leq\\) `alpha_max` per mode are scanned on a grid
    of `n_magnitudes` magnitudes (zero included) times `n_phases` phases, then refined with at most `refine_steps`
    Nelder-Mead iterations.
    """
    alpha_max: float = 2.0
    n_magnitudes: int = 3
    n_phases: int = 4
    refine_steps: int = 400

    def __post_init__(self):
        if not self.alpha_max >= 0:
            raise DomainError(f'alpha_max must be non-negative. A value of {self.alpha_max} was entered.')
        for label in ('n_magnitudes', 'n_phases'):
            if getattr(self, label) < 1:
                raise DomainError(f'{label} must be at least 1. A value of {getattr(self, label)} was entered.')
        if self.refine_steps < 0:
            raise DomainError(f'refine_steps must be non-negative. A value of {self.refine_steps} was entered.')


@dataclasses.dataclass(frozen=True)
class OracleConfig:
    """
    ### Description:

    Settings of the Fock-space simulation.

    ### Args:

    `n_max`: Fock levels kept per mode, at least 8. Default: `40`.

    `nbar`: thermal occupation per mode for the process fidelity. Default: `None`, meaning `TrapParams.nbar`.

    `epsilon`: pulse-area error; every pulse has area \\(\\theta = \\pi/2 + \\epsilon\\) with
    \\(|\\epsilon| < \\pi/4\\). Default: `0.0`.

    `state_search`: the `pyfastgate.oracle.fock.StateSearch` of the worst-case fidelity

    `intra_pair_delay`: free evolution between the two pulses of a pair (trap periods). Default: `0.0`.

    `target_phase`: phase \\(\\Theta\\) of the ideal gate \\(e^{i\\Theta\\sigma^z\\sigma^z}\\). Default: \\(\\pi/4\\).

    `frame`: `"rotating"` returns the gate in the frame rotating with both modes, `"lab"` leaves the residual
    free rotation in. Default: `"rotating"`.
    """
    n_max: int = 40
    nbar: float = None
    epsilon: float = 0.0
    state_search: StateSearch = StateSearch()
    intra_pair_delay: float = 0.0
    target_phase: float = np.pi / 4
    frame: str = 'rotating'

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 8:
            raise DomainError(f'n_max must be an integer of at least 8. A value of {self.n_max} was entered.')
        if self.nbar is not None and not self.nbar >= 0:
            raise DomainError(f'nbar must be non-negative. A value of {self.nbar} was entered.')
        if not abs(self.epsilon) < np.pi / 4:
            raise DomainError(f'epsilon must lie in (-pi/4, pi/4). A value of {self.epsilon} was entered.')
        if not self.intra_pair_delay >= 0:
            raise DomainError(f'intra_pair_delay must be non-negative. A value of {self.intra_pair_delay} was '
                              f'entered.')
        if self.frame not in ('rotating', 'lab'):
            raise DomainError(f'Unknown frame {self.frame!r}. Must be "rotating" or "lab".')
        object.__setattr__(self, 'n_max', int(self.n_max))

    @property
    def theta(self) -> float:
        return np.pi / 2 + self.epsilon

    def thermal_nbar(self, params: TrapParams) -> float:
        return params.nbar if self.nbar is None else self.nbar

    def replace(self, **changes) -> 'OracleConfig':
        return dataclasses.replace(self, **changes)


class FockOperators:

    def __init__(self, n_max: int, params: TrapParams):
        """
        ### Description:

        Truncated mode operators shared by the factors of a `GateUnitary`. Exponentials
        \\(e^{-i c (a + a^\\dagger)}\\) are cached by coefficient.
        """
        self.n_max = n_max
        self.params = params
        a = np.diag(np.sqrt(np.arange(1, n_max, dtype=complex)), k=1)
        self.x = a + a.conj().T
        self.levels = np.arange(n_max)
        self._cache = {}

    def expm_x(self, coefficient: float) -> np.ndarray:
        coefficient = float(coefficient)
        if coefficient not in self._cache:
            if coefficient == 0.0:
                self._cache[coefficient] = np.eye(self.n_max, dtype=complex)
            else:
                self._cache[coefficient] = expm(-1j * coefficient * self.x)
        return self._cache[coefficient]

    def ion_kick(self, ion: int, direction: int) -> typing.Tuple[np.ndarray, np.ndarray]:
        """\\(e^{-i d\\, k x_j}\\) as a (centre-of-mass, stretch) operator pair for ion `ion` (0 or 1)."""
        stretch_sign = 1 if ion == 0 else -1
        return (self.expm_x(direction * self.params.eta_c),
                self.expm_x(stretch_sign * direction * self.params.eta_r / 2))


def apply_modes(op_c: np.ndarray, op_r: np.ndarray, block: np.ndarray) -> np.ndarray:
    """Applies \\(O_c \\otimes O_r\\) to an array whose last three axes are (centre of mass, stretch, batch)."""
    out = np.einsum('ij,...jkb->...ikb', op_c, block)
    return np.einsum('kl,...jlb->...jkb', op_r, out)


@dataclasses.dataclass(frozen=True)
class Pulse:
    """One travelling pulse of area `theta` and direction `direction` acting on both ions."""
    direction: int
    theta: float

    def apply(self, psi: np.ndarray, ops: FockOperators) -> np.ndarray:
        c, s = np.cos(self.theta), np.sin(self.theta)
        for ion in (0, 1):
            up, down = ops.ion_kick(ion, self.direction), ops.ion_kick(ion, -self.direction)
            kicked = np.empty_like(psi)
            if ion == 0:
                kicked[0] = apply_modes(*up, psi[0])
                kicked[1] = apply_modes(*down, psi[1])
                flipped = kicked[::-1]
            else:
                kicked[:, 0] = apply_modes(*up, psi[:, 0])
                kicked[:, 1] = apply_modes(*down, psi[:, 1])
                flipped = kicked[:, ::-1]
            psi = c * psi - 1j * s * flipped
        return psi


@dataclasses.dataclass(frozen=True)
class PairGroup:
    """\\(|z|\\) exact counter-propagating \\(\\pi\\)-pulse pairs, \\(e^{-2iz(kx_1\\sigma^z_1 + kx_2\\sigma^z_2)}\\)."""
    z: int

    def apply(self, psi: np.ndarray, ops: FockOperators) -> np.ndarray:
        out = np.empty_like(psi)
        for i1, s1 in enumerate((1, -1)):
            for i2, s2 in enumerate((1, -1)):
                op_c = ops.expm_x(2 * self.z * ops.params.eta_c * (s1 + s2))
                op_r = ops.expm_x(self.z * ops.params.eta_r * (s1 - s2))
                out[i1, i2] = apply_modes(op_c, op_r, psi[i1, i2])
        return out


@dataclasses.dataclass(frozen=True)
class FreeEvolution:
    """\\(e^{-i 2\\pi \\delta t (n_c + \\sqrt{3} n_r)}\\) for \\(\\delta t\\) in trap periods (negative undoes it)."""
    dt: float

    def apply(self, psi: np.ndarray, ops: FockOperators) -> np.ndarray:
        phase_c = np.exp(-2j * np.pi * self.dt * ops.levels)
        phase_r = np.exp(-2j * np.pi * np.sqrt(3) * self.dt * ops.levels)
        return psi * (phase_c[:, None] * phase_r[None, :])[None, None, :, :, None]


@dataclasses.dataclass(frozen=True)
class ZZPhase:
    """\\(e^{i\\theta\\sigma^z_1\\sigma^z_2}\\)."""
    theta: float

    def apply(self, psi: np.ndarray, ops: FockOperators) -> np.ndarray:
        signs = np.array([[1, -1], [-1, 1]])
        return psi * np.exp(1j * self.theta * signs)[:, :, None, None, None]


class GateUnitary:

    def __init__(self, n_max: int, params: TrapParams, factors: typing.Sequence = (),
                 flags: typing.Sequence[str] = ()):
        """
        ### Description:

        Operator on two qubits and two truncated modes, stored as an ordered product of factors (first factor acts
        first) and applied to batches of states without forming the full matrix.

        ### Args:

        `n_max`: Fock levels per mode

        `params`: the `pyfastgate.core.trap.TrapParams`

        `factors`: sequence of `Pulse`, `PairGroup`, `FreeEvolution` or `ZZPhase`

        `flags`: labels of problems met while building the operator (e.g. `"displacement_guard"`)
        """
        self.n_max = int(n_max)
        self.params = params
        self.factors = tuple(factors)
        self.flags = set(flags)
        self.ops = FockOperators(self.n_max, params)

    @classmethod
    def identity(cls, n_max: int, params: TrapParams) -> 'GateUnitary':
        return cls(n_max, params)

    @classmethod
    def phase_gate(cls, theta: float, n_max: int, params: TrapParams) -> 'GateUnitary':
        """Ideal gate \\(e^{i\\theta\\sigma^z_1\\sigma^z_2} \\otimes 1\\)."""
        return cls(n_max, params, (ZZPhase(theta),))

    @property
    def dim(self) -> int:
        return 4 * self.n_max ** 2

    def compose(self, other: 'GateUnitary') -> 'GateUnitary':
        """Product `self @ other`: `other` acts first."""
        if other.n_max != self.n_max:
            raise DomainError(f'Cannot compose operators with n_max {self.n_max} and {other.n_max}')
        return GateUnitary(self.n_max, self.params, other.factors + self.factors, self.flags | other.flags)

    def apply(self, states: np.ndarray) -> np.ndarray:
        """Applies the operator to states of shape `(2, 2, n_max, n_max, B)`."""
        psi = np.asarray(states, dtype=complex)
        if psi.shape[:4] != (2, 2, self.n_max, self.n_max) or psi.ndim != 5:
            raise DomainError(f'States must have shape (2, 2, {self.n_max}, {self.n_max}, B); got {psi.shape}')
        for factor in self.factors:
            psi = factor.apply(psi, self.ops)
        return psi

    def matrix(self) -> np.ndarray:
        """Full matrix in the basis ordered (ion 1, ion 2, centre of mass, stretch); small `n_max` only."""
        if self.n_max > MAX_MATRIX_LEVELS:
            raise DomainError(f'Full matrices are built only for n_max <= {MAX_MATRIX_LEVELS}. A value of '
                              f'{self.n_max} was entered.')
        basis = np.eye(self.dim, dtype=complex).reshape(2, 2, self.n_max, self.n_max, self.dim)
        return self.apply(basis).reshape(self.dim, self.dim)

    def __repr__(self):
        return f'GateUnitary(n_max={self.n_max}, factors={len(self.factors)}, flags={sorted(self.flags)})'


def guard_population(states: np.ndarray, weights: np.ndarray = None) -> float:
    """
    ### Description:

    Population in the guard band (top `n_max // 4` levels of either mode) of a batch of states, averaged with
    `weights` over the batch columns (largest column population when no weights are given).
    """
    n_max = states.shape[2]
    guard = n_max - n_max // 4
    prob = np.abs(states) ** 2
    in_guard = prob[:, :, guard:, :, :].sum(axis=(0, 1, 2, 3)) + prob[:, :, :guard, guard:, :].sum(axis=(0, 1, 2, 3))
    if weights is None:
        return float(in_guard.max(initial=0.0))
    return float(np.sum(weights * in_guard))


def check_guard(states: np.ndarray, weights: np.ndarray = None, u: GateUnitary = None) -> bool:
    """Warns with `TruncationWarning` when the guard-band population exceeds 1e-6; returns whether it did."""
    population = guard_population(states, weights)
    if population > GUARD_POPULATION:
        warnings.warn(f'Guard-band population {population:.2e} exceeds {GUARD_POPULATION:.0e}; increase n_max',
                      TruncationWarning, stacklevel=3)
        if u is not None:
            u.flags.add('guard_population')
        return True
    return False


def kick_unitary(theta: float, direction: int, config: OracleConfig, params: TrapParams) -> GateUnitary:
    """
    ### Description:

    One travelling pulse of area \\(\\theta\\) hitting both ions:
    \\(\\prod_j [\\cos\\theta - i\\sin\\theta\\,\\sigma^x_j e^{-i d\\, k x_j \\sigma^z_j}]\\) with
    \\(k x_{1,2} = \\eta_c(a_c + a_c^\\dagger) \\pm \\frac{\\eta_r}{2}(a_r + a_r^\\dagger)\\). A pulse pair is the
    composition of two pulses of opposite direction.

    ### Args:

    `theta`: pulse area \\(\\theta\\)

    `direction`: +1 or -1

    `config`: the `pyfastgate.oracle.fock.OracleConfig`

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    A `pyfastgate.oracle.fock.GateUnitary`
    """
    if direction not in (1, -1):
        raise DomainError(f'The pulse direction must be +1 or -1. A value of {direction} was entered.')
    u = GateUnitary(config.n_max, params, (Pulse(direction, theta),))
    _check_displacement(u, 2 * params.eta_c)
    return u


def pair_unitary(direction: int, config: OracleConfig, params: TrapParams) -> GateUnitary:
    """Pulse pair whose first pulse travels in `direction`, both pulses of area `config.theta`."""
    first = kick_unitary(config.theta, direction, config, params)
    second = kick_unitary(config.theta, -direction, config, params)
    return second.compose(first)


def _check_displacement(u: GateUnitary, magnitude: float):
    limit = np.sqrt(u.n_max) / 4
    if magnitude > limit:
        warnings.warn(f'A single displacement of {magnitude:.3f} exceeds sqrt(n_max)/4 = {limit:.3f}; the truncated '
                      f'operators may be inaccurate', TruncationWarning, stacklevel=3)
        u.flags.add('displacement_guard')


def evolve_scheme(scheme: KickScheme or None, config: OracleConfig, params: TrapParams) -> GateUnitary:
    """
    ### Description:

    Gate operator of a kick scheme: pulse-pair groups alternating with free evolution of both modes for the time
    between groups. With \\(\\epsilon = 0\\) and no intra-pair delay each group is one exact displacement
    (`PairGroup`); otherwise every pair is simulated as two pulses of area \\(\\pi/2 + \\epsilon\\), separated by
    `config.intra_pair_delay`. In the rotating frame the free rotation accumulated over the gate is undone at the
    end, so a closed scheme returns the motion to where it started.

    ### Args:

    `scheme`: a `pyfastgate.core.kick_scheme.KickScheme` or `SymmetricScheme`; `None` or an empty sequence gives
    the identity

    `config`: the `pyfastgate.oracle.fock.OracleConfig`

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    A `pyfastgate.oracle.fock.GateUnitary`
    """
    if scheme is None or (isinstance(scheme, (list, tuple)) and len(scheme) == 0):
        return GateUnitary.identity(config.n_max, params)
    scheme = as_kick_scheme(scheme)
    exact = config.epsilon == 0 and config.intra_pair_delay == 0
    u = GateUnitary(config.n_max, params)
    largest = np.max(np.abs(scheme.z)) * max(4 * params.eta_c, 2 * params.eta_r)
    _check_displacement(u, largest if exact else max(4 * params.eta_c, 2 * params.eta_r))

    factors = []
    start = scheme.t[0]
    end = start
    for group in scheme.groups:
        dt = group.t - end
        if dt < -1e-12:
            raise DomainError(f'Pairs of the group at t={end - dt} overlap the group at t={group.t} with an intra-pair '
                              f'delay of {config.intra_pair_delay}')
        if dt > 0:
            factors.append(FreeEvolution(dt))
        if exact:
            factors.append(PairGroup(group.z))
            end = group.t
            continue
        direction = int(np.sign(group.z))
        for _ in range(abs(group.z)):
            factors.append(Pulse(direction, config.theta))
            if config.intra_pair_delay > 0:
                factors.append(FreeEvolution(config.intra_pair_delay))
            factors.append(Pulse(-direction, config.theta))
        end = group.t + abs(group.z) * config.intra_pair_delay
    if config.frame == 'rotating' and end > start:
        factors.append(FreeEvolution(-(end - start)))
    u.factors = tuple(factors)
    logger.debug(f'Built gate operator from {scheme.n_groups} groups ({len(factors)} factors, n_max={config.n_max})')
    return u
