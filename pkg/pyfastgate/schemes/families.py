import copy
import dataclasses
import itertools
import logging
import typing

import numpy as np

from pyfastgate.core.errors import DomainError, SchemeInvariantError, SchemeParseError
from pyfastgate.core.kick_scheme import (KickScheme, SymmetricScheme, cancelled_pairs, expand_symmetric,
                                         symmetric_pattern)
from pyfastgate.core.param import Param
from pyfastgate.core.param_setup import ParamSetup
from pyfastgate.core.trap import TrapParams

logger = logging.getLogger(__name__)

FAMILY_KINDS = ('gzc', 'symmetric_abc', 'direct_split', 'alternating_split', 'free_times')
SYMMETRIC_KINDS = ('gzc', 'symmetric_abc')
SPLIT_KINDS = ('direct_split', 'alternating_split')
GZC_ABC = (2, 3, 2)
DEFAULT_BOUNDS = (0.0, 5.0)

_KIND_ALIASES = {'symmetric': 'symmetric_abc', 'direct': 'direct_split', 'alternating': 'alternating_split',
                 'free': 'free_times'}


def canonical_kind(kind: str) -> str:
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in FAMILY_KINDS:
        raise DomainError(f'Unknown scheme family {kind!r}. Must be one of {FAMILY_KINDS}.')
    return kind


class SchemeFamily:

    def __init__(self, kind: str, n: int = 1, abc: typing.Sequence[int] = (1, 2, 2), n_delays: int = 3,
                 n_laser_pulses: int = 1, n_free: int = 5, alternation: bool = True, serial_pulses: bool = False,
                 rep_rate: float = 3.0e8, trap: TrapParams = TrapParams(),
                 bounds: typing.Sequence[float] = DEFAULT_BOUNDS, initial: typing.Sequence[float] = None):
        """
        ### Description:

        A parametrized set of kick schemes whose free variables are searched by the optimizer. The free variables
        are `pyfastgate.core.param.Param`s held in a `pyfastgate.core.param_setup.ParamSetup`:

        - `gzc` and `symmetric_abc`: `tau1`, `tau2`, `tau3` of the symmetric form with weights `abc` and scale `n`
          (`gzc` fixes \\((a,b,c) = (2,3,2)\\) with flipped directions)
        - `direct_split` and `alternating_split`: the loop delays `d1` ... `dm` of a beam-splitter cascade fed by
          `n_laser_pulses` pulses at the repetition rate; every loop doubles the number of pulse pairs
        - `free_times`: the times `x1` ... `xd` of alternating kicks of `n` pairs each following a kick at
          \\(t=0\\)

        ### Args:

        `kind`: one of `"gzc"`, `"symmetric_abc"`, `"direct_split"`, `"alternating_split"` or `"free_times"`
        (the short forms `"symmetric"`, `"direct"`, `"alternating"` and `"free"` are accepted)

        `n`: scale of the symmetric kinds, or pulse pairs per kick of `free_times`. Default: `1`.

        `abc`: weights of `symmetric_abc`. Default: `(1, 2, 2)`.

        `n_delays`: number of loop delays of the split kinds. Default: `3`.

        `n_laser_pulses`: number of emitted laser pulses of the split kinds. Default: `1`.

        `n_free`: number of free times of `free_times`. Default: `5`.

        `alternation`: whether `alternating_split` flips the direction of pairs routed through its last loop.
        Default: `True`.

        `serial_pulses`: spread every group of a symmetric scheme over consecutive laser pulses instead of
        splitting a single pulse. Default: `False`.

        `rep_rate`: laser repetition rate (Hz). Default: `3.0e8`.

        `trap`: `pyfastgate.core.trap.TrapParams` used to express the pulse spacing in trap periods

        `bounds`: search box `(low, high)` of every free variable (trap periods). Default: `(0.0, 5.0)`.

        `initial`: optional starting values of the free variables

        ### Returns:

        An instance of the `SchemeFamily` class
        """
        self.kind = canonical_kind(kind)
        for label, value in (('n', n), ('n_delays', n_delays), ('n_laser_pulses', n_laser_pulses),
                             ('n_free', n_free)):
            if int(value) != value or value < 1:
                raise DomainError(f'{label} must be a positive integer. A value of {value} was entered.')
        self.n = int(n)
        self.abc = GZC_ABC if self.kind == 'gzc' else tuple(int(w) for w in abc)
        if len(self.abc) != 3 or min(self.abc) < 1:
            raise DomainError(f'abc must be three positive integers. A value of {abc} was entered.')
        self.negate = self.kind == 'gzc'
        self.n_delays = int(n_delays)
        self.n_laser_pulses = int(n_laser_pulses)
        self.n_free = int(n_free)
        self.alternation = bool(alternation)
        self.serial_pulses = bool(serial_pulses)
        if not rep_rate > 0:
            raise DomainError(f'rep_rate must be positive. A value of {rep_rate} was entered.')
        self.rep_rate = float(rep_rate)
        self.trap = trap
        self.bounds = tuple(float(b) for b in bounds)
        if len(self.bounds) != 2 or not np.all(np.isfinite(self.bounds)) or not self.bounds[0] < self.bounds[1]:
            raise DomainError(f'Bounds must be finite with low < high. A value of {bounds} was entered.')
        self.param_setup = ParamSetup(self._generate_param_dict(initial))

    def _default_initial(self) -> np.ndarray:
        if self.kind in SYMMETRIC_KINDS:
            return np.array([0.75, 0.5, 0.25])
        if self.kind in SPLIT_KINDS:
            return 0.5 * 2.0 ** (np.arange(self.n_delays) - (self.n_delays - 1))
        return np.linspace(0.1, 1.0, self.n_free)

    def _generate_param_dict(self, initial) -> typing.Dict[str, Param]:
        initial = self._default_initial() if initial is None else np.asarray(initial, dtype=float)
        if self.kind in SYMMETRIC_KINDS:
            names = ['tau1', 'tau2', 'tau3']
        elif self.kind in SPLIT_KINDS:
            names = [f'd{idx + 1}' for idx in range(self.n_delays)]
        else:
            names = [f'x{idx + 1}' for idx in range(self.n_free)]
        if len(initial) != len(names):
            raise DomainError(f'{self.kind} has {len(names)} free variables; {len(initial)} initial values given')
        return {name: Param(value, bounds=np.array(self.bounds)) for name, value in zip(names, initial)}

    @property
    def free_names(self) -> typing.List[str]:
        return list(self.param_setup.parameter_info['names'])

    @property
    def n_params(self) -> int:
        return self.param_setup.parameter_info['n_params']

    @property
    def search_bounds(self) -> np.ndarray:
        return np.array(self.param_setup.parameter_info['bounds'], dtype=float)

    @property
    def current_values(self) -> np.ndarray:
        return np.array(self.param_setup.parameter_info['values'], dtype=float)

    @property
    def pulse_spacing(self) -> float:
        """Spacing of emitted laser pulses in trap periods."""
        return 1 / (self.rep_rate * self.trap.trap_period)

    @property
    def expected_pairs(self) -> int:
        if self.kind in SYMMETRIC_KINDS:
            return 2 * self.n * sum(self.abc)
        if self.kind in SPLIT_KINDS:
            return self.n_laser_pulses * 2 ** self.n_delays
        return self.n * (self.n_free + 1)

    def override(self, values: typing.Sequence[float], normalized: bool = False):
        self._check_arity(values)
        self.param_setup.override_parameters(values, normalized=normalized)

    def _check_arity(self, values):
        if len(values) != self.n_params:
            raise DomainError(f'{self.kind} takes {self.n_params} free values {self.free_names}; '
                              f'{len(values)} were given')

    def _full(self, values) -> np.ndarray:
        if values is None:
            values = self.current_values
        self._check_arity(values)
        return self.param_setup.full_vector(np.asarray(values, dtype=float))

    def ordering_violation(self, values: typing.Sequence[float] = None) -> float:
        """
        ### Description:

        Amount by which the free values break the ordering the family needs (\\(\\tau_1 > \\tau_2 > \\tau_3 > 0\\)
        for symmetric kinds, increasing positive times for `free_times`, non-negative delays for split kinds).
        Zero when the ordering holds, up to equality. Pulse pairs that meet an opposite-direction pair at the same
        time (possible for `alternating_split` and serial delivery) add the fraction of incident pairs they cancel.
        """
        full = self._full(values)
        if self.kind in SYMMETRIC_KINDS:
            tau1, tau2, tau3 = full
            violation = max(0.0, tau2 - tau1) + max(0.0, tau3 - tau2) + max(0.0, -tau3)
            if violation > 0 or not self.serial_pulses:
                return float(violation)
            z, t = symmetric_pattern(self.abc, self.n, full, self.negate)
            z, t = serial_components(z, t, self.pulse_spacing)
        elif self.kind in SPLIT_KINDS:
            violation = float(np.sum(np.maximum(0.0, -full)))
            if violation > 0 or not (self.kind == 'alternating_split' and self.alternation):
                return violation
            z, t = split_pulse_components(full, self.n_laser_pulses, self.pulse_spacing, alternate=True)
        else:
            steps = np.diff(np.concatenate(([0.0], full)))
            return float(np.sum(np.maximum(0.0, -steps)))
        cancelled = cancelled_pairs(z, t)
        if cancelled:
            logger.debug(f'{self.kind} values {list(full)} cancel {cancelled} of {self.expected_pairs} pulse pairs')
        return cancelled / self.expected_pairs

    def symmetric_scheme(self, values: typing.Sequence[float] = None) -> SymmetricScheme:
        if self.kind not in SYMMETRIC_KINDS:
            raise DomainError(f'{self.kind} is not a symmetric family')
        tau1, tau2, tau3 = self._full(values)
        a, b, c = self.abc
        return SymmetricScheme(a, b, c, self.n, tau1, tau2, tau3, self.negate)

    def generate(self, values: typing.Sequence[float] = None, strict: bool = True) -> KickScheme:
        """
        ### Description:

        Builds the kick scheme for the given free values (the stored `Param` values when `values` is `None`).
        Split kinds place pulse pairs at every subset sum of the loop delays after each laser pulse, with
        coincident pairs merged and opposite-direction pairs cancelled. When every pair cancels (e.g. an
        `alternating_split` whose last loop delay is zero) there is no scheme and
        `pyfastgate.core.errors.SchemeCancellationError` is raised. With `strict=False` the kicks of any family are
        sorted and merged instead of checked, so that points breaking the ordering can still be evaluated.

        ### Args:

        `values`: values of the active free variables, in `free_names` order

        `strict`: raise `pyfastgate.core.errors.SchemeOrderingError` on ordering violations. Default: `True`.

        ### Returns:

        A `pyfastgate.core.kick_scheme.KickScheme`
        """
        full = self._full(values)
        if self.kind in SYMMETRIC_KINDS:
            if strict:
                scheme = expand_symmetric(self.symmetric_scheme(values))
            else:
                z, t = symmetric_pattern(self.abc, self.n, full, self.negate)
                scheme = KickScheme.merged(z, t)
            if self.serial_pulses:
                scheme = serialize_groups(scheme, self.pulse_spacing)
            return scheme
        if self.kind in SPLIT_KINDS:
            return split_pulse_scheme(full, self.n_laser_pulses, self.pulse_spacing,
                                      alternate=self.kind == 'alternating_split' and self.alternation)
        t = np.concatenate(([0.0], full))
        z = self.n * np.where(np.arange(t.size) % 2 == 0, 1, -1)
        if strict:
            return KickScheme.from_arrays(z, t)
        return KickScheme.merged(z, t)

    def with_scale(self, n: int) -> 'SchemeFamily':
        """Copy of the family with its size set to `n` (pairs per kick, or laser pulse count for split kinds)."""
        if int(n) != n or n < 1:
            raise DomainError(f'The family size must be a positive integer. A value of {n} was entered.')
        family = copy.deepcopy(self)
        if self.kind in SPLIT_KINDS:
            family.n_laser_pulses = int(n)
        else:
            family.n = int(n)
        return family

    def configured(self, trap: TrapParams = None, rep_rate: float = None) -> 'SchemeFamily':
        family = copy.deepcopy(self)
        if trap is not None:
            family.trap = trap
        if rep_rate is not None:
            family.rep_rate = float(rep_rate)
        return family

    def to_dict(self) -> dict:
        params = {'rep_rate': self.rep_rate, 'bounds': list(self.bounds),
                  'initial': [float(v) for v in self.param_setup.full_vector(self.current_values)]}
        if self.kind in SYMMETRIC_KINDS:
            params.update(n=self.n, serial_pulses=self.serial_pulses)
            if self.kind == 'symmetric_abc':
                params['abc'] = list(self.abc)
        elif self.kind in SPLIT_KINDS:
            params.update(n_delays=self.n_delays, n_laser_pulses=self.n_laser_pulses)
            if self.kind == 'alternating_split':
                params['alternation'] = self.alternation
        else:
            params.update(n=self.n, n_free=self.n_free)
        return {'kind': self.kind, 'params': params}

    @classmethod
    def from_dict(cls, d: dict, trap: TrapParams = TrapParams()) -> 'SchemeFamily':
        """Builds a family from its descriptor `{"kind": str, "params": {...}}`."""
        if not isinstance(d, dict) or 'kind' not in d:
            raise SchemeParseError('A family descriptor must be an object with a "kind" field')
        unknown = set(d) - {'kind', 'params'}
        if unknown:
            raise SchemeParseError(f'Unknown family descriptor field(s): {sorted(unknown)}')
        params = dict(d.get('params', {}))
        allowed = {'n', 'abc', 'n_delays', 'n_laser_pulses', 'n_free', 'alternation', 'serial_pulses', 'rep_rate',
                   'bounds', 'initial'}
        unknown = set(params) - allowed
        if unknown:
            raise SchemeParseError(f'Unknown family parameter(s): {sorted(unknown)}')
        return cls(d['kind'], trap=trap, **params)

    def __repr__(self):
        return f'SchemeFamily({self.to_dict()})'


def split_pulse_scheme(delays: typing.Sequence[float], n_laser_pulses: int, spacing: float,
                       alternate: bool = False) -> KickScheme:
    """
    ### Description:

    Kick scheme of a beam-splitter cascade. Each laser pulse \\(p\\) emitted at \\(p \\cdot\\) `spacing` yields a
    pulse pair at every subset sum of `delays`. With `alternate=True` pairs that took the long arm of the last loop
    arrive with the opposite first-pulse direction.
    """
    return KickScheme.merged(*split_pulse_components(delays, n_laser_pulses, spacing, alternate))


def split_pulse_components(delays: typing.Sequence[float], n_laser_pulses: int, spacing: float,
                           alternate: bool = False) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Signed directions and times (trap periods) of every incident pulse pair of a cascade, before merging."""
    delays = np.asarray(delays, dtype=float)
    if np.any(delays < 0):
        raise DomainError(f'Loop delays must be non-negative. Values of {list(delays)} were entered.')
    z, t = [], []
    for p in range(n_laser_pulses):
        for bits in itertools.product((0, 1), repeat=delays.size):
            bits = np.array(bits)
            t.append(p * spacing + float(bits @ delays))
            z.append(-1 if alternate and bits[-1] else 1)
    return np.array(z, dtype=int), np.array(t)


def serialize_groups(scheme: KickScheme, spacing: float) -> KickScheme:
    """
    ### Description:

    Replaces every group of \\(|z|\\) simultaneous pairs by \\(|z|\\) single pairs on consecutive laser pulses
    `spacing` apart, centred on the group time. This is how a scheme is delivered without pulse splitting.
    """
    return KickScheme.merged(*serial_components(scheme.z, scheme.t, spacing))


def serial_components(z: typing.Sequence[int], t: typing.Sequence[float],
                      spacing: float) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Single pulse pairs (directions and times) that deliver the groups `z` at `t` on consecutive laser pulses."""
    directions, times = [], []
    for zk, tk in zip(z, t):
        count = abs(int(zk))
        offsets = (np.arange(count) - (count - 1) / 2) * spacing
        directions.extend([int(np.sign(zk))] * count)
        times.extend(tk + offsets)
    return np.array(directions, dtype=int), np.array(times)


def generate(family: SchemeFamily, delay_vector: typing.Sequence[float]) -> KickScheme:
    """Module-level form of `SchemeFamily.generate` with strict ordering."""
    return family.generate(delay_vector)


@dataclasses.dataclass(frozen=True)
class KnownSolution:
    """
    ### Description:

    Catalogued benchmark: a family instance with its reported gate time (trap periods) and pulse-pair count.
    Delays are not stored and must be re-derived by optimization. `target` is `"benchmark"` for a reported best
    time and `"limit"` for a reported asymptotic limit.
    """
    label: str
    family: SchemeFamily
    gate_time: float
    n_pairs: int
    target: str = 'benchmark'


def enumerate_known_solutions(trap: TrapParams = TrapParams(), rep_rate: float = 3.0e8) \
        -> typing.List[KnownSolution]:
    """
    ### Description:

    Lists the gate times reported for the catalogued scheme families at \\(\\eta = 0.2\\) and 300 MHz.

    ### Returns:

    A `list` of `pyfastgate.schemes.families.KnownSolution`
    """
    def family(kind, **kwargs):
        return SchemeFamily(kind, trap=trap, rep_rate=rep_rate, **kwargs)

    solutions = [
        KnownSolution('direct 8 pairs', family('direct_split', n_delays=3), 1.37, 8),
        KnownSolution('alternating 16 pairs', family('alternating_split', n_delays=3, n_laser_pulses=2), 1.18, 16),
        KnownSolution('alternating limit', family('alternating_split', n_delays=4, n_laser_pulses=8), 0.8, 128,
                      'limit'),
        KnownSolution('symmetric (1,1,1) limit', family('symmetric_abc', abc=(1, 1, 1), n=4), 0.73, 24, 'limit'),
        KnownSolution('symmetric (1,2,2) 80 pairs', family('symmetric_abc', abc=(1, 2, 2), n=8), 0.29, 80),
        KnownSolution('symmetric (1,2,2) 320 pairs', family('symmetric_abc', abc=(1, 2, 2), n=32), 0.12, 320),
        KnownSolution('free search 32 split pairs', family('free_times', n_free=9, n=32), 0.086, 320),
    ]
    for solution in solutions:
        if solution.family.expected_pairs != solution.n_pairs:
            raise SchemeInvariantError(f'Catalogue entry {solution.label} does not match its family size')
    return solutions
