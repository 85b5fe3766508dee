import dataclasses
import json
import logging
import numbers
import typing

import numpy as np

from pyfastgate.core.errors import SchemeCancellationError, SchemeInvariantError, SchemeOrderingError, SchemeParseError

logger = logging.getLogger(__name__)

COINCIDENCE_TOLERANCE = 1e-9  # trap periods


def coincidence_clusters(times: np.ndarray, tol: float = COINCIDENCE_TOLERANCE) -> typing.List[np.ndarray]:
    """Index arrays of sorted `times`, each holding the entries within `tol` of the first entry of its cluster."""
    clusters = []
    start = 0
    for idx in range(1, len(times) + 1):
        if idx == len(times) or times[idx] - times[start] > tol:
            clusters.append(np.arange(start, idx))
            start = idx
    return clusters


def cancelled_pairs(z: typing.Sequence[int], t: typing.Sequence[float], tol: float = COINCIDENCE_TOLERANCE) -> int:
    """Number of pulse pairs that meet an opposite-direction pair at the same time and leave no net kick."""
    z = np.asarray(z, dtype=int)
    t = np.asarray(t, dtype=float)
    order = np.argsort(t, kind='stable')
    z, t = z[order], t[order]
    net = sum(abs(int(np.sum(z[cluster]))) for cluster in coincidence_clusters(t, tol))
    return int(np.sum(np.abs(z))) - net


def _as_nonzero_int(value, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        if isinstance(value, numbers.Real) and float(value).is_integer():
            value = int(value)
        else:
            raise SchemeInvariantError(f'{label} must be an integer. A value of {value!r} was entered.')
    if value == 0:
        raise SchemeInvariantError(f'{label} must be nonzero.')
    return int(value)


@dataclasses.dataclass(frozen=True)
class KickGroup:
    """
    ### Description:

    \\(|z|\\) simultaneous counter-propagating \\(\\pi\\)-pulse pairs incident at time `t` (trap periods). The sign
    of `z` is the direction of the first pulse in each pair.
    """
    z: int
    t: float

    def __post_init__(self):
        object.__setattr__(self, 'z', _as_nonzero_int(self.z, 'The pulse pair count z'))
        object.__setattr__(self, 't', float(self.t))
        if not np.isfinite(self.t):
            raise SchemeInvariantError(f'Group time must be finite. A value of {self.t} was entered.')


@dataclasses.dataclass(frozen=True)
class KickScheme:
    """
    ### Description:

    Ordered sequence of `pyfastgate.core.kick_scheme.KickGroup`s with strictly increasing times. This is the
    central control object: every condition, trajectory and oracle computation consumes one.
    """
    groups: typing.Tuple[KickGroup, ...]

    def __post_init__(self):
        groups = tuple(self.groups)
        if len(groups) == 0:
            raise SchemeInvariantError('A kick scheme needs at least one group.')
        for idx, g in enumerate(groups):
            if not isinstance(g, KickGroup):
                raise SchemeInvariantError(f'Group {idx} is a {type(g)}, not a KickGroup.')
        times = np.array([g.t for g in groups])
        if np.any(np.diff(times) <= 0):
            bad = int(np.argmax(np.diff(times) <= 0))
            raise SchemeOrderingError(f'Group times must be strictly increasing. Group {bad + 1} at t={times[bad + 1]} '
                                      f'does not follow group {bad} at t={times[bad]}.')
        object.__setattr__(self, 'groups', groups)

    @classmethod
    def from_arrays(cls, z: typing.Sequence[int], t: typing.Sequence[float]) -> 'KickScheme':
        if len(z) != len(t):
            raise SchemeInvariantError(f'z and t must have equal length ({len(z)} != {len(t)}).')
        return cls(tuple(KickGroup(zk, tk) for zk, tk in zip(z, t)))

    @classmethod
    def merged(cls, z: typing.Sequence[int], t: typing.Sequence[float],
               tol: float = COINCIDENCE_TOLERANCE) -> 'KickScheme':
        """
        ### Description:

        Builds a scheme from unsorted pulse pairs. Pairs closer than `tol` in time are merged into a single group
        with summed `z`, placed at the time of the earliest pair of the cluster. Opposite-direction pairs that cancel
        exactly leave no net kick and are dropped; if nothing is left a
        `pyfastgate.core.errors.SchemeCancellationError` is raised.

        ### Args:

        `z`: signed pair counts

        `t`: incidence times (trap periods)

        `tol`: coincidence tolerance (trap periods). Default: `1e-9`.

        ### Returns:

        A valid `KickScheme`
        """
        z = np.asarray(z, dtype=int)
        t = np.asarray(t, dtype=float)
        if z.shape != t.shape:
            raise SchemeInvariantError(f'z and t must have equal length ({z.size} != {t.size}).')
        order = np.argsort(t, kind='stable')
        z, t = z[order], t[order]
        groups = []
        for cluster in coincidence_clusters(t, tol):
            net = int(np.sum(z[cluster]))
            if net != 0:
                groups.append(KickGroup(net, t[cluster[0]]))
        dropped = int(np.sum(np.abs(z))) - sum(abs(g.z) for g in groups)
        if dropped:
            logger.debug(f'Merging cancelled {dropped} opposite-direction pulse pairs')
        if z.size and not groups:
            raise SchemeCancellationError(f'All {z.size} pulse pairs cancel in opposite-direction pairs')
        return cls(tuple(groups))

    @property
    def z(self) -> np.ndarray:
        return np.array([g.z for g in self.groups], dtype=int)

    @property
    def t(self) -> np.ndarray:
        return np.array([g.t for g in self.groups], dtype=float)

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def n_pairs(self) -> int:
        return int(np.sum(np.abs(self.z)))

    def time_differences(self) -> np.ndarray:
        """Matrix of \\(\\delta t_{mk} = t_m - t_k\\)."""
        t = self.t
        return t[:, None] - t[None, :]

    def shifted(self, dt: float) -> 'KickScheme':
        return KickScheme(tuple(KickGroup(g.z, g.t + dt) for g in self.groups))

    def scaled_z(self, factor: int) -> 'KickScheme':
        return KickScheme(tuple(KickGroup(g.z * factor, g.t) for g in self.groups))

    def to_dict(self) -> dict:
        return {'groups': [{'z': g.z, 't': g.t} for g in self.groups], 'units': 'trap_periods'}


@dataclasses.dataclass(frozen=True)
class SymmetricScheme:
    """
    ### Description:

    Six-group symmetric scheme with pulse-pair multiplicities \\((an, -bn, cn, -cn, bn, -an)\\) at times
    \\((-\\tau_1, -\\tau_2, -\\tau_3, \\tau_3, \\tau_2, \\tau_1)\\). Setting `negate=True` flips every sign, which
    with \\((a,b,c)=(2,3,2)\\) gives the GZC scheme.

    ### Args:

    `a`, `b`, `c`: positive integer weights

    `n`: positive integer scale

    `tau1`, `tau2`, `tau3`: times (trap periods) with \\(\\tau_1 > \\tau_2 > \\tau_3 > 0\\)

    `negate`: flip all pair directions. Default: `False`.
    """
    a: int
    b: int
    c: int
    n: int
    tau1: float
    tau2: float
    tau3: float
    negate: bool = False

    def __post_init__(self):
        for label in ('a', 'b', 'c', 'n'):
            value = _as_nonzero_int(getattr(self, label), f'Symmetric weight {label}')
            if value < 0:
                raise SchemeInvariantError(f'Symmetric weight {label} must be positive. A value of {value} was '
                                           f'entered.')
            object.__setattr__(self, label, value)
        for label in ('tau1', 'tau2', 'tau3'):
            object.__setattr__(self, label, float(getattr(self, label)))
        if not self.tau1 > self.tau2 > self.tau3 > 0:
            raise SchemeOrderingError(f'Symmetric delays must satisfy tau1 > tau2 > tau3 > 0. Values of '
                                      f'({self.tau1}, {self.tau2}, {self.tau3}) were entered.')

    @property
    def abc(self) -> typing.Tuple[int, int, int]:
        return self.a, self.b, self.c

    @property
    def taus(self) -> typing.Tuple[float, float, float]:
        return self.tau1, self.tau2, self.tau3

    @property
    def n_pairs(self) -> int:
        return 2 * self.n * (self.a + self.b + self.c)

    def to_dict(self) -> dict:
        return {'abc': list(self.abc), 'n': self.n, 'tau': list(self.taus), 'negate': self.negate}


def symmetric_pattern(abc: typing.Sequence[int], n: int, taus: typing.Sequence[float],
                      negate: bool = False) -> typing.Tuple[np.ndarray, np.ndarray]:
    """Signed multiplicities and times of the six symmetric groups, with no ordering checks."""
    a, b, c = abc
    tau1, tau2, tau3 = taus
    sign = -1 if negate else 1
    z = sign * n * np.array([a, -b, c, -c, b, -a], dtype=int)
    t = np.array([-tau1, -tau2, -tau3, tau3, tau2, tau1], dtype=float)
    return z, t


def expand_symmetric(s: SymmetricScheme) -> KickScheme:
    """
    ### Description:

    Expands a `pyfastgate.core.kick_scheme.SymmetricScheme` into its six-group `KickScheme`.

    ### Args:

    `s`: the symmetric scheme

    ### Returns:

    A `KickScheme` with \\(2n(a+b+c)\\) pulse pairs and \\(\\sum_k z_k = 0\\)
    """
    if not s.tau1 > s.tau2 > s.tau3 > 0:
        raise SchemeOrderingError(f'Symmetric delays must satisfy tau1 > tau2 > tau3 > 0. Values of {s.taus} were '
                                  f'entered.')
    z, t = symmetric_pattern(s.abc, s.n, s.taus, s.negate)
    return KickScheme.from_arrays(z, t)


def scheme_from_dict(d: dict) -> KickScheme or SymmetricScheme:
    """
    ### Description:

    Builds a scheme from its document form. Explicit schemes use `{"groups": [{"z": int, "t": float}, ...],
    "units": "trap_periods"}`; symmetric schemes use `{"abc": [a, b, c], "n": int, "tau": [t1, t2, t3],
    "negate": bool}`.
    """
    if not isinstance(d, dict):
        raise SchemeParseError(f'A scheme document must be a JSON object, not {type(d).__name__}')
    if 'groups' in d:
        unknown = set(d) - {'groups', 'units'}
        if unknown:
            raise SchemeParseError(f'Unknown scheme field(s): {sorted(unknown)}')
        if d.get('units', 'trap_periods') != 'trap_periods':
            raise SchemeParseError(f'Scheme units must be "trap_periods", not {d["units"]!r}')
        groups = d['groups']
        if not isinstance(groups, list):
            raise SchemeParseError('"groups" must be a list')
        parsed = []
        for idx, g in enumerate(groups):
            if not isinstance(g, dict) or set(g) != {'z', 't'}:
                raise SchemeParseError(f'Group {idx} must be an object with exactly the fields "z" and "t"')
            if not isinstance(g['t'], numbers.Real) or isinstance(g['t'], bool):
                raise SchemeParseError(f'Group {idx} time must be a number')
            parsed.append(KickGroup(g['z'], g['t']))
        return KickScheme(tuple(parsed))
    if 'abc' in d:
        unknown = set(d) - {'abc', 'n', 'tau', 'negate'}
        if unknown:
            raise SchemeParseError(f'Unknown symmetric scheme field(s): {sorted(unknown)}')
        try:
            a, b, c = d['abc']
            tau1, tau2, tau3 = d['tau']
            n = d['n']
        except (KeyError, TypeError, ValueError) as e:
            raise SchemeParseError(f'A symmetric scheme needs "abc" (3 integers), "n" and "tau" (3 numbers): {e}')
        return SymmetricScheme(a, b, c, n, tau1, tau2, tau3, bool(d.get('negate', False)))
    raise SchemeParseError('A scheme document needs either a "groups" or an "abc" field')


def scheme_from_json(text: str) -> KickScheme or SymmetricScheme:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemeParseError(f'Malformed JSON: {e.msg}', e.lineno, e.colno) from e
    return scheme_from_dict(d)


def as_kick_scheme(scheme: KickScheme or SymmetricScheme) -> KickScheme:
    if isinstance(scheme, SymmetricScheme):
        return expand_symmetric(scheme)
    return scheme
