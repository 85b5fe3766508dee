"""
Beam-splitter delay networks. A network is a cascade of `SplitterStage`s; every stage splits each incoming pulse
component into a long arm (extra delay, energy fraction `ratio`, optional direction flip) and a short arm. A stage
may route its arms through their own sub-cascades (`long_path`, `short_path`) before the remaining stages of the
cascade act on both. Each leaf of the network is one counter-propagating pulse pair at the ions: the final
pair-forming splitter is implicit.
"""
import dataclasses
import logging
import typing

import numpy as np

from pyfastgate.core.errors import DomainError, SchemeParseError
from pyfastgate.core.kick_scheme import COINCIDENCE_TOLERANCE, KickScheme, SymmetricScheme, coincidence_clusters
from pyfastgate.core.trap import LaserParams, TrapParams, convert_time, convert_time_inverse

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class SplitterStage:
    """
    ### Description:

    One unequal-path interferometer loop.

    ### Args:

    `delay_s`: extra path delay of the long arm (s), \\(\\geq 0\\)

    `ratio`: energy fraction sent to the long arm, in \\((0, 1)\\). Default: `0.5`.

    `flip`: whether long-arm components arrive with the opposite pair direction. Default: `False`.

    `long_path`: stages applied only to the long-arm components. Default: `()`.

    `short_path`: stages applied only to the short-arm components. Default: `()`.
    """
    delay_s: float
    ratio: float = 0.5
    flip: bool = False
    long_path: typing.Tuple['SplitterStage', ...] = ()
    short_path: typing.Tuple['SplitterStage', ...] = ()

    def __post_init__(self):
        if not self.delay_s >= 0:
            raise DomainError(f'Stage delay must be non-negative. A value of {self.delay_s} was entered.')
        if not 0 < self.ratio < 1:
            raise DomainError(f'Stage ratio must lie strictly between 0 and 1. A value of {self.ratio} was entered.')
        object.__setattr__(self, 'delay_s', float(self.delay_s))
        object.__setattr__(self, 'ratio', float(self.ratio))
        object.__setattr__(self, 'long_path', tuple(self.long_path))
        object.__setattr__(self, 'short_path', tuple(self.short_path))

    def shifted(self, delta_s: float, include_zero_delay: bool = False) -> 'SplitterStage':
        """Copy with `delta_s` added to this and every nested delay element (zero-delay loops only on request)."""
        shift = delta_s if (self.delay_s > 0 or include_zero_delay) else 0.0
        return SplitterStage(max(0.0, self.delay_s + shift), self.ratio, self.flip,
                             tuple(s.shifted(delta_s, include_zero_delay) for s in self.long_path),
                             tuple(s.shifted(delta_s, include_zero_delay) for s in self.short_path))

    def to_dict(self) -> dict:
        d = {'delay_s': self.delay_s, 'ratio': self.ratio, 'flip': self.flip}
        if self.long_path:
            d['long_path'] = [s.to_dict() for s in self.long_path]
        if self.short_path:
            d['short_path'] = [s.to_dict() for s in self.short_path]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> 'SplitterStage':
        if not isinstance(d, dict) or 'delay_s' not in d:
            raise SchemeParseError('A stage must be an object with at least a "delay_s" field')
        unknown = set(d) - {'delay_s', 'ratio', 'flip', 'long_path', 'short_path'}
        if unknown:
            raise SchemeParseError(f'Unknown stage field(s): {sorted(unknown)}')
        return cls(d['delay_s'], d.get('ratio', 0.5), bool(d.get('flip', False)),
                   tuple(cls.from_dict(s) for s in d.get('long_path', [])),
                   tuple(cls.from_dict(s) for s in d.get('short_path', [])))


@dataclasses.dataclass(frozen=True)
class SplitterNetwork:
    """
    ### Description:

    Cascade of `SplitterStage`s fed by the laser. `overhead_factor` multiplies the energy cost per pulse pair in
    the budget functions of `pyfastgate.optics.budget`; `direction` is the pair direction of a component that
    takes no flipping arm.
    """
    stages: typing.Tuple[SplitterStage, ...]
    overhead_factor: float = 2.0
    direction: int = 1

    def __post_init__(self):
        object.__setattr__(self, 'stages', tuple(self.stages))
        if len(self.stages) == 0:
            raise DomainError('A splitter network needs at least one stage.')
        if not self.overhead_factor >= 1:
            raise DomainError(f'The overhead factor must be at least 1. A value of {self.overhead_factor} was '
                              f'entered.')
        if self.direction not in (1, -1):
            raise DomainError(f'The network direction must be +1 or -1. A value of {self.direction} was entered.')

    @property
    def n_components(self) -> int:
        return len(propagate(self.stages, [(0.0, self.direction, 1.0)]))

    def shifted(self, delta_s: float, include_zero_delay: bool = False) -> 'SplitterNetwork':
        return SplitterNetwork(tuple(s.shifted(delta_s, include_zero_delay) for s in self.stages),
                               self.overhead_factor, self.direction)

    def to_dict(self) -> dict:
        return {'stages': [s.to_dict() for s in self.stages], 'overhead': self.overhead_factor,
                'direction': self.direction}

    @classmethod
    def from_dict(cls, d: dict) -> 'SplitterNetwork':
        if not isinstance(d, dict) or 'stages' not in d:
            raise SchemeParseError('A network document must be an object with a "stages" field')
        unknown = set(d) - {'stages', 'overhead', 'direction'}
        if unknown:
            raise SchemeParseError(f'Unknown network field(s): {sorted(unknown)}')
        return cls(tuple(SplitterStage.from_dict(s) for s in d['stages']), d.get('overhead', 2.0),
                   d.get('direction', 1))


@dataclasses.dataclass(frozen=True, eq=False)
class IncidentPulseTrain:
    """
    ### Description:

    Time-sorted pulse-pair components reaching the ions: time (s), pair direction, area (rad) and the index of the
    laser pulse each came from. An entry of area \\(A\\) is split into two counter-propagating pulses of area
    \\(A/\\sqrt{2}\\).
    """
    times_s: np.ndarray
    directions: np.ndarray
    areas: np.ndarray
    source_pulse: np.ndarray

    def __post_init__(self):
        if np.any(self.areas <= 0):
            raise DomainError('Every incident component needs a positive area.')
        if np.any(np.diff(self.times_s) < 0):
            raise DomainError('Incident components must be time-sorted.')

    @property
    def n_entries(self) -> int:
        return int(self.times_s.size)

    @property
    def energy(self) -> float:
        """Total energy in units of squared area."""
        return float(np.sum(self.areas ** 2))

    def to_rows(self) -> typing.List[tuple]:
        return [(float(t), int(d), float(a / np.pi), int(p))
                for t, d, a, p in zip(self.times_s, self.directions, self.areas, self.source_pulse)]


def propagate(stages: typing.Sequence[SplitterStage],
              components: typing.List[typing.Tuple[float, int, float]]) -> typing.List[typing.Tuple[float, int, float]]:
    """
    ### Description:

    Passes `(time_s, direction, energy_fraction)` components through a cascade of stages.

    ### Returns:

    The list of output components
    """
    for stage in stages:
        long_arm = [(t + stage.delay_s, -d if stage.flip else d, f * stage.ratio) for t, d, f in components]
        short_arm = [(t, d, f * (1 - stage.ratio)) for t, d, f in components]
        components = propagate(stage.long_path, long_arm) + propagate(stage.short_path, short_arm)
    return components


def compile_network(network: SplitterNetwork, laser: LaserParams, n_laser_pulses: int = 1,
                    area: float = None) -> IncidentPulseTrain:
    """
    ### Description:

    Compiles a splitter network into the pulse-pair components reaching the ions. Laser pulse \\(p\\) is emitted at
    \\(p / f_{rep}\\) with area \\(A\\) and the splitters are lossless, so a component carrying energy fraction
    \\(f\\) has area \\(A\\sqrt{f}\\).

    ### Args:

    `network`: the `pyfastgate.optics.splitter.SplitterNetwork`

    `laser`: the `pyfastgate.core.trap.LaserParams`

    `n_laser_pulses`: number of emitted pulses. Default: `1`.

    `area`: emitted pulse area \\(A\\) (rad). Default: `laser.max_area`.

    ### Returns:

    A time-sorted `pyfastgate.optics.splitter.IncidentPulseTrain`
    """
    if int(n_laser_pulses) != n_laser_pulses or n_laser_pulses < 1:
        raise DomainError(f'n_laser_pulses must be a positive integer. A value of {n_laser_pulses} was entered.')
    area = laser.max_area if area is None else float(area)
    leaves = propagate(network.stages, [(0.0, network.direction, 1.0)])
    times, directions, areas, sources = [], [], [], []
    for p in range(int(n_laser_pulses)):
        for t, d, f in leaves:
            times.append(p * laser.pulse_spacing + t)
            directions.append(d)
            areas.append(area * np.sqrt(f))
            sources.append(p)
    times = np.array(times)
    order = np.argsort(times, kind='stable')
    logger.debug(f'Compiled {len(leaves)} components per pulse for {n_laser_pulses} laser pulse(s)')
    return IncidentPulseTrain(times_s=times[order], directions=np.array(directions, dtype=int)[order],
                              areas=np.array(areas)[order], source_pulse=np.array(sources, dtype=int)[order])



def pulse_area_for_pi_pairs(network: SplitterNetwork) -> float:
    """Emitted area that makes every pulse of an equal-split network a \\(\\pi\\) pulse: \\(\\pi\\sqrt{2M}\\)."""
    return float(np.pi * np.sqrt(2 * network.n_components))


def train_to_scheme(train: IncidentPulseTrain, params: TrapParams,
                    tol: float = COINCIDENCE_TOLERANCE) -> KickScheme:
    """Kick scheme delivered by a pulse train, with time zero at the first component (trap periods)."""
    times = convert_time_inverse(train.times_s - train.times_s[0], params)
    return KickScheme.merged(train.directions, times, tol=tol)


@dataclasses.dataclass(frozen=True)
class RealizabilityReport:
    """Outcome of `check_realizability`. `ok` is true only when every list of failures is empty."""
    offset: float
    n_matched: int
    mismatched: typing.Tuple[tuple, ...]
    unmatched_groups: typing.Tuple[tuple, ...]
    unmatched_entries: typing.Tuple[float, ...]
    area_failures: typing.Tuple[int, ...]
    n_cancelled: int = 0

    @property
    def ok(self) -> bool:
        return not (self.mismatched or self.unmatched_groups or self.unmatched_entries or self.area_failures)

    def to_dict(self) -> dict:
        return {'ok': self.ok, 'offset': self.offset, 'n_matched': self.n_matched,
                'mismatched': [list(m) for m in self.mismatched],
                'unmatched_groups': [list(g) for g in self.unmatched_groups],
                'unmatched_entries': list(self.unmatched_entries), 'area_failures': list(self.area_failures),
                'n_cancelled': self.n_cancelled}


def check_realizability(scheme: KickScheme, train: IncidentPulseTrain, params: TrapParams,
                        time_tol: float = COINCIDENCE_TOLERANCE, area_rtol: float = 1e-6) -> RealizabilityReport:
    """
    ### Description:

    Checks that a pulse train delivers a kick scheme. Components within `time_tol` (trap periods) are clustered and
    each cluster carries the net signed count (forward minus backward components) of its pulse pairs. The train is
    shifted so that its first cluster with a nonzero net count coincides with the first group. Every group must
    meet a cluster at its time whose net count equals \\(z\\); clusters whose components cancel exactly need no
    group. Every component must carry two \\(\\pi\\) pulses, i.e. area \\(\\sqrt{2}\\pi\\) within `area_rtol`.

    ### Args:

    `scheme`: the `pyfastgate.core.kick_scheme.KickScheme`

    `train`: the `pyfastgate.optics.splitter.IncidentPulseTrain`

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    A `pyfastgate.optics.splitter.RealizabilityReport`
    """
    times = convert_time_inverse(train.times_s, params)
    clusters = coincidence_clusters(times, time_tol)
    nets = [int(np.sum(train.directions[cluster])) for cluster in clusters]
    first = next((ci for ci, net in enumerate(nets) if net != 0), 0)
    offset = float(scheme.t[0] - times[clusters[first][0]])
    times = times + offset

    mismatched, unmatched_groups, unmatched_entries = [], [], []
    n_matched, n_cancelled = 0, 0
    groups = list(scheme.groups)
    gi, ci = 0, 0
    while gi < len(groups) or ci < len(clusters):
        group = groups[gi] if gi < len(groups) else None
        cluster = clusters[ci] if ci < len(clusters) else None
        t_cluster = times[cluster[0]] if cluster is not None else np.inf
        if group is not None and abs(group.t - t_cluster) <= time_tol:
            directions = train.directions[cluster]
            if nets[ci] == group.z:
                n_matched += 1
            else:
                mismatched.append((group.t, group.z, int(np.sum(directions > 0)), int(np.sum(directions < 0))))
            gi += 1
            ci += 1
        elif group is not None and group.t < t_cluster:
            unmatched_groups.append((group.z, group.t))
            gi += 1
        else:
            if nets[ci] == 0:
                n_cancelled += len(cluster)
            else:
                unmatched_entries.append(float(t_cluster))
            ci += 1

    pulse_areas = train.areas / np.sqrt(2)
    area_failures = tuple(int(i) for i in np.flatnonzero(np.abs(pulse_areas - np.pi) > area_rtol * np.pi))
    report = RealizabilityReport(offset=offset, n_matched=n_matched, mismatched=tuple(mismatched),
                                 unmatched_groups=tuple(unmatched_groups), unmatched_entries=tuple(unmatched_entries),
                                 area_failures=area_failures, n_cancelled=n_cancelled)
    if not report.ok:
        logger.info(f'Scheme not realized: {len(mismatched)} mismatched, {len(unmatched_groups)} unmatched groups, '
                    f'{len(unmatched_entries)} unmatched entries, {len(area_failures)} area failures')
    return report


def direct_network(delays: typing.Sequence[float], params: TrapParams, overhead_factor: float = 2.0,
                   flip_last: bool = False) -> SplitterNetwork:
    """50/50 cascade with one loop per delay (trap periods). `flip_last` makes the last loop reverse direction."""
    delays = list(delays)
    stages = [SplitterStage(float(convert_time(d, params)), 0.5, flip_last and idx == len(delays) - 1)
              for idx, d in enumerate(delays)]
    return SplitterNetwork(tuple(stages), overhead_factor)


def equal_split(m: int, grouping_delay_s: float = 0.0) -> typing.Tuple[SplitterStage, ...]:
    """
    ### Description:

    Stages that split one component into `m` equal-energy components using loops of delay `grouping_delay_s`
    (nominally zero). Odd counts use unequal ratios, e.g. 2/3 : 1/3 followed by 1/2 : 1/2 for thirds.
    """
    if m <= 1:
        return ()
    long_count = m - m // 2
    return (SplitterStage(grouping_delay_s, long_count / m, False, equal_split(long_count, grouping_delay_s),
                          equal_split(m // 2, grouping_delay_s)),)


def symmetric_network(abc: typing.Sequence[int], n: int, taus: typing.Sequence[float], params: TrapParams,
                      negate: bool = False, overhead_factor: float = 2.0,
                      grouping_delay_s: float = 0.0) -> SplitterNetwork:
    """
    ### Description:

    Network delivering a symmetric scheme from one laser pulse. A first loop of delay \\(\\tau_1 - \\tau_2\\) and a
    second of delay \\(\\tau_2 - \\tau_3\\), both direction-flipping, divide the pulse into three branches with
    energies in the ratio \\(a : b : c\\). Each branch is split into \\(wn\\) equal components by grouping loops and
    closed by a mirror loop of delay \\(2\\tau_j\\) that reverses the pair direction.

    ### Args:

    `abc`: weights \\((a, b, c)\\)

    `n`: scale

    `taus`: \\((\\tau_1, \\tau_2, \\tau_3)\\) in trap periods

    `params`: the `pyfastgate.core.trap.TrapParams`

    `negate`: start with reversed pair direction (GZC sign pattern). Default: `False`.

    `overhead_factor`: budget overhead of the network. Default: `2.0`.

    `grouping_delay_s`: delay of the grouping loops (s). Default: `0.0`.

    ### Returns:

    A `pyfastgate.optics.splitter.SplitterNetwork`
    """
    a, b, c = (int(w) for w in abc)
    s = SymmetricScheme(a, b, c, n, *taus, negate)

    def tail(weight, tau):
        return equal_split(weight * s.n, grouping_delay_s) + \
               (SplitterStage(float(convert_time(2 * tau, params)), 0.5, True),)

    inner = SplitterStage(float(convert_time(s.tau2 - s.tau3, params)), c / (b + c), True,
                          long_path=tail(c, s.tau3), short_path=tail(b, s.tau2))
    outer = SplitterStage(float(convert_time(s.tau1 - s.tau2, params)), (b + c) / (a + b + c), True,
                          long_path=(inner,), short_path=tail(a, s.tau1))
    return SplitterNetwork((outer,), overhead_factor, -1 if negate else 1)


def network_of(family, values: typing.Sequence[float] = None, overhead_factor: float = 2.0,
               grouping_delay_s: float = 0.0) -> SplitterNetwork:
    """
    ### Description:

    Splitter network realizing a `pyfastgate.schemes.families.SchemeFamily` instance. Split families compile
    with `family.n_laser_pulses` laser pulses; symmetric families with one.
    """
    from pyfastgate.schemes.families import SPLIT_KINDS, SYMMETRIC_KINDS
    full = family.param_setup.full_vector(family.current_values if values is None else values)
    if family.kind in SPLIT_KINDS:
        return direct_network(full, family.trap, overhead_factor,
                              flip_last=family.kind == 'alternating_split' and family.alternation)
    if family.kind in SYMMETRIC_KINDS:
        if family.serial_pulses:
            raise DomainError('Serially delivered schemes have no splitter network')
        return symmetric_network(family.abc, family.n, full, family.trap, family.negate, overhead_factor,
                                 grouping_delay_s)
    raise DomainError(f'No splitter network is defined for the {family.kind} family')
