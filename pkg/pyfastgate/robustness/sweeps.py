"""
Sweeps of systematic errors (delay-line timing, pulse area, beam angle) with the largest error that keeps a scheme
within its error budget.
"""
import dataclasses
import logging
import typing

import numpy as np

from pyfastgate.core.conditions import condition_error
from pyfastgate.core.errors import DomainError, InfeasibleError
from pyfastgate.core.kick_scheme import KickScheme, as_kick_scheme
from pyfastgate.core.trap import LaserParams, TrapParams, mirror_displacement
from pyfastgate.optics.splitter import (SplitterNetwork, check_realizability, compile_network,
                                        pulse_area_for_pi_pairs, train_to_scheme)
from pyfastgate.oracle.fidelity import process_fidelity, worst_case_fidelity
from pyfastgate.oracle.fock import OracleConfig, evolve_scheme

logger = logging.getLogger(__name__)

SWEEP_KINDS = ('timing', 'area', 'angle')
ANGLE_MODELS = ('transverse_accumulation', 'axial_projection')
ERROR_BUDGET = 1e-4
BISECTION_ACCURACY = 0.01


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """
    ### Description:

    Sweep of one systematic error over `steps` evenly spaced values in `[low, high]`, judged against the error
    budget `threshold`.
    """
    kind: str
    low: float
    high: float
    steps: int = 21
    threshold: float = ERROR_BUDGET

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise DomainError(f'Unknown sweep kind {self.kind!r}. Must be one of {SWEEP_KINDS}.')
        if not self.low < self.high:
            raise DomainError(f'A sweep needs low < high. Values of {self.low} and {self.high} were entered.')
        if int(self.steps) != self.steps or self.steps < 3:
            raise DomainError(f'A sweep needs at least 3 steps. A value of {self.steps} was entered.')
        if not self.threshold > 0:
            raise DomainError(f'The error budget must be positive. A value of {self.threshold} was entered.')

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.low, self.high, int(self.steps))


@dataclasses.dataclass(frozen=True, eq=False)
class SweepResult:
    """
    ### Description:

    Table of a sweep. `rows` follow `columns`; the first column is the swept value and the second the error
    compared with `budget`. `threshold` is the smallest, over both signs of the swept value, of the largest
    magnitude that stays within budget; `exceeds_range` is set when no swept value on some side failed.
    `first_nonmonotonic` is the row index where the error first decreases while moving away from zero.
    """
    kind: str
    columns: typing.Tuple[str, ...]
    rows: typing.Tuple[tuple, ...]
    budget: float
    baseline_error: float
    threshold: float or None
    side_thresholds: typing.Dict[str, float]
    exceeds_range: bool
    first_nonmonotonic: int or None
    model: str = None
    extra: typing.Dict[str, float] = dataclasses.field(default_factory=dict)

    @property
    def monotone(self) -> bool:
        return self.first_nonmonotonic is None

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'model': self.model, 'budget': self.budget, 'baseline_error': self.baseline_error,
                'threshold': self.threshold, 'side_thresholds': self.side_thresholds,
                'exceeds_range': self.exceeds_range, 'monotone': self.monotone,
                'first_nonmonotonic': self.first_nonmonotonic, **self.extra}


def _as_spec(kind: str, sweep_range, budget: float) -> SweepSpec:
    if isinstance(sweep_range, SweepSpec):
        return sweep_range
    low, high, steps = sweep_range
    return SweepSpec(kind, low, high, steps, budget)


def _first_nonmonotonic(values: np.ndarray, errors: np.ndarray) -> int or None:
    """Index of the first point whose error falls below that of its neighbour closer to zero."""
    for sign in (1, -1):
        idx = np.flatnonzero(sign * values >= 0)
        idx = idx[np.argsort(sign * values[idx])]
        e = errors[idx]
        if e.size < 2:
            continue
        drops = np.flatnonzero(np.diff(e) < -1e-12 * max(1.0, np.max(np.abs(e))))
        if drops.size:
            return int(idx[drops[0] + 1])
    return None


def _bisect_threshold(error_at: typing.Callable[[float], float], passing: float, failing: float,
                      budget: float) -> float:
    """Largest magnitude between a passing and a failing value, to 1% relative accuracy."""
    while abs(failing - passing) > BISECTION_ACCURACY * abs(failing):
        middle = (passing + failing) / 2
        if error_at(middle) <= budget:
            passing = middle
        else:
            failing = middle
    return abs(passing)


def _side_thresholds(values: np.ndarray, errors: np.ndarray, budget: float,
                     refine: typing.Callable[[float, float], float]) -> typing.Tuple[dict, bool]:
    thresholds, exceeds = {}, False
    for side, sign in (('positive', 1), ('negative', -1)):
        mask = sign * values > 0
        if not np.any(mask):
            continue
        order = np.argsort(sign * values[mask])
        side_values, side_errors = values[mask][order], errors[mask][order]
        failing = np.flatnonzero(side_errors > budget)
        if failing.size == 0:
            thresholds[side] = float(abs(side_values[-1]))
            exceeds = True
            continue
        first = failing[0]
        passing = side_values[first - 1] if first > 0 else 0.0
        thresholds[side] = float(refine(passing, side_values[first]))
    return thresholds, exceeds


def timing_sweep(network: SplitterNetwork, family, delta_range, params: TrapParams = None,
                 laser: LaserParams = LaserParams(), values: typing.Sequence[float] = None,
                 budget: float = ERROR_BUDGET, include_grouping: bool = False) -> SweepResult:
    """
    ### Description:

    Adds a common systematic delay \\(\\delta\\) (seconds) to every delay element of a splitter network, as from a
    mirror placed too far (\\(\\delta > 0\\)) or too close, recompiles the pulse train and evaluates the condition error
    of the kicks it delivers. Zero-delay grouping loops are shifted only with `include_grouping=True`. The threshold
    is refined by bisection after the sweep and converted to a mirror displacement \\(c\\,\\delta\\).

    ### Args:

    `network`: the `pyfastgate.optics.splitter.SplitterNetwork`

    `family`: the `pyfastgate.schemes.families.SchemeFamily` the network realizes

    `delta_range`: a `SweepSpec` of kind `"timing"` or a `(low, high, steps)` tuple in seconds

    `params`: the `pyfastgate.core.trap.TrapParams`. Default: `family.trap`.

    `laser`: the `pyfastgate.core.trap.LaserParams`

    `values`: free values of the family instance. Default: the family's current values.

    `budget`: error budget. Default: `1e-4`.

    `include_grouping`: also shift zero-delay loops. Default: `False`.

    ### Returns:

    A `pyfastgate.robustness.sweeps.SweepResult` with columns `(delta_s, error, pass)`
    """
    params = family.trap if params is None else params
    spec = _as_spec('timing', delta_range, budget)
    n_pulses = family.n_laser_pulses if family.kind in ('direct_split', 'alternating_split') else 1
    area = pulse_area_for_pi_pairs(network)
    baseline_train = compile_network(network, laser, n_pulses, area)
    report = check_realizability(family.configured(trap=params, rep_rate=laser.rep_rate).generate(values),
                                 baseline_train, params)
    if not report.ok:
        raise DomainError(f'The network does not realize the family instance: {report.to_dict()}')

    def error_at(delta: float) -> float:
        shifted = network.shifted(delta, include_grouping)
        train = compile_network(shifted, laser, n_pulses, area)
        return condition_error(train_to_scheme(train, params), params).e_total

    baseline = error_at(0.0)
    if baseline > spec.threshold:
        raise InfeasibleError(f'The unshifted scheme has E = {baseline:.3e}, above the budget {spec.threshold}')
    deltas = spec.values
    errors = np.array([error_at(d) for d in deltas])
    sides, exceeds = _side_thresholds(deltas, errors, spec.threshold,
                                      lambda p, f: _bisect_threshold(error_at, p, f, spec.threshold))
    threshold = min(sides.values()) if sides else None
    rows = tuple((float(d), float(e), bool(e <= spec.threshold)) for d, e in zip(deltas, errors))
    extra = {} if threshold is None else {'mirror_displacement_m': float(mirror_displacement(threshold))}
    logger.info(f'Timing threshold {threshold} s (baseline E = {baseline:.3e})')
    return SweepResult(kind='timing', columns=('delta_s', 'error', 'pass'), rows=rows, budget=spec.threshold,
                       baseline_error=baseline, threshold=threshold, side_thresholds=sides, exceeds_range=exceeds,
                       first_nonmonotonic=_first_nonmonotonic(deltas, errors), extra=extra)


def area_sweep(scheme: KickScheme, epsilon_range, config: OracleConfig, params: TrapParams,
               budget: float = ERROR_BUDGET) -> SweepResult:
    """
    ### Description:

    Worst-case and process fidelities from the Fock-space simulation for pulse areas \\(\\pi/2 + \\epsilon\\). The
    threshold on each side is where \\(1 - F_W\\) crosses the budget, interpolated linearly between sweep points.

    ### Returns:

    A `pyfastgate.robustness.sweeps.SweepResult` with columns `(epsilon, infidelity, f_w, f_p, pass)`
    """
    spec = _as_spec('area', epsilon_range, budget)
    epsilons = spec.values
    table = []
    for epsilon in np.concatenate(([0.0], epsilons)):
        u = evolve_scheme(scheme, config.replace(epsilon=float(epsilon)), params)
        f_w = worst_case_fidelity(u, config).fidelity
        f_p = process_fidelity(u, config, params)
        table.append((float(epsilon), 1 - f_w, f_w, f_p))
        logger.debug(f'epsilon = {epsilon:.3e}: F_W = {f_w:.8f}, F_P = {f_p:.8f}')
    baseline = table[0][1]
    table = table[1:]
    errors = np.array([row[1] for row in table])

    def interpolate(passing, failing):
        e_pass = baseline if passing == 0 else errors[np.flatnonzero(epsilons == passing)[0]]
        e_fail = errors[np.flatnonzero(epsilons == failing)[0]]
        return abs(passing + (spec.threshold - e_pass) / (e_fail - e_pass) * (failing - passing))

    sides, exceeds = _side_thresholds(epsilons, errors, spec.threshold, interpolate)
    rows = tuple((e, inf, f_w, f_p, bool(inf <= spec.threshold)) for e, inf, f_w, f_p in table)
    return SweepResult(kind='area', columns=('epsilon', 'infidelity', 'f_w', 'f_p', 'pass'), rows=rows,
                       budget=spec.threshold, baseline_error=baseline, threshold=min(sides.values()) if sides else None,
                       side_thresholds=sides, exceeds_range=exceeds,
                       first_nonmonotonic=_first_nonmonotonic(epsilons, errors))


def angle_error(scheme: KickScheme, phi_a: float, phi_b: float, params: TrapParams,
                model: str = 'transverse_accumulation', eta_t: float = None) -> float:
    """
    ### Description:

    Condition error of a scheme whose two beam directions are tilted by \\(\\phi_A\\) and \\(\\phi_B\\) from the trap
    axis. The axial Lamb-Dicke parameter scales by \\((\\cos\\phi_A + \\cos\\phi_B)/2\\). Under
    `"transverse_accumulation"` every pair also pushes a transverse spectator mode by
    \\(|z_k|(\\sin\\phi_A + \\sin\\phi_B)/2\\); the accumulated push \\(C_t\\) gives the overlap
    \\(C = e^{-|\\eta_t C_t|^2/2}\\) and the extra error \\((5 - C^4 - 4C)/8\\). `"axial_projection"` keeps only the
    axial scaling.

    ### Args:

    `eta_t`: transverse Lamb-Dicke parameter. Default: `params.eta`.
    """
    if model not in ANGLE_MODELS:
        raise DomainError(f'Unknown angle model {model!r}. Must be one of {ANGLE_MODELS}.')
    scheme = as_kick_scheme(scheme)
    scale = (np.cos(phi_a) + np.cos(phi_b)) / 2
    if not scale > 0:
        raise DomainError(f'Beam angles {phi_a}, {phi_b} leave no axial momentum transfer')
    error = condition_error(scheme, params.replace(eta=params.eta * scale)).e_total
    if model == 'transverse_accumulation':
        eta_t = params.eta if eta_t is None else eta_t
        c_t = np.sum(np.abs(scheme.z)) * (np.sin(phi_a) + np.sin(phi_b)) / 2
        overlap = np.exp(-0.5 * (eta_t * c_t) ** 2)
        error += (5 - overlap ** 4 - 4 * overlap) / 8
    return float(error)


def angle_sweep(scheme: KickScheme, phi_range, params: TrapParams, model: str = 'transverse_accumulation',
                eta_t: float = None, phi_b: float = None, budget: float = ERROR_BUDGET) -> SweepResult:
    """
    ### Description:

    Sweeps a common beam tilt \\(\\phi_A = \\phi_B = \\phi\\) (radians), or only \\(\\phi_A\\) when `phi_b` is held
    fixed, and evaluates `angle_error`. The threshold is refined by bisection.

    ### Returns:

    A `pyfastgate.robustness.sweeps.SweepResult` with columns `(phi, error, pass)`
    """
    if model not in ANGLE_MODELS:
        raise DomainError(f'Unknown angle model {model!r}. Must be one of {ANGLE_MODELS}.')
    spec = _as_spec('angle', phi_range, budget)

    def error_at(phi: float) -> float:
        return angle_error(scheme, phi, phi if phi_b is None else phi_b, params, model, eta_t)

    baseline = error_at(0.0)
    if baseline > spec.threshold:
        raise InfeasibleError(f'The untilted scheme has E = {baseline:.3e}, above the budget {spec.threshold}')
    phis = spec.values
    errors = np.array([error_at(phi) for phi in phis])
    sides, exceeds = _side_thresholds(phis, errors, spec.threshold,
                                      lambda p, f: _bisect_threshold(error_at, p, f, spec.threshold))
    threshold = min(sides.values()) if sides else None
    rows = tuple((float(p), float(e), bool(e <= spec.threshold)) for p, e in zip(phis, errors))
    logger.info(f'Angle threshold ({model}): {threshold} rad')
    return SweepResult(kind='angle', columns=('phi', 'error', 'pass'), rows=rows, budget=spec.threshold,
                       baseline_error=baseline, threshold=threshold, side_thresholds=sides, exceeds_range=exceeds,
                       first_nonmonotonic=_first_nonmonotonic(phis, errors), model=model)
