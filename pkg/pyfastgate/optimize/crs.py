"""
Derivative-free global search of scheme delays: controlled random search with local mutation, optionally polished
with a bounded Nelder-Mead simplex run from `scipy.optimize.minimize`, and repeated over independently seeded starts.
"""
import concurrent.futures
import dataclasses
import logging
import typing

import numpy as np
from scipy.optimize import minimize

from pyfastgate.core.conditions import COST_A, COST_B, ConditionReport, condition_error, cost_from_error
from pyfastgate.core.errors import DomainError, SchemeCancellationError, SchemeInvariantError
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.trap import LaserParams, TrapParams

logger = logging.getLogger(__name__)

FEASIBILITY_THRESHOLD = 1e-4


@dataclasses.dataclass(frozen=True)
class OptimizerConfig:
    """
    ### Description:

    Search hyperparameters.

    ### Args:

    `population_size`: CRS population. Default: `None`, meaning \\(10(d+1)\\) for \\(d\\) free variables.

    `max_evaluations`: objective evaluations per start, excluding the polish. Default: `20000`.

    `bounds`: per-variable `(low, high)` pairs. Default: `None`, meaning the bounds of the family's `Param`s.

    `seed`: 64-bit root seed. Default: `0`.

    `stop_tolerance`: stop a start once the population's cost spread is below this fraction of the best cost.
    Default: `1e-10`.

    `polish`: refine the best point of every start with a bounded Nelder-Mead run. Default: `True`.

    `n_starts`: number of independently seeded starts. Default: `16`.

    `workers`: processes used for the starts. Default: `1`.

    `feasibility_threshold`: largest error \\(E\\) of a solution. Default: `1e-4`.

    `penalty`: cost of a point that breaks the family's ordering, added to the size of the violation.
    Default: `1e6`.

    `cost_a`, `cost_b`: the cost constants \\(A\\) and \\(B\\). Defaults: `10`, `100`.
    """
    population_size: int = None
    max_evaluations: int = 20000
    bounds: typing.Tuple[typing.Tuple[float, float], ...] = None
    seed: int = 0
    stop_tolerance: float = 1e-10
    polish: bool = True
    n_starts: int = 16
    workers: int = 1
    feasibility_threshold: float = FEASIBILITY_THRESHOLD
    penalty: float = 1e6
    cost_a: float = COST_A
    cost_b: float = COST_B

    def __post_init__(self):
        for label in ('max_evaluations', 'n_starts', 'workers'):
            value = getattr(self, label)
            if int(value) != value or value < 1:
                raise DomainError(f'{label} must be a positive integer. A value of {value} was entered.')
        if int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise DomainError(f'The seed must be a 64-bit non-negative integer. A value of {self.seed} was entered.')
        if not self.stop_tolerance >= 0:
            raise DomainError(f'stop_tolerance must be non-negative. A value of {self.stop_tolerance} was entered.')
        if not self.penalty > 0:
            raise DomainError(f'The penalty must be positive. A value of {self.penalty} was entered.')
        if self.bounds is not None:
            object.__setattr__(self, 'bounds', tuple(tuple(float(v) for v in pair) for pair in self.bounds))

    def resolved_bounds(self, default_bounds: np.ndarray) -> np.ndarray:
        """Bounds array of shape `(d, 2)`; raises `DomainError` unless every pair is finite with low < high."""
        bounds = np.asarray(default_bounds if self.bounds is None else self.bounds, dtype=float)
        d = np.asarray(default_bounds).shape[0]
        if bounds.shape != (d, 2):
            raise DomainError(f'Expected {d} (low, high) bound pairs; got an array of shape {bounds.shape}')
        if not np.all(np.isfinite(bounds)) or np.any(bounds[:, 0] >= bounds[:, 1]):
            raise DomainError(f'Bounds must be finite with low < high. Values of {bounds.tolist()} were entered.')
        return bounds

    def resolved_population(self, d: int) -> int:
        size = 10 * (d + 1) if self.population_size is None else int(self.population_size)
        if size < d + 2:
            raise DomainError(f'The population must hold at least d + 2 = {d + 2} points. A value of {size} was '
                              f'entered.')
        return size

    def replace(self, **changes) -> 'OptimizerConfig':
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d['bounds'] = None if self.bounds is None else [list(pair) for pair in self.bounds]
        return d


@dataclasses.dataclass(frozen=True, eq=False)
class CRSResult:
    x: np.ndarray
    fun: float
    n_evaluations: int
    history: np.ndarray
    converged: bool


def crs2_minimize(func: typing.Callable[[np.ndarray], float], bounds: np.ndarray, rng: np.random.Generator,
                  population_size: int = None, max_evaluations: int = 20000,
                  stop_tolerance: float = 1e-10) -> CRSResult:
    """
    ### Description:

    Controlled random search with local mutation. The population is drawn uniformly from the box. Each iteration
    reflects a random point through the centroid of the best point and \\(d-1\\) further random points; when the
    reflection leaves the box or fails to beat the worst point, a mutation point
    \\(y = w \\circ x_{best} + (1-w) \\circ x_{trial}\\) with \\(w \\sim U[0,1]^d\\) is tried instead. An improving point
    replaces the worst.

    ### Args:

    `func`: objective taking a 1-D `np.ndarray`

    `bounds`: array of shape `(d, 2)`

    `rng`: a `np.random.Generator`

    `population_size`: population. Default: \\(10(d+1)\\).

    `max_evaluations`: evaluation budget. Default: `20000`.

    `stop_tolerance`: relative spread of the population costs at which to stop. Default: `1e-10`.

    ### Returns:

    A `CRSResult` whose `history` is the best cost after every iteration (non-increasing)
    """
    low, high = bounds[:, 0], bounds[:, 1]
    d = bounds.shape[0]
    size = 10 * (d + 1) if population_size is None else population_size
    population = low + rng.random((size, d)) * (high - low)
    values = np.array([func(x) for x in population], dtype=float)
    n_evaluations = size
    history = [float(values.min())]
    converged = False

    while n_evaluations < max_evaluations:
        best, worst = int(np.argmin(values)), int(np.argmax(values))
        if values[worst] - values[best] <= stop_tolerance * max(1.0, abs(values[best])):
            converged = True
            break
        others = rng.choice(np.delete(np.arange(size), best), size=d, replace=False)
        centroid = np.mean(np.vstack((population[best], population[others[:-1]])), axis=0)
        trial = 2 * centroid - population[others[-1]]

        candidate, f_candidate = None, np.inf
        if np.all(trial >= low) and np.all(trial <= high):
            f_candidate = func(trial)
            n_evaluations += 1
            candidate = trial
        if f_candidate >= values[worst] and n_evaluations < max_evaluations:
            w = rng.random(d)
            candidate = w * population[best] + (1 - w) * np.clip(trial, low, high)
            f_candidate = func(candidate)
            n_evaluations += 1
        if f_candidate < values[worst]:
            population[worst] = candidate
            values[worst] = f_candidate
        history.append(float(values.min()))

    best = int(np.argmin(values))
    return CRSResult(x=population[best].copy(), fun=float(values[best]), n_evaluations=n_evaluations,
                     history=np.array(history), converged=converged)


class SchemeObjective:

    def __init__(self, family, params: TrapParams, config: OptimizerConfig):
        """
        ### Description:

        Cost of a family instance as a function of its free values, for use as an optimizer objective. Values that
        break the family's ordering, or that produce an invalid scheme, cost `config.penalty` plus the size of the
        violation. Every evaluation that meets the feasibility threshold is tracked so that the best feasible point
        survives even when an infeasible point has a lower cost.

        ### Args:

        `family`: a `pyfastgate.schemes.families.SchemeFamily`

        `params`: the `pyfastgate.core.trap.TrapParams`

        `config`: the `pyfastgate.optimize.crs.OptimizerConfig`
        """
        self.family = family
        self.params = params
        self.config = config
        self.n_evaluations = 0
        self.best_feasible_x = None
        self.best_feasible_cost = np.inf

    def __call__(self, values: np.ndarray) -> float:
        self.n_evaluations += 1
        violation = self.family.ordering_violation(values)
        if violation > 0:
            return self.config.penalty + violation
        try:
            scheme = self.family.generate(values)
        except (SchemeInvariantError, SchemeCancellationError):
            return self.config.penalty
        report = condition_error(scheme, self.params)
        j = cost_from_error(report.e_total, report.gate_time, self.config.cost_a, self.config.cost_b)
        if report.e_total <= self.config.feasibility_threshold and j < self.best_feasible_cost:
            self.best_feasible_cost = j
            self.best_feasible_x = np.array(values, dtype=float)
        return j


@dataclasses.dataclass(frozen=True, eq=False)
class StartResult:
    x: np.ndarray
    cost: float
    feasible_x: np.ndarray or None
    feasible_cost: float
    n_evaluations: int
    history: np.ndarray


def _run_start(family, params: TrapParams, config: OptimizerConfig, bounds: np.ndarray,
               seed_sequence: np.random.SeedSequence) -> StartResult:
    rng = np.random.default_rng(seed_sequence)
    objective = SchemeObjective(family, params, config)
    crs = crs2_minimize(objective, bounds, rng, config.resolved_population(bounds.shape[0]),
                        config.max_evaluations, config.stop_tolerance)
    x, fun, history = crs.x, crs.fun, list(crs.history)
    if config.polish:
        res = minimize(objective, x, method='Nelder-Mead', bounds=[tuple(b) for b in bounds],
                       options={'xatol': 1e-10, 'fatol': 1e-14, 'maxfev': 200 * bounds.shape[0]})
        if res.fun < fun:
            x, fun = np.clip(res.x, bounds[:, 0], bounds[:, 1]), float(res.fun)
            history.append(fun)
    logger.debug(f'Start finished after {objective.n_evaluations} evaluations with cost {fun:.6g} '
                 f'(converged: {crs.converged})')
    return StartResult(x=x, cost=fun, feasible_x=objective.best_feasible_x, feasible_cost=objective.best_feasible_cost,
                       n_evaluations=objective.n_evaluations, history=np.array(history))


@dataclasses.dataclass(frozen=True, eq=False)
class OptimizationResult:
    """
    ### Description:

    Outcome of `optimize`. When no evaluated point met the feasibility threshold `feasible` is `False` and the
    fields describe the lowest-cost point found (`scheme` and `report` are `None` if that point was penalized).
    `history` is the best cost of the winning start after every iteration.
    """
    delays: np.ndarray
    scheme: KickScheme or None
    report: ConditionReport or None
    cost: float
    n_evaluations: int
    seed: int
    feasible: bool
    history: np.ndarray
    family: typing.Any = None

    def to_dict(self) -> dict:
        return {
            'family': None if self.family is None else self.family.to_dict(),
            'seed': self.seed,
            'evaluations': self.n_evaluations,
            'feasible': self.feasible,
            'best_point': [float(v) for v in self.delays],
            'gate_time': None if self.report is None else self.report.gate_time,
            'error': None if self.report is None else self.report.e_total,
            'cost': self.cost,
            'scheme': None if self.scheme is None else self.scheme.to_dict(),
            'report': None if self.report is None else self.report.to_dict(),
        }


def optimize(family, params: TrapParams = None, laser: LaserParams = None,
             config: OptimizerConfig = OptimizerConfig()) -> OptimizationResult:
    """
    ### Description:

    Searches the free variables of a scheme family for the lowest cost \\(J = T_G + A e^{BE}\\) among points with
    \\(E\\) at most the feasibility threshold. `config.n_starts` searches are seeded from children of
    `np.random.SeedSequence(config.seed)`, so the result depends only on the seed, the configuration and the inputs.

    ### Args:

    `family`: a `pyfastgate.schemes.families.SchemeFamily`

    `params`: the `pyfastgate.core.trap.TrapParams`. Default: `family.trap`.

    `laser`: optional `pyfastgate.core.trap.LaserParams` whose repetition rate replaces the family's

    `config`: the `pyfastgate.optimize.crs.OptimizerConfig`

    ### Returns:

    A `pyfastgate.optimize.crs.OptimizationResult`
    """
    params = family.trap if params is None else params
    family = family.configured(trap=params, rep_rate=None if laser is None else laser.rep_rate)
    if family.n_params < 1:
        raise DomainError(f'The {family.kind} family has no free variables to optimize')
    bounds = config.resolved_bounds(family.search_bounds)
    config.resolved_population(bounds.shape[0])
    children = np.random.SeedSequence(config.seed).spawn(config.n_starts)
    logger.info(f'Optimizing {family.kind} ({family.n_params} variables, {config.n_starts} starts, '
                f'seed {config.seed})')

    if config.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.workers) as executor:
            starts = list(executor.map(_run_start, *zip(*[(family, params, config, bounds, child)
                                                          for child in children])))
    else:
        starts = [_run_start(family, params, config, bounds, child) for child in children]

    n_evaluations = sum(s.n_evaluations for s in starts)
    feasible_starts = [s for s in starts if s.feasible_x is not None]
    if feasible_starts:
        winner = min(feasible_starts, key=lambda s: s.feasible_cost)
        x = winner.feasible_x
    else:
        winner = min(starts, key=lambda s: s.cost)
        x = winner.x
        logger.warning(f'No evaluated point of {family.kind} reached E <= {config.feasibility_threshold}')

    try:
        scheme = family.generate(x)
        report = condition_error(scheme, params)
        j = cost_from_error(report.e_total, report.gate_time, config.cost_a, config.cost_b)
    except (SchemeInvariantError, SchemeCancellationError):
        scheme, report, j = None, None, winner.cost
    result = OptimizationResult(delays=np.array(x), scheme=scheme, report=report, cost=j,
                                n_evaluations=n_evaluations, seed=config.seed, feasible=bool(feasible_starts),
                                history=np.minimum.accumulate(winner.history), family=family)
    if report is not None:
        logger.info(f'Best point {np.round(x, 6).tolist()}: T_G = {report.gate_time:.6f} T_P, '
                    f'E = {report.e_total:.3e}, J = {j:.6f}')
    return result
