"""Scaling studies over family sizes, power-law fits of gate time against pulse-pair count, and delay structure."""
import dataclasses
import logging
import typing

import numpy as np

from pyfastgate.core.errors import DomainError, InfeasibleError
from pyfastgate.core.trap import LaserParams, TrapParams
from pyfastgate.optimize.crs import OptimizerConfig, optimize

logger = logging.getLogger(__name__)

HALF_PERIOD = 0.5
STRETCH_HALF_PERIOD = 1 / (2 * np.sqrt(3))
STRUCTURE_CONSTANTS = {
    '0.5': HALF_PERIOD,
    '1/(2*sqrt(3))': STRETCH_HALF_PERIOD,
    '0.5+1/(2*sqrt(3))': HALF_PERIOD + STRETCH_HALF_PERIOD,
}


@dataclasses.dataclass(frozen=True)
class FitResult:
    """Power law \\(T_G = \\mathrm{prefactor} \\cdot N^{\\mathrm{exponent}}\\); `residual` is the RMS of the log-log fit."""
    exponent: float
    prefactor: float
    residual: float

    def __post_init__(self):
        if not self.residual >= 0:
            raise DomainError(f'A fit residual must be non-negative. A value of {self.residual} was entered.')

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def fit_power_law(n_pairs: typing.Sequence[float], gate_times: typing.Sequence[float]) -> FitResult:
    """
    ### Description:

    Least-squares fit of \\(\\log T_G\\) against \\(\\log N\\) with `np.polyfit`.

    ### Args:

    `n_pairs`: pulse-pair counts \\(N\\)

    `gate_times`: gate times \\(T_G\\) (trap periods)

    ### Returns:

    A `pyfastgate.optimize.study.FitResult`
    """
    n_pairs = np.asarray(n_pairs, dtype=float)
    gate_times = np.asarray(gate_times, dtype=float)
    if n_pairs.shape != gate_times.shape or n_pairs.size < 2:
        raise DomainError(f'A power-law fit needs at least two matching points; got {n_pairs.size} and '
                          f'{gate_times.size}')
    if np.any(n_pairs <= 0) or np.any(gate_times <= 0):
        raise DomainError('Pulse-pair counts and gate times must be positive for a log-log fit')
    log_n, log_t = np.log(n_pairs), np.log(gate_times)
    slope, intercept = np.polyfit(log_n, log_t, 1)
    residual = float(np.sqrt(np.mean((log_t - (slope * log_n + intercept)) ** 2)))
    return FitResult(exponent=float(slope), prefactor=float(np.exp(intercept)), residual=residual)


@dataclasses.dataclass(frozen=True)
class ScalingRow:
    n: int
    n_pairs: int
    gate_time: float
    error: float
    cost: float
    seed: int
    feasible: bool


@dataclasses.dataclass(frozen=True)
class ScalingStudy:
    rows: typing.Tuple[ScalingRow, ...]
    fit: FitResult

    def to_rows(self) -> typing.List[tuple]:
        return [(r.n, r.n_pairs, r.gate_time, r.error, r.cost, r.seed, r.feasible) for r in self.rows]


def scaling_study(family_template, n_values: typing.Sequence[int], params: TrapParams = None,
                  laser: LaserParams = None, config: OptimizerConfig = OptimizerConfig()) -> ScalingStudy:
    """
    ### Description:

    Optimizes the family at every size in `n_values` (see `SchemeFamily.with_scale`) and fits the resulting gate
    times against pulse-pair counts. Sizes whose best point misses the feasibility threshold are kept in the table
    with `feasible=False` and left out of the fit.

    ### Args:

    `family_template`: a `pyfastgate.schemes.families.SchemeFamily`

    `n_values`: at least three sizes

    `params`, `laser`, `config`: as for `pyfastgate.optimize.crs.optimize`

    ### Returns:

    A `pyfastgate.optimize.study.ScalingStudy`
    """
    n_values = [int(n) for n in n_values]
    if len(n_values) < 3:
        raise DomainError(f'A scaling study needs at least three sizes. {len(n_values)} were given.')
    rows = []
    for n in n_values:
        result = optimize(family_template.with_scale(n), params, laser, config)
        if result.report is None:
            rows.append(ScalingRow(n, family_template.with_scale(n).expected_pairs, np.nan, np.nan, result.cost,
                                   config.seed, False))
            continue
        feasible = result.feasible and result.report.e_total <= config.feasibility_threshold
        rows.append(ScalingRow(n, result.scheme.n_pairs, result.report.gate_time, result.report.e_total,
                               result.cost, config.seed, feasible))
        logger.info(f'n = {n}: {result.scheme.n_pairs} pairs, T_G = {result.report.gate_time:.4f} T_P '
                    f'(feasible: {feasible})')
    feasible_rows = [r for r in rows if r.feasible]
    if len(feasible_rows) < 2:
        raise InfeasibleError(f'Only {len(feasible_rows)} of {len(rows)} sizes reached the error budget; '
                              f'no power law can be fitted')
    fit = fit_power_law([r.n_pairs for r in feasible_rows], [r.gate_time for r in feasible_rows])
    return ScalingStudy(rows=tuple(rows), fit=fit)


@dataclasses.dataclass(frozen=True)
class DelayMatch:
    """Integer multiples of the structure constants lying within tolerance of a delay."""
    delay: float
    matches: typing.Tuple[typing.Tuple[str, int], ...]

    @property
    def matched(self) -> bool:
        return len(self.matches) > 0


def delay_structure_report(delays: typing.Sequence[float], tol: float = 1e-3) -> typing.List[DelayMatch]:
    """
    ### Description:

    Flags delays (trap periods) lying within `tol` of a positive integer multiple of half a centre-of-mass period,
    half a stretch period \\(1/(2\\sqrt{3})\\) or their sum.

    ### Returns:

    One `pyfastgate.optimize.study.DelayMatch` per delay
    """
    report = []
    for delay in np.asarray(delays, dtype=float):
        matches = []
        for label, constant in STRUCTURE_CONSTANTS.items():
            k = max(1, int(np.round(delay / constant)))
            if abs(delay - k * constant) <= tol:
                matches.append((label, k))
        report.append(DelayMatch(float(delay), tuple(matches)))
    return report
