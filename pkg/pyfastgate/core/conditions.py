"""
Closed-form control conditions of a kick scheme: the accumulated two-qubit phase, the closure residuals of both
motional modes, the resulting error estimate, the gate time and the optimization cost.
"""
import copy
import dataclasses
import logging
import typing

import numpy as np

from pyfastgate.core.errors import DomainError, SchemeCancellationError
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.trap import TrapParams

logger = logging.getLogger(__name__)

TARGET_PHASE = np.pi / 4
COST_A = 10.0
COST_B = 100.0
SQRT3 = np.sqrt(3)


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    """
    ### Description:

    Result of `pyfastgate.core.conditions.condition_error`.

    ### Args:

    `theta`: accumulated two-qubit phase \\(\\Theta\\) (rad)

    `c_c`: complex centre-of-mass closure residual \\(C_c\\)

    `c_r`: complex stretch closure residual \\(C_r\\)

    `e_motional`: motional error \\(E_m\\)

    `e_phase`: phase error \\(E_p\\)

    `e_total`: \\(E = E_m + E_p\\)

    `gate_time`: \\(T_G\\) (trap periods)
    """
    theta: float
    c_c: complex
    c_r: complex
    e_motional: float
    e_phase: float
    e_total: float
    gate_time: float

    def to_dict(self) -> dict:
        return {
            'theta': self.theta,
            'c_c': [self.c_c.real, self.c_c.imag],
            'c_r': [self.c_r.real, self.c_r.imag],
            'e_motional': self.e_motional,
            'e_phase': self.e_phase,
            'e_total': self.e_total,
            'gate_time': self.gate_time,
        }


def _phase_kernel(dt: np.ndarray) -> np.ndarray:
    phase = 2 * np.pi * dt
    return np.sin(phase) - np.sin(SQRT3 * phase) / SQRT3


def phase_theta(scheme: KickScheme, params: TrapParams) -> float:
    """
    ### Description:

    Computes the accumulated two-qubit phase
    $$\\Theta = 4\\eta^2 \\sum_{m>k} z_m z_k \\left[\\sin(\\nu \\delta t_{mk})
    - \\frac{\\sin(\\sqrt{3}\\nu\\delta t_{mk})}{\\sqrt{3}}\\right]$$
    with \\(\\nu \\delta t_{mk} = 2\\pi (t_m - t_k)\\) for times in trap periods.

    ### Args:

    `scheme`: the `pyfastgate.core.kick_scheme.KickScheme`

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    \\(\\Theta\\) in radians
    """
    z = scheme.z.astype(float)
    kernel = np.tril(_phase_kernel(scheme.time_differences()), -1)
    return float(4 * params.eta ** 2 * (z @ kernel @ z))


def closure_residuals(scheme: KickScheme, params: TrapParams = None) -> typing.Tuple[complex, complex]:
    """
    ### Description:

    Closure residuals \\(C_c = \\sum_k z_k e^{-i\\nu t_k}\\) and \\(C_r = \\sum_k z_k e^{-i\\sqrt{3}\\nu t_k}\\).
    Both are independent of the trap parameters once times are in trap periods; `params` is accepted for symmetry
    with the other condition functions.

    ### Returns:

    The tuple `(c_c, c_r)`
    """
    z, t = scheme.z, scheme.t
    c_c = complex(np.sum(z * np.exp(-2j * np.pi * t)))
    c_r = complex(np.sum(z * np.exp(-2j * np.pi * SQRT3 * t)))
    return c_c, c_r


def wrap_phase_error(theta: float, target: float = TARGET_PHASE) -> float:
    """Phase error \\(x = \\pi/4 - \\Theta\\) reduced modulo \\(\\pi/2\\) into \\([-\\pi/4, \\pi/4)\\)."""
    x = target - theta
    return float(np.mod(x + np.pi / 4, np.pi / 2) - np.pi / 4)


def motional_error(c_c: complex, c_r: complex, params: TrapParams) -> float:
    c1 = np.exp(-0.5 * abs(2 * params.eta_c * c_c) ** 2)
    c2 = np.exp(-0.5 * abs(params.eta_r * c_r) ** 2)
    return float((6 - c1 ** 4 - c2 ** 4 - 4 * c1 * c2) / 8)


def phase_error(theta: float) -> float:
    x = wrap_phase_error(theta)
    return float(0.75 - 0.75 * np.cos(2 * x))


def gate_time(scheme: KickScheme) -> float:
    """Gate time \\(T_G = t_N - t_1\\) in trap periods."""
    t = scheme.t
    return float(t[-1] - t[0])


def condition_error(scheme: KickScheme, params: TrapParams) -> ConditionReport:
    """
    ### Description:

    Evaluates the error estimate of a scheme. With
    \\(C_1 = \\exp[-\\frac{1}{2}|2\\eta_c C_c|^2]\\) and \\(C_2 = \\exp[-\\frac{1}{2}|\\eta_r C_r|^2]\\):
    $$E_m = (6 - C_1^4 - C_2^4 - 4 C_1 C_2)/8, \\quad E_p = \\frac{3}{4} - \\frac{3}{4}\\cos(2x)$$
    where \\(x = \\pi/4 - \\Theta\\) is taken modulo \\(\\pi/2\\) so that \\(|x| \\leq \\pi/4\\).

    ### Args:

    `scheme`: the `pyfastgate.core.kick_scheme.KickScheme`

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    A `pyfastgate.core.conditions.ConditionReport`
    """
    theta = phase_theta(scheme, params)
    c_c, c_r = closure_residuals(scheme, params)
    e_m = motional_error(c_c, c_r, params)
    e_p = phase_error(theta)
    return ConditionReport(theta=theta, c_c=c_c, c_r=c_r, e_motional=e_m, e_phase=e_p, e_total=e_m + e_p,
                           gate_time=gate_time(scheme))


def cost_from_error(error: float, t_gate: float, a: float = COST_A, b: float = COST_B) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f'Cost constants A and B must be positive. Values of A={a}, B={b} were entered.')
    return float(t_gate + a * np.exp(b * error))


def cost(scheme: KickScheme, params: TrapParams, a: float = COST_A, b: float = COST_B) -> float:
    """
    ### Description:

    Optimization cost \\(J = T_G + A e^{B E}\\) with \\(T_G\\) in trap periods.

    ### Args:

    `scheme`: the `pyfastgate.core.kick_scheme.KickScheme`

    `params`: the `pyfastgate.core.trap.TrapParams`

    `a`: the constant \\(A\\). Default: `10`.

    `b`: the constant \\(B\\). Default: `100`.

    ### Returns:

    The cost \\(J\\)
    """
    report = condition_error(scheme, params)
    return cost_from_error(report.e_total, report.gate_time, a, b)


@dataclasses.dataclass(frozen=True, eq=False)
class Landscape:
    """Log-cost values on a 1- or 2-D grid. `values[i, j]` belongs to `axes[0][i]` and `axes[1][j]`."""
    names: typing.Tuple[str, ...]
    axes: typing.Tuple[np.ndarray, ...]
    values: np.ndarray

    def to_rows(self) -> typing.List[tuple]:
        if len(self.names) == 1:
            return [(float(v1), float(self.values[i])) for i, v1 in enumerate(self.axes[0])]
        return [(float(v1), float(v2), float(self.values[i, j]))
                for i, v1 in enumerate(self.axes[0]) for j, v2 in enumerate(self.axes[1])]

    def argmin(self) -> typing.Tuple[float, ...]:
        idx = np.unravel_index(np.nanargmin(self.values), self.values.shape)
        return tuple(float(ax[i]) for ax, i in zip(self.axes, idx))


def landscape_scan(family, fixed_vars: typing.Dict[str, float], grid: typing.Dict[str, typing.Sequence[float]],
                   params: TrapParams, a: float = COST_A, b: float = COST_B) -> Landscape:
    """
    ### Description:

    Tabulates \\(\\log J\\) of a scheme family over a 1- or 2-D grid of its free variables. Variables named in
    `fixed_vars` are held at the given values; the grid variables must be exactly the remaining free variables.
    Grid points whose delays break the family's ordering are still evaluated, by sorting and merging the kicks.

    ### Args:

    `family`: a `pyfastgate.schemes.families.SchemeFamily`

    `fixed_vars`: `dict` of variable name to held value

    `grid`: ordered `dict` of variable name to a sequence of positive values (one or two entries)

    `params`: the `pyfastgate.core.trap.TrapParams`

    ### Returns:

    A `pyfastgate.core.conditions.Landscape`
    """
    if len(grid) not in (1, 2):
        raise DomainError(f'A landscape scan needs one or two grid variables, got {len(grid)}')
    axes = []
    for name, values in grid.items():
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError(f'Grid for {name} must be a non-empty 1-D sequence')
        if np.any(values <= 0):
            raise DomainError(f'Grid values for {name} must be positive; minimum was {values.min()}')
        axes.append(values)

    scan_family = copy.deepcopy(family)
    param_dict = scan_family.param_setup.param_dict
    for name, value in fixed_vars.items():
        if name not in param_dict:
            raise DomainError(f'Unknown family variable {name!r}; free variables are {list(param_dict)}')
        param_dict[name].value = float(value)
        param_dict[name].active = False
    scan_family.param_setup.extract_parameters()
    free_names = scan_family.param_setup.parameter_info['names']
    if sorted(free_names) != sorted(grid):
        raise DomainError(f'Grid variables {list(grid)} must match the unfixed variables {free_names}')

    names = tuple(grid)
    values = np.empty(tuple(ax.size for ax in axes))
    for idx in np.ndindex(values.shape):
        point = {name: axes[k][idx[k]] for k, name in enumerate(names)}
        try:
            scheme = scan_family.generate([point[name] for name in free_names], strict=False)
        except SchemeCancellationError:
            values[idx] = np.nan
            continue
        values[idx] = np.log(cost(scheme, params, a, b))
    if np.all(np.isnan(values)):
        logger.warning(f'Every point of the landscape over {names} cancels to an empty scheme')
    else:
        logger.debug(f'Landscape over {names} with {values.size} points, min log J = {np.nanmin(values):.4f}')
    return Landscape(names=names, axes=tuple(axes), values=values)
