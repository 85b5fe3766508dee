"""
Fidelities of a simulated gate against the ideal phase gate \\(U_I = e^{i\\Theta\\sigma^z_1\\sigma^z_2}\\): the
process (entanglement) fidelity of the motion-traced qubit channel for thermal motion, the worst case over product
states of a pure qubit state and motional coherent states, and the quadratic response of the latter to pulse-area
errors.
"""
import dataclasses
import logging
import typing
import warnings

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize, minimize_scalar

from pyfastgate.core.errors import DomainError, TruncationWarning
from pyfastgate.core.kick_scheme import KickScheme
from pyfastgate.core.trap import TrapParams
from pyfastgate.oracle.fock import GUARD_POPULATION, GateUnitary, OracleConfig, check_guard, evolve_scheme

logger = logging.getLogger(__name__)

INTERNAL_STATES = ((0, 0), (0, 1), (1, 0), (1, 1))
ZZ_SIGNS = np.array([1, -1, -1, 1])
THERMAL_CUTOFF = 1e-9
DEFAULT_EPSILONS = (-4e-3, -2e-3, -1e-3, 1e-3, 2e-3, 4e-3)
N_PHASE_SAMPLES = 72


def thermal_weights(nbar: float, n_max: int, cutoff: float = THERMAL_CUTOFF) \
        -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """
    ### Description:

    Product thermal distribution of both modes, \\(p_n = (1-q)q^n\\) with \\(q = \\bar{n}/(1+\\bar{n})\\), restricted
    to level pairs of weight at least `cutoff` and renormalized.

    ### Returns:

    Centre-of-mass levels, stretch levels, weights, and the probability lost to the truncation at `n_max`
    """
    q = nbar / (1 + nbar)
    p = (1 - q) * q ** np.arange(n_max)
    leakage = float(max(0.0, 1 - p.sum() ** 2))
    joint = np.outer(p, p)
    m_c, m_r = np.nonzero(joint >= cutoff)
    weights = joint[m_c, m_r]
    return m_c, m_r, weights / weights.sum(), leakage


def coherent_state(alpha: complex, n_max: int) -> np.ndarray:
    """Truncated coherent state \\(e^{-|\\alpha|^2/2}\\sum_n \\alpha^n/\\sqrt{n!}\\,|n\\rangle\\), renormalized."""
    ratios = np.ones(n_max, dtype=complex)
    ratios[1:] = alpha / np.sqrt(np.arange(1, n_max))
    vec = np.cumprod(ratios)
    return vec / np.linalg.norm(vec)


def _target_phases(config: OracleConfig) -> np.ndarray:
    return config.target_phase * ZZ_SIGNS


def process_fidelity(u: GateUnitary, config: OracleConfig, params: TrapParams) -> float:
    """
    ### Description:

    Entanglement fidelity of the qubit channel \\(\\rho \\mapsto \\mathrm{Tr}_m[u(\\rho \\otimes \\rho_{th})u^\\dagger]\\)
    with the ideal gate:
    $$F_P = \\frac{1}{16}\\sum_m p_m \\Big\\| \\sum_s e^{-i\\Theta_s}\\langle s|u|s\\rangle |m\\rangle \\Big\\|^2$$
    where \\(\\Theta_s = \\pm\\Theta\\) is the ideal phase of internal state \\(s\\) and \\(p_m\\) the thermal weight
    of motional Fock state \\(m\\). Warns with `TruncationWarning` when more than 1e-6 of the thermal distribution
    lies above `n_max`.

    ### Args:

    `u`: the `pyfastgate.oracle.fock.GateUnitary`

    `config`: the `pyfastgate.oracle.fock.OracleConfig` (thermal occupation and target phase)

    `params`: the `pyfastgate.core.trap.TrapParams` (thermal occupation when `config.nbar` is `None`)

    ### Returns:

    \\(F_P \\in [0, 1]\\)
    """
    n_max = u.n_max
    m_c, m_r, weights, leakage = thermal_weights(config.thermal_nbar(params), n_max)
    if leakage > GUARD_POPULATION:
        warnings.warn(f'The thermal distribution loses {leakage:.2e} above n_max = {n_max}; weights renormalized',
                      TruncationWarning, stacklevel=2)
        u.flags.add('thermal_leakage')
    k = weights.size
    columns = np.arange(4 * k).reshape(k, 4)
    states = np.zeros((2, 2, n_max, n_max, 4 * k), dtype=complex)
    for s_idx, (i1, i2) in enumerate(INTERNAL_STATES):
        states[i1, i2, m_c, m_r, columns[:, s_idx]] = 1.0
    out = u.apply(states)
    check_guard(out, np.repeat(weights, 4) / 4, u)

    phases = np.exp(-1j * _target_phases(config))
    reduced = sum(phases[s_idx] * out[i1, i2][:, :, columns[:, s_idx]]
                  for s_idx, (i1, i2) in enumerate(INTERNAL_STATES))
    norms = np.sum(np.abs(reduced) ** 2, axis=(0, 1))
    return float(np.clip(np.sum(weights * norms) / 16, 0.0, 1.0))


def reduced_operators(u: GateUnitary, alphas_c: np.ndarray, alphas_r: np.ndarray,
                      config: OracleConfig) -> np.ndarray:
    """
    ### Description:

    For each pair of coherent amplitudes, the \\(4 \\times 4\\) qubit operator
    \\(A_{s's} = e^{-i\\Theta_{s'}}\\langle s', \\alpha_c, \\alpha_r|u|s, \\alpha_c, \\alpha_r\\rangle\\), so that the
    fidelity of the product state \\(|\\psi\\rangle|\\alpha_c, \\alpha_r\\rangle\\) is
    \\(|\\langle\\psi|A|\\psi\\rangle|^2\\).

    ### Returns:

    Complex array of shape `(len(alphas_c), 4, 4)`
    """
    n_max = u.n_max
    vec_c = np.column_stack([coherent_state(a, n_max) for a in alphas_c])
    vec_r = np.column_stack([coherent_state(a, n_max) for a in alphas_r])
    motional = vec_c[:, None, :] * vec_r[None, :, :]
    g = motional.shape[-1]
    columns = np.arange(4 * g).reshape(g, 4)
    states = np.zeros((2, 2, n_max, n_max, 4 * g), dtype=complex)
    for s_idx, (i1, i2) in enumerate(INTERNAL_STATES):
        states[i1, i2][:, :, columns[:, s_idx]] = motional
    out = u.apply(states)
    check_guard(out, None, u)
    overlap = np.einsum('ijg,abijgs->abgs', motional.conj(), out.reshape(2, 2, n_max, n_max, g, 4))
    a = overlap.reshape(4, g, 4).transpose(1, 0, 2)
    return a * np.exp(-1j * _target_phases(config))[None, :, None]


def _hermitian_part(a: np.ndarray, phi: float) -> np.ndarray:
    rotated = np.exp(-1j * phi) * a
    return (rotated + rotated.conj().T) / 2


def internal_minimum(a: np.ndarray) -> typing.Tuple[float, np.ndarray]:
    """
    ### Description:

    Minimum of \\(|\\langle\\psi|A|\\psi\\rangle|^2\\) over unit vectors, i.e. the squared distance from the origin to
    the numerical range of \\(A\\). The distance is the largest support value
    \\(\\max_\\phi \\lambda_{min}[(e^{-i\\phi}A + e^{i\\phi}A^\\dagger)/2]\\), or zero when the range contains the origin.

    ### Returns:

    The minimum and a minimizing unit vector
    """
    phis = np.linspace(0, 2 * np.pi, N_PHASE_SAMPLES, endpoint=False)
    support = np.array([eigh(_hermitian_part(a, phi), eigvals_only=True)[0] for phi in phis])
    best = int(np.argmax(support))
    step = 2 * np.pi / N_PHASE_SAMPLES
    res = minimize_scalar(lambda phi: -eigh(_hermitian_part(a, phi), eigvals_only=True)[0],
                          bounds=(phis[best] - step, phis[best] + step), method='bounded',
                          options={'xatol': 1e-12})
    phi, distance = (res.x, -res.fun) if -res.fun > support[best] else (phis[best], support[best])
    _, vectors = eigh(_hermitian_part(a, phi))
    return float(max(0.0, distance) ** 2), vectors[:, 0]


@dataclasses.dataclass(frozen=True, eq=False)
class WorstCaseFidelity:
    """Minimum fidelity found, with the motional amplitudes and qubit state reaching it."""
    fidelity: float
    alpha_c: complex
    alpha_r: complex
    internal_state: np.ndarray
    converged: bool

    def to_dict(self) -> dict:
        return {'fidelity': self.fidelity, 'alpha_c': [self.alpha_c.real, self.alpha_c.imag],
                'alpha_r': [self.alpha_r.real, self.alpha_r.imag], 'converged': self.converged}


def _amplitude_grid(alpha_max: float, n_magnitudes: int, n_phases: int) -> np.ndarray:
    points = [0j]
    if alpha_max > 0 and n_magnitudes > 1:
        for magnitude in np.linspace(0, alpha_max, n_magnitudes)[1:]:
            points.extend(magnitude * np.exp(2j * np.pi * np.arange(n_phases) / n_phases))
    return np.array(points)


def _project(alpha: complex, alpha_max: float) -> complex:
    return alpha if abs(alpha) <= alpha_max else alpha * alpha_max / abs(alpha)


def worst_case_fidelity(u: GateUnitary, config: OracleConfig) -> WorstCaseFidelity:
    """
    ### Description:

    Minimizes \\(|\\langle\\psi|U_I^\\dagger u|\\psi\\rangle|^2\\) over product states of a pure two-qubit state and
    coherent states of both modes with \\(|\\alpha| \\leq\\) `alpha_max`. The qubit state is minimized exactly for
    every motional point (`internal_minimum`); the motional amplitudes are scanned on the `StateSearch` grid and the
    worst grid point is refined with Nelder-Mead, projecting amplitudes back onto the allowed disc.

    ### Args:

    `u`: the `pyfastgate.oracle.fock.GateUnitary`

    `config`: the `pyfastgate.oracle.fock.OracleConfig`

    ### Returns:

    A `pyfastgate.oracle.fidelity.WorstCaseFidelity`; `converged` is `False` when the refinement stopped on its
    iteration limit
    """
    search = config.state_search
    grid = _amplitude_grid(search.alpha_max, search.n_magnitudes, search.n_phases)
    alphas_c = np.repeat(grid, grid.size)
    alphas_r = np.tile(grid, grid.size)
    operators = reduced_operators(u, alphas_c, alphas_r, config)
    values = np.array([internal_minimum(a)[0] for a in operators])
    start = int(np.argmin(values))
    best = (values[start], complex(alphas_c[start]), complex(alphas_r[start]))
    converged = True

    if search.refine_steps > 0 and search.alpha_max > 0:
        def objective(v):
            a_c = _project(v[0] + 1j * v[1], search.alpha_max)
            a_r = _project(v[2] + 1j * v[3], search.alpha_max)
            return internal_minimum(reduced_operators(u, [a_c], [a_r], config)[0])[0]

        x0 = np.array([best[1].real, best[1].imag, best[2].real, best[2].imag])
        simplex = np.vstack((x0, x0 + 0.1 * search.alpha_max * np.eye(4)))
        res = minimize(objective, x0, method='Nelder-Mead',
                       options={'maxiter': search.refine_steps, 'xatol': 1e-8, 'fatol': 1e-12,
                                'initial_simplex': simplex})
        converged = bool(res.success)
        if res.fun < best[0]:
            best = (float(res.fun), _project(res.x[0] + 1j * res.x[1], search.alpha_max),
                    _project(res.x[2] + 1j * res.x[3], search.alpha_max))
        if not converged:
            logger.warning(f'Worst-case refinement stopped after {search.refine_steps} iterations: {res.message}')

    fidelity, internal = internal_minimum(reduced_operators(u, [best[1]], [best[2]], config)[0])
    return WorstCaseFidelity(fidelity=float(np.clip(fidelity, 0.0, 1.0)), alpha_c=best[1], alpha_r=best[2],
                             internal_state=internal, converged=converged)


def relative_phase(u: GateUnitary) -> float:
    """
    ### Description:

    Two-qubit phase of a gate acting on motional vacuum,
    \\(\\frac{1}{4}\\arg(u_{00}u_{11}u_{01}^* u_{10}^*)\\) from the diagonal elements
    \\(u_s = \\langle s, 0, 0|u|s, 0, 0\\rangle\\). Equal to \\(\\Theta\\) reduced into \\((-\\pi/4, \\pi/4]\\) for a closed
    scheme.
    """
    n_max = u.n_max
    states = np.zeros((2, 2, n_max, n_max, 4), dtype=complex)
    for s_idx, (i1, i2) in enumerate(INTERNAL_STATES):
        states[i1, i2, 0, 0, s_idx] = 1.0
    out = u.apply(states)
    d = [out[i1, i2, 0, 0, s_idx] for s_idx, (i1, i2) in enumerate(INTERNAL_STATES)]
    return float(np.angle(d[0] * d[3] * np.conj(d[1]) * np.conj(d[2])) / 4)


@dataclasses.dataclass(frozen=True, eq=False)
class PerturbationFit:
    """
    ### Description:

    Least-squares fit \\(F_W(0) - F_W(\\epsilon) = b\\epsilon + c\\epsilon^2\\). `nonquadratic` is set when the RMS
    residual exceeds 1% of the largest quadratic term, `linear_term` when \\(|b|\\epsilon_{max}\\) does.
    """
    c: float
    b: float
    residual: float
    f_w0: float
    epsilons: np.ndarray
    f_w: np.ndarray
    nonquadratic: bool
    linear_term: bool

    def to_dict(self) -> dict:
        return {'c': self.c, 'b': self.b, 'residual': self.residual, 'f_w0': self.f_w0,
                'epsilons': [float(e) for e in self.epsilons], 'f_w': [float(f) for f in self.f_w],
                'nonquadratic': self.nonquadratic, 'linear_term': self.linear_term}


def perturbation_coefficient(scheme: KickScheme or None, config: OracleConfig, params: TrapParams,
                             epsilons: typing.Sequence[float] = DEFAULT_EPSILONS) -> PerturbationFit:
    """
    ### Description:

    Response of the worst-case fidelity to a systematic pulse-area error: \\(F_W\\) is evaluated at \\(\\epsilon = 0\\)
    and at every value in `epsilons`, and \\(F_W(0) - F_W(\\epsilon)\\) is fitted as \\(b\\epsilon + c\\epsilon^2\\), so
    that \\(F_W \\approx F_W(0) - c\\epsilon^2\\) when the linear term vanishes.

    ### Args:

    `scheme`: a `pyfastgate.core.kick_scheme.KickScheme` (or `None` for no pulses)

    `config`: the `pyfastgate.oracle.fock.OracleConfig`; its `epsilon` is ignored

    `params`: the `pyfastgate.core.trap.TrapParams`

    `epsilons`: nonzero area errors. Default: \\(\\pm 10^{-3}, \\pm 2\\cdot 10^{-3}, \\pm 4\\cdot 10^{-3}\\).

    ### Returns:

    A `pyfastgate.oracle.fidelity.PerturbationFit`
    """
    epsilons = np.asarray(epsilons, dtype=float)
    if epsilons.size < 2 or np.any(epsilons == 0):
        raise DomainError('The perturbation fit needs at least two nonzero area errors')
    f_w0 = worst_case_fidelity(evolve_scheme(scheme, config.replace(epsilon=0.0), params), config).fidelity
    f_w = np.array([worst_case_fidelity(evolve_scheme(scheme, config.replace(epsilon=float(e)), params),
                                        config).fidelity for e in epsilons])
    drop = f_w0 - f_w
    design = np.column_stack((epsilons, epsilons ** 2))
    (b, c), *_ = np.linalg.lstsq(design, drop, rcond=None)
    residual = float(np.sqrt(np.mean((drop - design @ np.array([b, c])) ** 2)))
    quadratic_scale = abs(c) * np.max(epsilons ** 2)
    tolerance = max(0.01 * quadratic_scale, 1e-12)
    fit = PerturbationFit(c=float(c), b=float(b), residual=residual, f_w0=f_w0, epsilons=epsilons, f_w=f_w,
                          nonquadratic=residual > tolerance,
                          linear_term=abs(b) * np.max(np.abs(epsilons)) > tolerance)
    logger.info(f'Area-error response: c = {fit.c:.4g}, b = {fit.b:.3g}, residual = {fit.residual:.2e}')
    return fit


@dataclasses.dataclass(frozen=True)
class GrowthRow:
    n_pairs: int
    c: float
    f_w0: float
    residual: float
    breakdown: bool


def error_growth_scan(schemes: typing.Sequence[KickScheme], config: OracleConfig, params: TrapParams,
                      reference_epsilon: float = 0.01,
                      epsilons: typing.Sequence[float] = DEFAULT_EPSILONS) -> typing.List[GrowthRow]:
    """
    ### Description:

    Fits the area-error coefficient \\(c\\) for schemes of increasing pulse-pair count \\(N\\). A row is marked as a
    perturbative breakdown when its fit is not quadratic or when \\(\\epsilon_{ref} N \\geq 1\\) for the reference
    error `reference_epsilon`.

    ### Returns:

    A `list` of `pyfastgate.oracle.fidelity.GrowthRow`, one per scheme
    """
    if len(schemes) < 3:
        raise DomainError(f'An error growth scan needs at least three schemes. {len(schemes)} were given.')
    rows = []
    for scheme in schemes:
        fit = perturbation_coefficient(scheme, config, params, epsilons)
        n_pairs = scheme.n_pairs
        rows.append(GrowthRow(n_pairs=n_pairs, c=fit.c, f_w0=fit.f_w0, residual=fit.residual,
                              breakdown=fit.nonquadratic or reference_epsilon * n_pairs >= 1))
    return rows
