"""
Command-line front end. Every run writes its artifacts and a `manifest.json` into the `--out` directory; every
artifact carries the manifest hash, and `pyfastgate replay manifest.json` re-runs the recorded command.

Exit codes: 0 success, 1 parse error, 2 invariant or domain error, 3 infeasible, 4 internal error.
"""
import argparse
import dataclasses
import json
import logging
import pathlib
import sys
import time
import typing

import numpy as np

from pyfastgate import __version__
from pyfastgate.core.conditions import condition_error, cost_from_error, landscape_scan, phase_theta
from pyfastgate.core.errors import DomainError, InfeasibleError, SchemeParseError
from pyfastgate.core.kick_scheme import as_kick_scheme
from pyfastgate.core.phase_space import FRAMES, MODES, geometric_phase_difference, trajectory
from pyfastgate.core.trap import LaserParams, TrapParams
from pyfastgate.optics.budget import max_pairs_for_area, max_scale_for_area, required_area
from pyfastgate.optics.splitter import (check_realizability, compile_network, network_of,
                                        pulse_area_for_pi_pairs)
from pyfastgate.optimize.crs import FEASIBILITY_THRESHOLD, OptimizerConfig, optimize
from pyfastgate.optimize.study import delay_structure_report, scaling_study
from pyfastgate.oracle.fidelity import (DEFAULT_EPSILONS, perturbation_coefficient, process_fidelity,
                                        relative_phase, worst_case_fidelity)
from pyfastgate.oracle.fock import OracleConfig, StateSearch, evolve_scheme
from pyfastgate.robustness.sweeps import ANGLE_MODELS, ERROR_BUDGET, angle_sweep, area_sweep, timing_sweep
from pyfastgate.schemes.families import FAMILY_KINDS, SPLIT_KINDS, SchemeFamily
from pyfastgate.utils.io import (json_default, load_family, load_laser_params, load_network, load_scheme,
                                 load_trap_params, read_json, write_csv, write_json)
from pyfastgate.utils.manifest import RunManifest

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVARIANT = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4

LOG_FORMAT = '%(asctime)s [%(levelname)s] %(message)s'
MANIFEST_NAME = 'manifest.json'
PATH_OPTIONS = ('params', 'laser', 'scheme', 'network', 'family_file', 'manifest')
UNRECORDED_OPTIONS = ('handler', 'out', 'verbose', 'command', 'sweep', 'action')
DEFAULT_RANGES = {'timing': (-1e-10, 1e-10), 'area': (-5e-3, 5e-3), 'angle': (-0.02, 0.02)}


class CommandLineError(Exception):
    """Usage error raised by `ArgumentParser` instead of exiting."""


class ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        raise CommandLineError(f'{self.prog}: {message}')


def _int_list(text: str) -> typing.List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated integers, got {text!r}')


def _float_list(text: str) -> typing.List[float]:
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'expected comma-separated numbers, got {text!r}')


def _assignment(text: str) -> typing.Tuple[str, float]:
    name, sep, value = text.partition('=')
    if not sep:
        raise DomainError(f'Expected NAME=VALUE, got {text!r}')
    try:
        return name.strip(), float(value)
    except ValueError:
        raise DomainError(f'The value of {name} must be a number, got {value!r}')


def _grid_axis(text: str) -> typing.Tuple[str, np.ndarray]:
    name, sep, spec = text.partition('=')
    parts = spec.split(':')
    if not sep or len(parts) != 3:
        raise DomainError(f'Expected NAME=LOW:HIGH:STEPS, got {text!r}')
    try:
        low, high, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f'Grid {text!r} needs numeric bounds and an integer step count')
    if steps < 1:
        raise DomainError(f'A grid needs at least one point. A value of {steps} was entered.')
    return name.strip(), np.linspace(low, high, steps)


@dataclasses.dataclass
class Artifacts:
    """Writes the artifacts of one run into `out_dir`, each stamped with `manifest_hash`."""
    out_dir: pathlib.Path
    manifest_hash: str
    table_format: str = 'csv'
    written: typing.List[str] = dataclasses.field(default_factory=list)

    def document(self, name: str, data: dict):
        write_json(self.out_dir / name, data, self.manifest_hash)
        self.written.append(name)

    def table(self, name: str, columns: typing.Sequence[str], rows: typing.Iterable[typing.Sequence]):
        if self.table_format == 'json':
            self.document(f'{name}.json', {'columns': list(columns), 'rows': [list(r) for r in rows]})
            return
        write_csv(self.out_dir / f'{name}.csv', columns, rows, self.manifest_hash)
        self.written.append(f'{name}.csv')


@dataclasses.dataclass
class RunContext:
    trap: TrapParams
    laser: LaserParams
    artifacts: Artifacts


def _trap_params(args) -> TrapParams:
    trap = load_trap_params(args.params) if args.params else TrapParams()
    overrides = {k: getattr(args, k) for k in ('eta', 'nu', 'nbar') if getattr(args, k) is not None}
    return trap.replace(**overrides)


def _laser_params(args) -> LaserParams:
    laser = load_laser_params(args.laser) if args.laser else LaserParams()
    overrides = {k: getattr(args, k) for k in ('rep_rate', 'max_area') if getattr(args, k) is not None}
    return laser.replace(**overrides)


def _single_n(args) -> int:
    if args.n is None:
        return 1
    if len(args.n) != 1:
        raise DomainError(f'{_command_name(args)} takes a single --n value. Values of {args.n} were entered.')
    return args.n[0]


def _family(args, ctx: RunContext, n: int = None) -> SchemeFamily:
    if args.family_file:
        family = load_family(args.family_file, trap=ctx.trap)
        if args.n is not None:
            family = family.with_scale(_single_n(args) if n is None else n)
        if args.laser or args.rep_rate is not None:
            family = family.configured(rep_rate=ctx.laser.rep_rate)
        return family
    if args.family is None:
        raise DomainError('Either --family or --family-file is required')
    kwargs = {}
    if args.abc is not None:
        kwargs['abc'] = args.abc
    if args.bounds is not None:
        kwargs['bounds'] = args.bounds
    return SchemeFamily(args.family, n=_single_n(args) if n is None else n, n_delays=args.delays,
                        n_laser_pulses=args.laser_pulses, n_free=args.free, serial_pulses=args.serial,
                        rep_rate=ctx.laser.rep_rate, trap=ctx.trap, **kwargs)


def _optimizer_config(args) -> OptimizerConfig:
    return OptimizerConfig(population_size=args.population, max_evaluations=args.evaluations, seed=args.seed,
                           polish=not args.no_polish, n_starts=args.starts, workers=args.workers,
                           feasibility_threshold=args.budget)


def _oracle_config(args) -> OracleConfig:
    return OracleConfig(n_max=args.n_max, epsilon=args.epsilon, state_search=StateSearch(alpha_max=args.alpha_max),
                        intra_pair_delay=args.intra_pair_delay, frame=args.frame)


def _scheme(args):
    return as_kick_scheme(load_scheme(args.scheme))


def _sweep_range(args, kind: str) -> typing.Tuple[float, float, int]:
    low, high = DEFAULT_RANGES[kind] if args.range is None else args.range
    return low, high, args.steps


def cmd_evaluate(args, ctx: RunContext) -> dict:
    scheme = _scheme(args)
    report = condition_error(scheme, ctx.trap)
    summary = {**report.to_dict(), 'cost': cost_from_error(report.e_total, report.gate_time),
               'n_pairs': scheme.n_pairs, 'n_groups': scheme.n_groups,
               'within_budget': report.e_total <= args.budget}
    ctx.artifacts.document('evaluation.json', summary)
    return summary


def cmd_optimize(args, ctx: RunContext) -> dict:
    family = _family(args, ctx)
    result = optimize(family, ctx.trap, config=_optimizer_config(args))
    summary = result.to_dict()
    if family.kind in SPLIT_KINDS:
        summary['delay_structure'] = [{'delay': m.delay, 'matches': [list(pair) for pair in m.matches]}
                                      for m in delay_structure_report(result.delays)]
    ctx.artifacts.document('optimization.json', summary)
    ctx.artifacts.table('history', ('iteration', 'best_cost'), enumerate(result.history.tolist()))
    if result.scheme is not None:
        ctx.artifacts.document('solution.json', result.scheme.to_dict())
    if not result.feasible:
        raise InfeasibleError(f'No point of {family.kind} reached E <= {args.budget}; best cost {result.cost:.6g}')
    return summary


def cmd_scaling(args, ctx: RunContext) -> dict:
    if args.n is None:
        raise DomainError('scaling needs the sizes as --n N1,N2,N3,...')
    template = _family(args, ctx, n=args.n[0])
    study = scaling_study(template, args.n, ctx.trap, config=_optimizer_config(args))
    ctx.artifacts.table('scaling', ('n', 'n_pairs', 'gate_time', 'error', 'cost', 'seed', 'feasible'),
                        study.to_rows())
    summary = {'family': template.to_dict(), 'fit': study.fit.to_dict(), 'sizes': args.n,
               'feasible_sizes': [r.n for r in study.rows if r.feasible]}
    ctx.artifacts.document('scaling_fit.json', summary)
    return summary


def cmd_trajectory(args, ctx: RunContext) -> dict:
    if args.scheme:
        scheme = _scheme(args)
    else:
        family = _family(args, ctx)
        if args.tau is not None:
            scheme = family.generate(args.tau)
        else:
            result = optimize(family, ctx.trap, config=_optimizer_config(args))
            if not result.feasible:
                raise InfeasibleError(f'No point of {family.kind} reached E <= {args.budget}')
            scheme = result.scheme
    summary = {'scheme': scheme.to_dict(), 'theta': phase_theta(scheme, ctx.trap),
               'geometric_phase': geometric_phase_difference(scheme, ctx.trap)}
    for mode in (MODES if args.mode == 'both' else (args.mode,)):
        path = trajectory(scheme, ctx.trap, mode, frame=args.frame, branch=args.branch)
        ctx.artifacts.table(f'trajectory_{mode}', ('index', 't', 'x', 'p', 'branch', 'frame'), path.to_rows())
        summary[mode] = {'branch': path.branch, 'closed': path.is_closed(args.closure_tolerance),
                         'net_displacement': path.net_displacement, 'accumulated_phase': path.accumulated_phase,
                         'signed_area': path.signed_area(), 'enclosed_area': path.enclosed_area(),
                         'simple': path.is_simple()}
    ctx.artifacts.document('trajectory.json', summary)
    return summary


def cmd_landscape(args, ctx: RunContext) -> dict:
    family = _family(args, ctx)
    fixed = dict(_assignment(text) for text in args.fix or ())
    grid = dict(_grid_axis(text) for text in args.grid or ())
    landscape = landscape_scan(family, fixed, grid, ctx.trap)
    ctx.artifacts.table('landscape', landscape.names + ('log_cost',), landscape.to_rows())
    summary = {'family': family.to_dict(), 'fixed': fixed, 'names': list(landscape.names),
               'argmin': list(landscape.argmin()), 'min_log_cost': float(np.nanmin(landscape.values))}
    ctx.artifacts.document('landscape_summary.json', summary)
    return summary


def cmd_oracle(args, ctx: RunContext) -> dict:
    scheme = _scheme(args)
    config = _oracle_config(args)
    u = evolve_scheme(scheme, config, ctx.trap)
    f_p = process_fidelity(u, config, ctx.trap)
    worst = worst_case_fidelity(u, config)
    summary = {'process_fidelity': f_p, 'process_infidelity': 1 - f_p, 'worst_case': worst.to_dict(),
               'relative_phase': relative_phase(u), 'conditions': condition_error(scheme, ctx.trap).to_dict(),
               'n_max': config.n_max, 'epsilon': config.epsilon, 'flags': sorted(u.flags)}
    if args.perturbation:
        fit = perturbation_coefficient(scheme, config, ctx.trap, args.epsilons or DEFAULT_EPSILONS)
        summary['perturbation'] = fit.to_dict()
        ctx.artifacts.table('perturbation', ('epsilon', 'f_w', 'drop'),
                            [(float(e), float(f), float(fit.f_w0 - f)) for e, f in zip(fit.epsilons, fit.f_w)])
    ctx.artifacts.document('oracle.json', summary)
    return summary


def _write_sweep(ctx: RunContext, result) -> dict:
    ctx.artifacts.table(result.kind, result.columns, result.rows)
    summary = result.to_dict()
    ctx.artifacts.document(f'{result.kind}_summary.json', summary)
    return summary


def cmd_robustness_timing(args, ctx: RunContext) -> dict:
    family = _family(args, ctx)
    network = load_network(args.network) if args.network else network_of(family, args.values, args.overhead)
    result = timing_sweep(network, family, _sweep_range(args, 'timing'), ctx.trap, ctx.laser, args.values,
                          args.budget, args.include_grouping)
    return _write_sweep(ctx, result)


def cmd_robustness_area(args, ctx: RunContext) -> dict:
    result = area_sweep(_scheme(args), _sweep_range(args, 'area'), _oracle_config(args), ctx.trap, args.budget)
    return _write_sweep(ctx, result)


def cmd_robustness_angle(args, ctx: RunContext) -> dict:
    result = angle_sweep(_scheme(args), _sweep_range(args, 'angle'), ctx.trap, args.model, args.eta_t, args.phi_b,
                         args.budget)
    return _write_sweep(ctx, result)


def cmd_optics_compile(args, ctx: RunContext) -> dict:
    network = load_network(args.network)
    area = pulse_area_for_pi_pairs(network) if args.area is None else args.area
    train = compile_network(network, ctx.laser, args.pulses, area)
    needed = required_area(network.n_components, network.overhead_factor)
    ctx.artifacts.table('train', ('time_s', 'direction', 'area_over_pi', 'source'), train.to_rows())
    summary = {'n_entries': train.n_entries, 'components_per_pulse': network.n_components, 'area': area,
               'energy': train.energy, 'required_area': needed, 'max_area': ctx.laser.max_area,
               'within_budget': needed <= ctx.laser.max_area}
    ctx.artifacts.document('compile.json', summary)
    return summary


def cmd_optics_check(args, ctx: RunContext) -> dict:
    network = load_network(args.network)
    train = compile_network(network, ctx.laser, args.pulses, pulse_area_for_pi_pairs(network))
    report = check_realizability(_scheme(args), train, ctx.trap)
    summary = {**report.to_dict(), 'ok': report.ok}
    ctx.artifacts.document('realizability.json', summary)
    if not report.ok:
        raise DomainError(f'The network does not realize the scheme: {report.to_dict()}')
    return summary


def cmd_optics_budget(args, ctx: RunContext) -> dict:
    if args.scheme:
        n_pairs = _scheme(args).n_pairs
    elif args.pairs is not None:
        n_pairs = args.pairs
    else:
        raise DomainError('optics budget needs --pairs or --scheme')
    area = ctx.laser.max_area if args.area is None else args.area
    needed = required_area(n_pairs, args.overhead)
    summary = {'n_pairs': n_pairs, 'overhead': args.overhead, 'required_area': needed,
               'required_area_over_pi': needed / np.pi, 'area': area, 'within_budget': needed <= area,
               'max_pairs': max_pairs_for_area(area, args.overhead)}
    if args.abc is not None:
        summary['max_scale'] = max_scale_for_area(args.abc, area, args.overhead)
    ctx.artifacts.document('budget.json', summary)
    return summary


def cmd_optics_network(args, ctx: RunContext) -> dict:
    family = _family(args, ctx)
    network = network_of(family, args.values, args.overhead, args.grouping_delay)
    ctx.artifacts.document('network.json', network.to_dict())
    return {'family': family.to_dict(), 'n_stages': len(network.stages),
            'components_per_pulse': network.n_components}


def _replace_out(argv: typing.List[str], out: str) -> typing.List[str]:
    replaced, skip = [], False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == '--out':
            skip = True
            continue
        if token.startswith('--out='):
            continue
        replaced.append(token)
    return replaced + ['--out', out]


def cmd_replay(args) -> int:
    document = read_json(args.manifest)
    if not isinstance(document, dict) or 'argv' not in document:
        raise SchemeParseError(f'{args.manifest} is not a run manifest')
    recorded = RunManifest.from_dict(document)
    argv = list(recorded.argv)
    out = args.out if args.out is not None else recorded.output_dir
    argv = _replace_out(argv, out)
    if recorded.version != __version__:
        logger.warning(f'Replaying a manifest of version {recorded.version} with version {__version__}')
    logger.info(f'Replaying {recorded.command}: {" ".join(argv)}')
    code = main(argv)
    replayed = read_json(pathlib.Path(out) / MANIFEST_NAME)
    if replayed.get('hash') != document.get('hash'):
        logger.warning(f'Replayed manifest hash {replayed.get("hash")} differs from the recorded '
                       f'{document.get("hash")}; an input file or option has changed')
    return code


def _common_parser() -> argparse.ArgumentParser:
    common = ArgumentParser(add_help=False)
    group = common.add_argument_group('run options')
    group.add_argument('--params', help='JSON file of trap parameters (eta, nu, nbar)')
    group.add_argument('--laser', help='JSON file of laser parameters (rep_rate, max_area, pulse_duration)')
    group.add_argument('--seed', type=int, default=0, help='root seed of every random choice (default: 0)')
    group.add_argument('--out', default='.', help='output directory (default: current directory)')
    group.add_argument('--format', choices=('csv', 'json'), default='csv', help='format of tabular artifacts')
    group.add_argument('--workers', type=int, default=1, help='worker processes for optimizer starts')
    group.add_argument('--eta', type=float, help='override the Lamb-Dicke parameter')
    group.add_argument('--nu', type=float, help='override the angular trap frequency (rad/s)')
    group.add_argument('--nbar', type=float, help='override the thermal occupation')
    group.add_argument('--rep-rate', type=float, help='override the laser repetition rate (Hz)')
    group.add_argument('--max-area', type=float, help='override the maximum pulse area (rad)')
    group.add_argument('-v', '--verbose', action='store_true', help='log at DEBUG level')
    return common


def _add_family_options(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('scheme family')
    group.add_argument('--family', help=f'family kind, one of {", ".join(FAMILY_KINDS)} or a short form')
    group.add_argument('--family-file', help='JSON family descriptor {"kind": ..., "params": {...}}')
    group.add_argument('--n', type=_int_list, help='scale (or comma-separated scales for scaling)')
    group.add_argument('--abc', type=_int_list, help='weights a,b,c of the symmetric family')
    group.add_argument('--delays', type=int, default=3, help='loop delays of the split families')
    group.add_argument('--laser-pulses', type=int, default=1, help='laser pulses of the split families')
    group.add_argument('--free', type=int, default=5, help='free times of the free_times family')
    group.add_argument('--serial', action='store_true', help='deliver symmetric groups on consecutive pulses')
    group.add_argument('--bounds', type=_float_list, help='search box low,high (trap periods)')


def _add_optimizer_options(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('optimizer')
    group.add_argument('--starts', type=int, default=16, help='independently seeded starts')
    group.add_argument('--evaluations', type=int, default=20000, help='evaluations per start')
    group.add_argument('--population', type=int, help='population size (default: 10(d+1))')
    group.add_argument('--no-polish', action='store_true', help='skip the Nelder-Mead polish')
    group.add_argument('--budget', type=float, default=FEASIBILITY_THRESHOLD, help='feasibility threshold on E')


def _add_oracle_options(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('oracle')
    group.add_argument('--n-max', type=int, default=40, help='Fock levels per mode')
    group.add_argument('--epsilon', type=float, default=0.0, help='pulse-area error')
    group.add_argument('--alpha-max', type=float, default=2.0, help='largest coherent amplitude searched')
    group.add_argument('--intra-pair-delay', type=float, default=0.0, help='delay inside a pair (trap periods)')
    group.add_argument('--frame', choices=FRAMES, default='rotating')


def _add_sweep_options(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('sweep')
    group.add_argument('--range', type=_float_list, help='swept interval low,high')
    group.add_argument('--steps', type=int, default=21)
    group.add_argument('--budget', type=float, default=ERROR_BUDGET, help='error budget')


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog='pyfastgate', description='Ultrafast two-ion phase gates from split laser pulses')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    common = _common_parser()
    commands = parser.add_subparsers(dest='command', metavar='command', parser_class=ArgumentParser)
    commands.required = True

    p = commands.add_parser('evaluate', parents=[common], help='condition error of a scheme file')
    p.add_argument('scheme')
    p.add_argument('--budget', type=float, default=FEASIBILITY_THRESHOLD)
    p.set_defaults(handler=cmd_evaluate)

    p = commands.add_parser('optimize', parents=[common], help='fastest feasible member of a family')
    _add_family_options(p)
    _add_optimizer_options(p)
    p.set_defaults(handler=cmd_optimize)

    p = commands.add_parser('scaling', parents=[common], help='gate time against pulse-pair count')
    _add_family_options(p)
    _add_optimizer_options(p)
    p.set_defaults(handler=cmd_scaling)

    p = commands.add_parser('trajectory', parents=[common], help='phase-space trajectories of both modes')
    _add_family_options(p)
    _add_optimizer_options(p)
    p.add_argument('--scheme', help='scheme file (otherwise the family is generated or optimized)')
    p.add_argument('--tau', type=_float_list, help='free values of the family; optimized when omitted')
    p.add_argument('--mode', choices=MODES + ('both',), default='both')
    p.add_argument('--frame', choices=FRAMES, default='rotating')
    p.add_argument('--branch', choices=('00', '01', '10', '11'))
    p.add_argument('--closure-tolerance', type=float, default=1e-9)
    p.set_defaults(handler=cmd_trajectory)

    p = commands.add_parser('landscape', parents=[common], help='log cost over a grid of free variables')
    _add_family_options(p)
    p.add_argument('--fix', action='append', metavar='NAME=VALUE', help='hold a free variable (repeatable)')
    p.add_argument('--grid', action='append', metavar='NAME=LOW:HIGH:STEPS', help='grid axis (one or two)')
    p.set_defaults(handler=cmd_landscape)

    p = commands.add_parser('oracle', parents=[common], help='Fock-space fidelities of a scheme file')
    p.add_argument('scheme')
    _add_oracle_options(p)
    p.add_argument('--perturbation', action='store_true', help='fit the area-error response of F_W')
    p.add_argument('--epsilons', type=_float_list, help='area errors of the perturbation fit')
    p.set_defaults(handler=cmd_oracle)

    robustness = commands.add_parser('robustness', help='systematic error sweeps')
    sweeps = robustness.add_subparsers(dest='sweep', metavar='sweep', parser_class=ArgumentParser)
    sweeps.required = True
    p = sweeps.add_parser('timing', parents=[common], help='common delay-line shift (seconds)')
    _add_family_options(p)
    _add_sweep_options(p)
    p.add_argument('--network', help='network file (otherwise built from the family)')
    p.add_argument('--values', type=_float_list, help='free values of the family instance')
    p.add_argument('--overhead', type=float, default=2.0)
    p.add_argument('--include-grouping', action='store_true', help='also shift zero-delay loops')
    p.set_defaults(handler=cmd_robustness_timing)
    p = sweeps.add_parser('area', parents=[common], help='pulse-area error')
    p.add_argument('scheme')
    _add_sweep_options(p)
    _add_oracle_options(p)
    p.set_defaults(handler=cmd_robustness_area)
    p = sweeps.add_parser('angle', parents=[common], help='beam tilt (radians)')
    p.add_argument('scheme')
    _add_sweep_options(p)
    p.add_argument('--model', choices=ANGLE_MODELS, default='transverse_accumulation')
    p.add_argument('--eta-t', type=float, help='transverse Lamb-Dicke parameter (default: eta)')
    p.add_argument('--phi-b', type=float, help='hold the second beam at this angle')
    p.set_defaults(handler=cmd_robustness_angle)

    optics = commands.add_parser('optics', help='splitter networks and energy budgets')
    actions = optics.add_subparsers(dest='action', metavar='action', parser_class=ArgumentParser)
    actions.required = True
    p = actions.add_parser('compile', parents=[common], help='incident pulse train of a network')
    p.add_argument('--network', required=True)
    p.add_argument('--pulses', type=int, default=1, help='emitted laser pulses')
    p.add_argument('--area', type=float, help='emitted pulse area (default: pi pulses at the ions)')
    p.set_defaults(handler=cmd_optics_compile)
    p = actions.add_parser('check', parents=[common], help='whether a network delivers a scheme')
    p.add_argument('--network', required=True)
    p.add_argument('--scheme', required=True)
    p.add_argument('--pulses', type=int, default=1)
    p.set_defaults(handler=cmd_optics_check)
    p = actions.add_parser('budget', parents=[common], help='pulse-area budget')
    p.add_argument('--pairs', type=int)
    p.add_argument('--scheme')
    p.add_argument('--overhead', type=float, default=2.0)
    p.add_argument('--area', type=float, help='available area (default: --max-area)')
    p.add_argument('--abc', type=_int_list, help='also report the largest symmetric scale')
    p.set_defaults(handler=cmd_optics_budget)
    p = actions.add_parser('network', parents=[common], help='network realizing a family instance')
    _add_family_options(p)
    p.add_argument('--values', type=_float_list, help='free values of the family instance')
    p.add_argument('--overhead', type=float, default=2.0)
    p.add_argument('--grouping-delay', type=float, default=0.0, help='delay of grouping loops (seconds)')
    p.set_defaults(handler=cmd_optics_network)

    p = commands.add_parser('replay', help='re-run a recorded manifest')
    p.add_argument('manifest')
    p.add_argument('--out', help='output directory (default: the recorded one)')
    p.add_argument('-v', '--verbose', action='store_true')
    p.set_defaults(handler=cmd_replay)
    return parser


def _configure_logging(verbose: bool):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT)
    logging.captureWarnings(True)


def _command_name(args) -> str:
    return ' '.join(filter(None, (args.command, getattr(args, 'sweep', None), getattr(args, 'action', None))))


def _recorded_options(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in UNRECORDED_OPTIONS + PATH_OPTIONS}


def _input_paths(args) -> typing.List[str]:
    return [getattr(args, k) for k in PATH_OPTIONS if getattr(args, k, None)]


def _exit_code(e: Exception) -> int:
    if isinstance(e, SchemeParseError):
        logger.error(f'Parse error: {e}')
        return EXIT_PARSE
    if isinstance(e, ValueError):
        logger.error(f'Invalid input: {e}')
        return EXIT_INVARIANT
    if isinstance(e, InfeasibleError):
        logger.error(f'Infeasible: {e}')
        return EXIT_INFEASIBLE
    logger.exception(f'Internal error: {e}')
    return EXIT_INTERNAL


def main(argv: typing.Sequence[str] = None) -> int:
    """
    ### Description:

    Entry point of the `pyfastgate` command.

    ### Args:

    `argv`: command-line arguments without the program name. Default: `sys.argv[1:]`.

    ### Returns:

    The exit code
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except CommandLineError as e:
        sys.stderr.write(f'{e}\n')
        return EXIT_PARSE
    except SystemExit as e:
        return EXIT_OK if not e.code else EXIT_PARSE
    _configure_logging(args.verbose)

    if args.handler is cmd_replay:
        try:
            return cmd_replay(args)
        except Exception as e:
            return _exit_code(e)

    start = time.perf_counter()
    out_dir = pathlib.Path(args.out)
    manifest = None
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        manifest = RunManifest.for_run(_command_name(args), argv, _input_paths(args), args.seed,
                                       _recorded_options(args), str(out_dir), __version__)
        ctx = RunContext(trap=_trap_params(args), laser=_laser_params(args),
                         artifacts=Artifacts(out_dir, manifest.digest(), args.format))
        summary = args.handler(args, ctx)
        print(json.dumps(summary, indent=2, sort_keys=True, default=json_default))
        return EXIT_OK
    except Exception as e:
        return _exit_code(e)
    finally:
        if manifest is not None:
            manifest.duration_s = time.perf_counter() - start
            manifest.write(out_dir / MANIFEST_NAME)


if __name__ == '__main__':
    sys.exit(main())
