from pyfastgate.core.trap import LaserParams, TrapParams
from pyfastgate.optics.splitter import check_realizability, compile_network, network_of, pulse_area_for_pi_pairs
from pyfastgate.optimize.crs import OptimizerConfig, optimize
from pyfastgate.optimize.study import delay_structure_report
from pyfastgate.robustness.sweeps import timing_sweep
from pyfastgate.schemes.families import SchemeFamily


def run(config: OptimizerConfig = OptimizerConfig(n_starts=8, max_evaluations=6000)):
    """
    ### Description:

    Optimizes the 8-pair direct scheme (one laser pulse through three delay loops), reports which delays sit on
    multiples of half a mode period, builds the splitter network for the solution, confirms it delivers the scheme,
    and sweeps a common delay-line shift to find the timing tolerance.

    ### Returns:

    The `pyfastgate.robustness.sweeps.SweepResult` of the timing sweep
    """
    trap, laser = TrapParams(), LaserParams()
    family = SchemeFamily('direct_split', n_delays=3, trap=trap, rep_rate=laser.rep_rate)
    result = optimize(family, trap, laser, config)
    print(f'T_G = {result.report.gate_time:.4f} T_P, E = {result.report.e_total:.2e}')
    for match in delay_structure_report(result.delays):
        print(f'    delay {match.delay:.5f} T_P: {list(match.matches) or "no structure constant"}')

    network = network_of(family, result.delays)
    train = compile_network(network, laser, area=pulse_area_for_pi_pairs(network))
    print(f'Realizable: {check_realizability(result.scheme, train, trap).ok} ({train.n_entries} pulse pairs)')

    sweep = timing_sweep(network, family, (-5e-11, 5e-11, 21), trap, laser, result.delays)
    print(f'Timing threshold: {sweep.threshold} s ({sweep.extra.get("mirror_displacement_m")} m of mirror travel)')
    return sweep


if __name__ == '__main__':
    run()
