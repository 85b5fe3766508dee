from pyfastgate.core.phase_space import MODES, trajectory
from pyfastgate.core.trap import TrapParams
from pyfastgate.optimize.crs import OptimizerConfig, optimize
from pyfastgate.schemes.families import SchemeFamily


def run(n_values=(4, 32), config: OptimizerConfig = OptimizerConfig(n_starts=4, max_evaluations=4000)):
    """
    ### Description:

    Optimizes the GZC scheme for each scale in `n_values` and traces both motional modes in the rotating frame.
    Both trajectories of a feasible scheme return to the origin, and the difference of their enclosed phases is the
    gate phase.

    ### Returns:

    A `dict` mapping each scale to its `{mode: pyfastgate.core.phase_space.Trajectory}`
    """
    trap = TrapParams()
    trajectories = {}
    for n in n_values:
        result = optimize(SchemeFamily('gzc', n=n, trap=trap), trap, config=config)
        if result.scheme is None:
            print(f'GZC n = {n}: no valid scheme found')
            continue
        print(f'GZC n = {n}: T_G = {result.report.gate_time:.4f} T_P, E = {result.report.e_total:.2e}, '
              f'delays = {[round(float(v), 5) for v in result.delays]}')
        trajectories[n] = {}
        for mode in MODES:
            path = trajectory(result.scheme, trap, mode)
            trajectories[n][mode] = path
            print(f'    {mode}: closed = {path.is_closed(1e-6)}, phase = {path.accumulated_phase:.5f}, '
                  f'area = {path.enclosed_area():.5f}')
    return trajectories


if __name__ == '__main__':
    run()
