from pyfastgate.core.trap import TrapParams
from pyfastgate.optimize.crs import OptimizerConfig
from pyfastgate.optimize.study import scaling_study
from pyfastgate.schemes.families import SchemeFamily


def run(config: OptimizerConfig = OptimizerConfig(n_starts=4, max_evaluations=6000)):
    """
    ### Description:

    Gate time against pulse-pair count for the (1,2,2) symmetric family and the GZC family, each fitted with a power
    law \\(T_G = k N^p\\).

    ### Returns:

    A `dict` mapping the family label to its `pyfastgate.optimize.study.ScalingStudy`
    """
    trap = TrapParams()
    studies = {
        '(1,2,2)': scaling_study(SchemeFamily('symmetric_abc', abc=(1, 2, 2), trap=trap), [2, 4, 8, 16, 32], trap,
                                 config=config),
        'GZC': scaling_study(SchemeFamily('gzc', trap=trap), list(range(1, 9)), trap, config=config),
    }
    for label, study in studies.items():
        print(f'{label}: T_G = {study.fit.prefactor:.3f} N^{study.fit.exponent:.3f}')
        for row in study.rows:
            print(f'    n = {row.n:3d}  N = {row.n_pairs:4d}  T_G = {row.gate_time:.4f} T_P  E = {row.error:.2e}')
    return studies


if __name__ == '__main__':
    run()
