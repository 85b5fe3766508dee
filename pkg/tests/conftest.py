import numpy as np
import pytest
from scipy.optimize import brentq

from pyfastgate.core.conditions import TARGET_PHASE, phase_theta
from pyfastgate.core.trap import TrapParams
from pyfastgate.schemes.families import SchemeFamily

HALF_PERIOD = 0.5
STRETCH_HALF_PERIOD = 1 / (2 * np.sqrt(3))


@pytest.fixture(scope='session')
def trap() -> TrapParams:
    return TrapParams()


@pytest.fixture(scope='session')
def direct_family(trap) -> SchemeFamily:
    return SchemeFamily('direct_split', n_delays=3, trap=trap)


@pytest.fixture(scope='session')
def exact_direct_delays(direct_family, trap) -> np.ndarray:
    """Loop delays of an 8-pair direct scheme with both modes closed and a phase of exactly pi/4.

    Delays of half a centre-of-mass period and half a stretch period close both modes for any third delay, which is
    then fixed by a root find on the phase.
    """
    def phase_mismatch(x):
        return phase_theta(direct_family.generate([HALF_PERIOD, STRETCH_HALF_PERIOD, x]), trap) - TARGET_PHASE

    x = brentq(phase_mismatch, 1e-6, HALF_PERIOD + STRETCH_HALF_PERIOD + 0.05, xtol=1e-15)
    return np.array([HALF_PERIOD, STRETCH_HALF_PERIOD, x])


@pytest.fixture(scope='session')
def exact_direct_scheme(direct_family, exact_direct_delays):
    return direct_family.generate(exact_direct_delays)
