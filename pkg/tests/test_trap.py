import numpy as np
import pytest

from pyfastgate.core.param import Param
from pyfastgate.core.param_setup import ParamSetup
from pyfastgate.core.trap import (LaserParams, TrapParams, convert_time, convert_time_inverse, mirror_displacement,
                                  pulse_spacing_trap_periods)


def test_default_trap_mode_parameters():
    trap = TrapParams()
    assert trap.eta == 0.2
    assert trap.eta_c == pytest.approx(0.2 / np.sqrt(2))
    assert trap.eta_r == pytest.approx(0.2 * (4 / 3) ** 0.25)
    assert trap.nu_r == pytest.approx(np.sqrt(3) * trap.nu)
    assert trap.trap_period == pytest.approx(1 / 3.52e6)


@pytest.mark.parametrize('field, value', [('eta', 0.0), ('eta', -0.1), ('nu', 0.0), ('nbar', -1.0)])
def test_invalid_trap_parameters(field, value):
    with pytest.raises(ValueError):
        TrapParams(**{field: value})


def test_invalid_laser_parameters():
    with pytest.raises(ValueError):
        LaserParams(rep_rate=0.0)
    with pytest.raises(ValueError):
        LaserParams(max_area=-1.0)


def test_time_conversion_round_trip():
    trap = TrapParams()
    t = np.array([0.0, 0.25, 1.5])
    np.testing.assert_allclose(convert_time_inverse(convert_time(t, trap), trap), t, atol=1e-15)
    assert convert_time(1.0, trap) == pytest.approx(2.8409e-7, rel=1e-4)


def test_pulse_spacing_in_trap_periods():
    assert pulse_spacing_trap_periods(LaserParams(), TrapParams()) == pytest.approx(3.52e6 / 3.0e8)


def test_mirror_displacement_of_14_ps():
    assert mirror_displacement(14e-12) == pytest.approx(4.197e-3, rel=1e-3)


def test_parameter_documents():
    trap = TrapParams.from_dict({'eta': 0.1, 'nbar': 0.5})
    assert trap.eta == 0.1 and trap.nbar == 0.5
    assert TrapParams.from_dict(trap.to_dict()) == trap
    with pytest.raises(ValueError):
        TrapParams.from_dict({'eta': 0.1, 'omega': 1.0})
    with pytest.raises(ValueError):
        LaserParams.from_dict({'power': 1.0})


def test_param_bounds_must_be_ordered():
    with pytest.raises(ValueError):
        Param(0.5, bounds=[1.0, 0.0])
    with pytest.raises(ValueError):
        Param(0.5, units='seconds')


def test_param_setup_normalized_override():
    setup = ParamSetup({'d1': Param(0.5, bounds=[0.0, 2.0]), 'd2': Param(1.0, bounds=[0.0, 4.0], active=False)})
    assert setup.parameter_info['names'] == ['d1']
    setup.override_parameters([0.75], normalized=True)
    assert setup.param_dict['d1'].value == pytest.approx(1.5)
    np.testing.assert_allclose(setup.full_vector([0.2]), [0.2, 1.0])
    with pytest.raises(ValueError):
        setup.override_parameters([0.1, 0.2])
