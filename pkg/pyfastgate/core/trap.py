"""
Physical parameters of the trap and of the pulsed laser, and the conversion between trap periods and seconds.
All gate times inside `pyfastgate` are expressed in centre-of-mass trap periods \\(T_P = 2\\pi/\\nu\\).
"""
import dataclasses

import numpy as np

SPEED_OF_LIGHT = 299792458.0


@dataclasses.dataclass(frozen=True)
class TrapParams:
    """
    ### Description:

    Two-ion trap described by the Lamb-Dicke parameter `eta`, the centre-of-mass angular trap frequency `nu`
    (rad/s) and the mean thermal phonon number `nbar` of each axial mode. The stretch-mode quantities are derived.

    ### Args:

    `eta`: ( \\(\\eta\\) ) Lamb-Dicke parameter. Default: `0.2`.

    `nu`: ( \\(\\nu\\) ) centre-of-mass angular trap frequency (rad/s). Default: `2*np.pi*3.52e6`.

    `nbar`: ( \\(\\bar{n}\\) ) mean thermal occupation per mode. Default: `0.1`.
    """
    eta: float = 0.2
    nu: float = 2 * np.pi * 3.52e6
    nbar: float = 0.1

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f'The Lamb-Dicke parameter, eta, must be positive. A value of {self.eta} was entered.')
        if not self.nu > 0:
            raise ValueError(f'The trap frequency, nu, must be positive. A value of {self.nu} was entered.')
        if not self.nbar >= 0:
            raise ValueError(f'The thermal occupation, nbar, must be non-negative. A value of {self.nbar} was '
                             f'entered.')

    @property
    def eta_c(self) -> float:
        return self.eta / np.sqrt(2)

    @property
    def eta_r(self) -> float:
        return self.eta * (4 / 3) ** 0.25

    @property
    def nu_r(self) -> float:
        return np.sqrt(3) * self.nu

    @property
    def trap_period(self) -> float:
        """Centre-of-mass trap period in seconds."""
        return 2 * np.pi / self.nu

    def replace(self, **changes) -> 'TrapParams':
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> 'TrapParams':
        unknown = set(d) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f'Unknown trap parameter(s): {sorted(unknown)}')
        return cls(**d)


@dataclasses.dataclass(frozen=True)
class LaserParams:
    """
    ### Description:

    Pulsed laser feeding the splitter network.

    ### Args:

    `rep_rate`: pulse repetition rate (Hz). Default: `3.0e8`.

    `max_area`: maximum emitted pulse area (radians of Bloch rotation). The default of \\(32\\pi\\) carries the
    energy of 1024 \\(\\pi\\) pulses.

    `pulse_duration`: emitted pulse duration (s). Informational only. Default: `1e-12`.
    """
    rep_rate: float = 3.0e8
    max_area: float = 32 * np.pi
    pulse_duration: float = 1e-12

    def __post_init__(self):
        if not self.rep_rate > 0:
            raise ValueError(f'The repetition rate, rep_rate, must be positive. A value of {self.rep_rate} was '
                             f'entered.')
        if not self.max_area > 0:
            raise ValueError(f'The maximum pulse area, max_area, must be positive. A value of {self.max_area} was '
                             f'entered.')

    @property
    def pulse_spacing(self) -> float:
        """Time between emitted pulses in seconds."""
        return 1 / self.rep_rate

    def replace(self, **changes) -> 'LaserParams':
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> 'LaserParams':
        unknown = set(d) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ValueError(f'Unknown laser parameter(s): {sorted(unknown)}')
        return cls(**d)


def convert_time(t_trap_periods, params: TrapParams):
    """
    ### Description:

    Converts a time (or array of times) from trap periods to seconds: \\(t_s = t \\cdot 2\\pi/\\nu\\).

    ### Args:

    `t_trap_periods`: time in units of \\(T_P\\)

    `params`: a `pyfastgate.core.trap.TrapParams`

    ### Returns:

    The time in seconds
    """
    return np.multiply(t_trap_periods, params.trap_period)


def convert_time_inverse(t_seconds, params: TrapParams):
    """Inverse of `convert_time`: seconds to trap periods."""
    return np.divide(t_seconds, params.trap_period)


def pulse_spacing_trap_periods(laser: LaserParams, params: TrapParams) -> float:
    """Time between emitted laser pulses in trap periods, \\(1/(f_{rep} T_P)\\)."""
    return float(convert_time_inverse(laser.pulse_spacing, params))


def mirror_displacement(delta_s):
    """Path-length error (m) corresponding to a systematic delay error `delta_s` (s)."""
    return np.multiply(SPEED_OF_LIGHT, delta_s)
