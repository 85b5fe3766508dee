import numpy as np


class Param:

    def __init__(self, value: float, units: str or None = 'trap_periods',
                 bounds: list or np.ndarray = np.array([0.0, 5.0]), active: bool = True, linked: bool = False,
                 name: str = None):
        """
        ### Description:

        This is the class used to define the free variables of a scheme family in `pyfastgate`: the loop delays of
        the split-pulse families, the \\(\\tau_j\\) of the symmetric families and the kick times of a free search.

        ### Args:

        `value`: a `float` representing the value of the parameter

        `units`: a `str` naming the unit of the value. Must be one of `"trap_periods"` or `None`. Default:
        `"trap_periods"`.

        `bounds`: a `list` or 1D `np.ndarray` with two elements of the form `[<lower bound>, <upper bound>]`. Used as
        the search box of `pyfastgate.optimize.crs` and for normalization during parameter extraction. Default:
        `np.array([0.0, 5.0])`.

        `active`: a `bool` stating whether the parameter is active (used in parameter extraction: if inactive,
        the parameter keeps its value and is not searched). Default: `True`.

        `linked`: a `bool` stating whether the parameter is set by another parameter. If `True`, the
        parameter will not be extracted. Default: `False`.

        `name`: an optional `str` that gives the name of the parameter. Set by the owning parameter set.

        ### Returns:

        An instance of the `pyfastgate.core.param.Param` class.
        """
        if units not in ('trap_periods', None):
            raise ValueError(f'Param units must be "trap_periods" or None. A value of {units} was entered.')
        bounds = np.asarray(bounds, dtype=float)
        if bounds.shape != (2,) or not bounds[0] < bounds[1]:
            raise ValueError(f'Param bounds must be of the form [low, high] with low < high. A value of '
                             f'{list(bounds)} was entered.')
        self.value = float(value)
        self.units = units
        self.bounds = bounds
        self.active = active
        self.linked = linked
        self.name = name

    def __repr__(self):
        return f'Param({self.name}={self.value}, bounds={list(self.bounds)}, active={self.active})'
