import typing

import numpy as np

from pyfastgate.core.param import Param


class ParamSetup:
    def __init__(self, param_dict: typing.Dict[str, Param]):
        """
        ### Description:

        This class holds the free variables of a scheme family and prepares them for extraction or override.

        ### Args:

        `param_dict`: an ordered `dict` mapping names to `pyfastgate.core.param.Param`s. The insertion order is the
        order of the flat parameter vector used by the optimizer.
        """
        if not isinstance(param_dict, dict):
            raise TypeError(f'ParamSetup requires a dictionary of Params. Input type was {type(param_dict)}')
        self.param_dict = param_dict
        self.active_unlinked_params = None
        self.parameter_info = None
        self.extract_parameters()

    def extract_parameters(self):
        """
        ### Description:

        Collects the free delays of the family, i.e. every `Param` with `active=True` and `linked=False`, and
        tabulates their values, bounds and names in `parameter_info`. Dictionary keys become the `Param` names.

        ### Returns:

        The free `Param`s and the `parameter_info` table
        """
        for key, value in self.param_dict.items():
            if not isinstance(value, Param):
                raise TypeError(f'Entry {key} of the parameter dictionary is a {type(value)}, not a Param.')
            value.name = key
        self.active_unlinked_params = [param for param in self.param_dict.values()
                                       if param.active and not param.linked]
        self.parameter_info = {
            'values': [param.value for param in self.active_unlinked_params],
            'bounds': [param.bounds for param in self.active_unlinked_params],
            'names': [param.name for param in self.active_unlinked_params],
            'n_params': len(self.active_unlinked_params),
        }
        return self.active_unlinked_params, self.parameter_info

    def override_parameters(self, parameter_info_values: typing.Sequence[float], normalized: bool = False):
        """
        ### Description:

        Writes a point of the optimizer back into the free delays. With `normalized=True` the values are read as
        fractions of each `bounds` interval and mapped back to trap periods.

        ### Args:

        `parameter_info_values`: a sequence of values with which to override the active
        `pyfastgate.core.param.Param`s, in extraction order

        `normalized`: whether the values are fractions of the `pyfastgate.core.param.Param` `bounds`

        ### Returns:

        The updated `param_dict`
        """
        if len(parameter_info_values) != self.parameter_info['n_params']:
            raise ValueError(f'Expected {self.parameter_info["n_params"]} override values, '
                             f'got {len(parameter_info_values)}')
        for idx, name in enumerate(self.parameter_info['names']):
            if normalized:
                low, high = self.parameter_info['bounds'][idx]
                self.param_dict[name].value = float(np.multiply(parameter_info_values[idx], high - low) + low)
            else:
                self.param_dict[name].value = float(parameter_info_values[idx])
        self.extract_parameters()
        return self.param_dict

    def full_vector(self, active_values: typing.Sequence[float]) -> np.ndarray:
        """
        ### Description:

        Builds the vector of all parameter values (active and inactive, in dictionary order) with the active
        entries taken from `active_values`. Does not modify the stored values.
        """
        if len(active_values) != self.parameter_info['n_params']:
            raise ValueError(f'Expected {self.parameter_info["n_params"]} values, got {len(active_values)}')
        lookup = dict(zip(self.parameter_info['names'], active_values))
        return np.array([lookup.get(name, param.value) for name, param in self.param_dict.items()], dtype=float)
