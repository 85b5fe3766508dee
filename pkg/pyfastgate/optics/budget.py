"""Pulse-area budgets. Energy scales with the square of the area and a pulse pair needs two \\(\\pi\\) pulses."""
import typing

import numpy as np

from pyfastgate.core.errors import DomainError
from pyfastgate.core.kick_scheme import KickScheme


def _check_overhead(overhead_factor: float):
    if not overhead_factor >= 1:
        raise DomainError(f'The overhead factor must be at least 1. A value of {overhead_factor} was entered.')


def required_area(scheme: KickScheme or int, overhead_factor: float = 2.0) -> float:
    """
    ### Description:

    Emitted pulse area needed to deliver every pulse pair of a scheme from a single pulse:
    \\(\\pi\\sqrt{2 N_{pairs} \\cdot \\mathrm{overhead}}\\). With an overhead of 1 this is the lossless minimum.

    ### Args:

    `scheme`: a `pyfastgate.core.kick_scheme.KickScheme` or a pulse-pair count

    `overhead_factor`: energy overhead multiplier. Default: `2.0`.

    ### Returns:

    The area in radians
    """
    _check_overhead(overhead_factor)
    n_pairs = scheme.n_pairs if isinstance(scheme, KickScheme) else int(scheme)
    return float(np.pi * np.sqrt(2 * n_pairs * overhead_factor))


def max_pairs_for_area(area: float, overhead_factor: float = 2.0) -> int:
    """Largest pulse-pair count a pulse of `area` can feed: \\(\\lfloor A^2/(2\\pi^2 \\cdot \\mathrm{overhead})\\rfloor\\)."""
    if not area > 0:
        raise DomainError(f'The pulse area must be positive. A value of {area} was entered.')
    _check_overhead(overhead_factor)
    return int(np.floor(area ** 2 / (2 * np.pi ** 2 * overhead_factor) + 1e-9))


def max_scale_for_area(abc: typing.Sequence[int], area: float, overhead_factor: float = 2.0) -> int:
    """Largest scale \\(n\\) of a symmetric family whose \\(2n(a+b+c)\\) pairs fit in the budget."""
    return max_pairs_for_area(area, overhead_factor) // (2 * sum(int(w) for w in abc))
