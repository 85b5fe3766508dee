"""

## Welcome
To the documentation page for `pyfastgate`, a Python 3 package for designing ultrafast two-ion phase gates driven by
trains of counter-propagating \\(\\pi\\)-pulse pairs, where the trains are produced by splitting a few laser pulses in a
cascade of unequal-path interferometer loops.

## Overview

A gate is described by a `pyfastgate.core.kick_scheme.KickScheme`: groups of \\(z_k\\) simultaneous pulse pairs at
times \\(t_k\\) (in trap periods). From a scheme `pyfastgate` computes

- the closed-form control conditions (accumulated phase \\(\\Theta\\), closure residuals of both motional modes, the
  error estimate \\(E\\) and the cost \\(J = T_G + A e^{BE}\\)) in `pyfastgate.core.conditions`
- phase-space trajectories of the centre-of-mass and stretch modes in `pyfastgate.core.phase_space`
- the pulse train a splitter network delivers, and whether it realizes the scheme, in `pyfastgate.optics`
- the fastest feasible member of a parametrized scheme family (`pyfastgate.schemes.families.SchemeFamily`) with a
  seeded controlled random search in `pyfastgate.optimize`
- process and worst-case fidelities from a truncated Fock-space simulation in `pyfastgate.oracle`
- thresholds for systematic timing, pulse-area and beam-angle errors in `pyfastgate.robustness`

Free variables of a family are `pyfastgate.core.param.Param` objects, so a family can be swept or optimized by
overriding a flat vector of values. Every computation is also reachable from the `pyfastgate` command
(`pyfastgate.cli`), which writes CSV/JSON artifacts stamped with a run manifest.

## Version Notes

### 1.0.0

- Control conditions, scheme families, splitter networks, optimizer, Fock-space oracle, robustness sweeps and CLI

"""
__version__ = '1.0.0'
