"""
`pyfastgate.core` holds the trap parameters, kick schemes, control conditions and phase-space trajectories.
"""
