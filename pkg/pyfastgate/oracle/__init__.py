"""
Truncated Fock-space simulation of a scheme and the fidelities computed from it
"""
