"""
Controlled random search over scheme families and gate-time scaling studies
"""
