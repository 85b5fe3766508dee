"""
Parametrized scheme families searched by `pyfastgate.optimize`
"""
