"""
File input/output and run manifests for `pyfastgate`
"""
