"""
Example uses of `pyfastgate`, each runnable through its `run()` function
"""
