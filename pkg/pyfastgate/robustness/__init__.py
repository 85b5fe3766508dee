"""
Sweeps of systematic timing, pulse-area and beam-angle errors
"""
