"""
Beam-splitter networks, the pulse trains they deliver and pulse-area budgets
"""
