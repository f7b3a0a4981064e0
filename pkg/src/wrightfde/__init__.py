"""Monte Carlo solvers for sequential-Caputo fractional differential equations."""

__version__ = "0.1.0"
