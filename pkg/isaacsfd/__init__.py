"""
IsaacsFD
--------
Monotone finite-difference schemes for uniformly elliptic Isaacs equations
on bounded domains, with solvers and convergence experiments.
"""

__version__ = '0.1.0'
