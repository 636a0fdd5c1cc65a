"""
Solvers of the discrete Dirichlet problem ``H_h[v] = 0`` on ``G_h^o``,
``v = 0`` on ``dG_h``: damped Jacobi and Gauss-Seidel sweeps, policy
iteration, and the comparison-principle check.
"""

from isaacsfd.solvers._solver_base import METHODS, MonotoneSolver, SolverConfig, SolverReport
from isaacsfd.solvers.iterative import GaussSeidelSolver, JacobiSolver
from isaacsfd.solvers.policy import PolicyIterationSolver
from isaacsfd.solvers.driver import SOLVERS, ensure_converged, local_timestep, residual, solve, solve_operator
from isaacsfd.solvers.comparison import check_comparison

__all__ = ['METHODS', 'MonotoneSolver', 'SolverConfig', 'SolverReport', 'GaussSeidelSolver', 'JacobiSolver',
           'PolicyIterationSolver', 'SOLVERS', 'ensure_converged', 'local_timestep', 'residual', 'solve',
           'solve_operator', 'check_comparison']
