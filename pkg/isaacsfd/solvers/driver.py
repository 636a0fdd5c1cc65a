"""
Entry points of the solver package.
"""

import logging

import numpy as np

from isaacsfd.base import ConfigurationError, DegenerateStencil, MaxIterExceeded
from isaacsfd.operators import DiscreteOperator
from isaacsfd.solvers._solver_base import SolverConfig
from isaacsfd.solvers.iterative import GaussSeidelSolver, JacobiSolver
from isaacsfd.solvers.policy import PolicyIterationSolver
from isaacsfd.stencil import DecompositionCache

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['SOLVERS', 'solve', 'solve_operator', 'residual', 'local_timestep', 'ensure_converged']

SOLVERS = {
    'jacobi': JacobiSolver,
    'gauss-seidel': GaussSeidelSolver,
    'policy': PolicyIterationSolver,
}


def solve_operator(operator, config=None, initial=None):
    """
    Solve ``H_h[v] = 0`` for an assembled :class:`~isaacsfd.operators.DiscreteOperator`.

    Returns
    -------
    solution : GridFunction
    report : SolverReport
        ``report.converged`` is False when the iteration cap was reached.
    """
    config = SolverConfig() if config is None else config
    try:
        solver_class = SOLVERS[config.method]
    except KeyError:
        raise ConfigurationError(f"Unknown solver method {config.method!r}") from None
    return solver_class(operator, config).solve(initial)


def solve(problem, grid, config=None, initial=None, cache=None):
    """
    Solve the discrete problem on ``grid`` with zero boundary values.

    Parameters
    ----------
    problem : IsaacsProblem
    grid : Grid
    config : SolverConfig, optional
    initial : GridFunction or array_like, optional
        Starting iterate; interior values are used, boundary values are zero.
    cache : DecompositionCache, optional
        Decomposition memo shared between solves on the same direction set.

    Returns
    -------
    solution : GridFunction
    report : SolverReport

    Raises
    ------
    InsufficientStencil
        If some diffusion has no nonnegative decomposition over the grid's directions.
    """
    config = SolverConfig() if config is None else config
    log.info("Solving %s on %r with %s", problem.name or 'problem', grid, config.method)
    operator = DiscreteOperator(problem, grid, cache=cache, basis_floor=config.basis_floor)
    return solve_operator(operator, config, initial)


def ensure_converged(solution, report):
    """
    Raises
    ------
    MaxIterExceeded
        Carrying the best iterate and its report when the run did not converge.
    """
    if not report.converged:
        raise MaxIterExceeded(f"{report.method} did not reach tol {report.tol:.3e} in {report.iterations} "
                              f"iterations (residual {report.residual:.3e})", solution, report)
    return solution, report


def residual(problem, v, cache=None):
    """``max over G_h^o of |H_h[v]|``."""
    return DiscreteOperator(problem, v.grid, cache=cache).residual(v.values)


def local_timestep(problem, x, h, lambda_set, theta=1.0, cache=None):
    """
    ``theta / max_{ab} [sum 2 a_k / h^2 + sum bbar_k / h + c]`` at the point ``x``.

    Raises
    ------
    DegenerateStencil
        If the denominator vanishes.
    InsufficientStencil
    """
    cache = DecompositionCache(lambda_set) if cache is None else cache
    x = np.asarray(x, dtype=float)
    denominator = 0.0
    for i, j in problem.pairs():
        a, b, c, _ = problem.evaluate(i, j, x)
        dec = cache.get(a, b)
        denominator = max(denominator, 2.0 * dec.second_order.sum() / h ** 2 + dec.first_order.sum() / h + c)
    if denominator <= 0:
        raise DegenerateStencil(f"Zero diagonal coefficient at {x.tolist()}")
    return theta / denominator
