"""
Randomized check of the discrete comparison principle: raising every
forcing by ``g >= 0`` can only raise the solution, and nonnegative forcings
give nonnegative solutions.
"""

import logging

import numpy as np

from isaacsfd.base import ComparisonViolation
from isaacsfd.operators import DiscreteOperator
from isaacsfd.solvers._solver_base import SolverConfig
from isaacsfd.solvers.driver import ensure_converged, solve_operator

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['check_comparison']


def _witness(grid, row, value):
    index = int(grid.interior[row])
    return {'index': index, 'point': tuple(grid.points[index].tolist()), 'value': float(value)}


def check_comparison(problem, grid, trials, config=None, seed=0, cache=None):
    """
    Solve pairs of problems with forcings ``f + s`` and ``f + s + g``.

    Trial 0 uses ``s = g = 0``; later trials draw ``s`` uniformly in
    ``[-1, 1]`` and ``g`` uniformly in ``[0, 1]`` per interior point, both
    applied to every control pair.

    Returns
    -------
    dict
        ``trials``, ``min_increase`` (smallest ``v[f+s+g] - v[f+s]``),
        ``increases`` (the smallest increase of each trial), ``tol`` and
        ``sign_checked`` (whether every forcing of the problem is
        nonnegative, in which case ``v[f] >= -2 tol`` was asserted).

    Raises
    ------
    ComparisonViolation
        With the witness point of the first violation.
    MaxIterExceeded
        If some solve does not converge.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    config = SolverConfig() if config is None else config
    rng = np.random.default_rng(seed)
    operator = DiscreteOperator(problem, grid, cache=cache, basis_floor=config.basis_floor)
    n = grid.n_interior

    base, report = ensure_converged(*solve_operator(operator, config))
    tol = report.tol
    forcings = np.array([operator.forcing(i, j) for i, j in problem.pairs()])
    sign_checked = bool(np.all(forcings >= 0))
    if sign_checked:
        low = base.interior_values()
        row = int(np.argmin(low))
        if low[row] < -2 * tol:
            raise ComparisonViolation(f"Nonnegative forcing gave a solution value {low[row]:.3e}",
                                      _witness(grid, row, low[row]))

    increases = []
    for trial in range(trials):
        if trial == 0:
            shift, bump = np.zeros(n), np.zeros(n)
        else:
            shift, bump = rng.uniform(-1.0, 1.0, n), rng.uniform(0.0, 1.0, n)
        lower, report_lower = ensure_converged(*solve_operator(operator.with_forcing_shift(shift), config))
        upper, report_upper = ensure_converged(*solve_operator(operator.with_forcing_shift(shift + bump), config))
        slack = 2 * max(report_lower.tol, report_upper.tol)
        increase = upper.interior_values() - lower.interior_values()
        row = int(np.argmin(increase))
        increases.append(float(increase[row]))
        if increase[row] < -slack:
            raise ComparisonViolation(f"Trial {trial}: larger forcing gave a smaller solution by {-increase[row]:.3e}",
                                      _witness(grid, row, increase[row]))
        log.debug("Comparison trial %d: min increase %.3e", trial, increase[row])
    min_increase = min(increases)
    log.info("Comparison principle held in %d trials (min increase %.3e)", trials, min_increase)
    return {'trials': trials, 'min_increase': min_increase, 'increases': increases, 'tol': tol,
            'sign_checked': sign_checked}
