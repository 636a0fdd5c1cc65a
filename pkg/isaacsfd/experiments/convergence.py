"""
Convergence studies
-------------------
Solve one problem on a decreasing list of mesh sizes, measure the sup-norm
error against the exact solution or against the finest solution, and fit
the empirical rate ``error ~ h^beta``.
"""

import logging
import time
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from isaacsfd.base import ConfigurationError, DegenerateFit, NonNestedGrids, StencilEscape
from isaacsfd.grid import restrict, sup_diff
from isaacsfd.solvers import ensure_converged, solve
from isaacsfd.stencil import DecompositionCache
from isaacsfd.tools.data_processing import fit_rate, is_dyadic_chain

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['ConvergenceRow', 'ConvergenceTable', 'run_convergence']

ConvergenceRow = namedtuple('ConvergenceRow', ['h', 'n_grid', 'n_interior', 'error', 'iterations', 'seconds'])

# errors at or below this multiple of the solver tolerance count as exact
EXACT_FACTOR = 10.0


class ConvergenceTable():
    """
    Rows in decreasing ``h`` with the fitted rate.

    Attributes
    ----------
    rows : list of ConvergenceRow
    fitted_rate, fit_residual : float or None
        Defined when at least three errors lie above the tolerance floor.
    exact_to_tolerance : bool
        Every error is within ``10 tol``; no rate is fitted.
    tol : float
        Largest solver tolerance over the rows.
    """
    def __init__(self, rows, tol, reference):
        self.rows = sorted(rows, key=lambda row: -row.h)
        self.tol = tol
        self.reference = reference
        self.fitted_rate = None
        self.fit_residual = None
        self.exact_to_tolerance = False

    def errors(self):
        return np.array([row.error for row in self.rows])

    def fit(self):
        floor = EXACT_FACTOR * self.tol
        pairs = [(row.h, row.error) for row in self.rows if row.error > floor]
        if all(row.error <= floor for row in self.rows):
            self.exact_to_tolerance = True
            log.info("All errors within %.3e; reported as exact to tolerance", floor)
            return self
        try:
            self.fitted_rate, self.fit_residual = fit_rate(pairs)
        except DegenerateFit as error:
            log.warning("No rate fitted: %s", error)
        else:
            log.info("Fitted rate %.4f (fit residual %.3e)", self.fitted_rate, self.fit_residual)
        return self

    def to_dict(self):
        return {'rows': [row._asdict() for row in self.rows], 'fitted_rate': self.fitted_rate,
                'fit_residual': self.fit_residual, 'exact_to_tolerance': self.exact_to_tolerance,
                'tol': self.tol, 'reference': self.reference}


def _run_one(config, problem, h, lambda_set, cache):
    start = time.perf_counter()
    grid = config.build_grid(h, lambda_set)
    solution, report = ensure_converged(*solve(problem, grid, config.solver, cache=cache))
    return grid, solution, report, time.perf_counter() - start


def _error_against_finest(solution, finest):
    grid = solution.grid
    try:
        fine_index = np.array([finest.grid.locate(p) for p in grid.points])
    except StencilEscape:
        raise NonNestedGrids(f"Points of the grid with h={grid.h} are missing at h={finest.grid.h}") from None
    return float(np.max(np.abs(solution.values - finest.values[fine_index])))


def run_convergence(config):
    """
    Parameters
    ----------
    config : ExperimentConfig

    Returns
    -------
    ConvergenceTable

    Raises
    ------
    ConfigurationError
        With fewer than two mesh sizes, or an exact reference the problem lacks.
    NonNestedGrids
        For a finest reference on mesh sizes that are not power-of-two multiples.
    MaxIterExceeded
        If some solve does not converge.
    """
    h_list = config.resolved_h_list()
    if len(h_list) < 2:
        raise ConfigurationError("A convergence study needs at least two mesh sizes")
    problem = config.build_problem()
    if config.reference == 'exact' and problem.exact_solution is None:
        raise ConfigurationError(f"{problem.name} has no exact solution; use reference = finest")
    if config.reference == 'finest' and not is_dyadic_chain(h_list):
        raise NonNestedGrids(f"Mesh sizes {h_list} are not nested")

    lambda_set = config.direction_set()
    cache = DecompositionCache(lambda_set, config.solver.basis_floor)
    log.info("Convergence study of %r over h = %s (%s reference)", problem, list(h_list), config.reference)

    def task(h):
        return _run_one(config, problem, h, lambda_set, cache)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            runs = list(pool.map(task, h_list))
    else:
        runs = [task(h) for h in h_list]

    finest = runs[-1][1]
    rows = []
    for h, (grid, solution, report, seconds) in zip(h_list, runs):
        if config.reference == 'exact':
            error = sup_diff(solution, restrict(problem.exact_solution, grid))
        else:
            error = _error_against_finest(solution, finest)
        row = ConvergenceRow(h, grid.size, grid.n_interior, error, report.iterations,
                             seconds if config.timing else 0.0)
        log.info("h=%g  n_grid=%d  n_interior=%d  error=%.6e  iterations=%d", h, grid.size,
                 grid.n_interior, error, report.iterations)
        rows.append(row)
    tol = max(run[2].tol for run in runs)
    return ConvergenceTable(rows, tol, config.reference).fit()
