"""
Truncation sandwich
-------------------
At a fixed mesh size, solve the base problem together with its max-fused
and min-fused truncations ``max(H, P - K)`` and ``min(H, -P[-.] + K)`` for
increasing ``K``. Their solutions must bracket the base solution and close
in on it monotonically as ``K`` grows; once ``K`` exceeds the Pucci
operator of the solution the truncation is inactive.
"""

import logging
from collections import namedtuple

import numpy as np

from isaacsfd.base import ConfigurationError, DegenerateFit, OrderingViolation
from isaacsfd.operators import DiscreteOperator
from isaacsfd.problems import MAX_FUSE, MIN_FUSE, fuse, make_pucci
from isaacsfd.solvers import ensure_converged, solve_operator
from isaacsfd.stencil import DecompositionCache
from isaacsfd.tools.data_processing import fit_rate

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['SandwichRow', 'SandwichReport', 'run_sandwich']

SandwichRow = namedtuple('SandwichRow', ['K', 'gap', 'upper_gap', 'lower_gap', 'ordering_ok',
                                         'upper_active', 'lower_active'])

SLACK_FACTOR = 10.0


class SandwichReport():
    """
    Attributes
    ----------
    h : float
    rows : list of SandwichRow
        ``gap = sup(v^{+K} - v^{-K})``; ``upper_active``/``lower_active``
        are the fractions of interior points where the Pucci part is optimal.
    decay_rate, decay_residual : float or None
        Exponent ``gamma`` of ``gap(K) ~ K^{-gamma}`` over positive ``K``.
    witnesses : list of dict
        Points where an ordering or monotonicity check failed.
    """
    def __init__(self, h, tol):
        self.h = h
        self.tol = tol
        self.rows = []
        self.witnesses = []
        self.decay_rate = None
        self.decay_residual = None

    @property
    def ordering_ok(self):
        return all(row.ordering_ok for row in self.rows)

    def inactive(self, K):
        row = next(r for r in self.rows if r.K == K)
        return row.upper_active == 0 and row.lower_active == 0

    def fit_decay(self):
        pairs = [(row.K, row.gap) for row in self.rows if row.K > 0 and row.gap > SLACK_FACTOR * self.tol]
        try:
            slope, self.decay_residual = fit_rate(pairs)
        except DegenerateFit as error:
            log.info("No K-decay fitted: %s", error)
        else:
            self.decay_rate = -slope
        return self

    def to_dict(self):
        return {'h': self.h, 'tol': self.tol, 'rows': [row._asdict() for row in self.rows],
                'ordering_ok': self.ordering_ok, 'decay_rate': self.decay_rate,
                'decay_residual': self.decay_residual, 'witnesses': self.witnesses}


def _first_violation(grid, excess, slack, label, K):
    """Witness of the largest ``excess`` above ``slack``, or None."""
    row = int(np.argmax(excess))
    if excess[row] <= slack:
        return None
    index = int(grid.interior[row])
    return {'index': index, 'point': tuple(grid.points[index].tolist()), 'K': K,
            'check': label, 'excess': float(excess[row])}


def run_sandwich(config, k_list=None):
    """
    Parameters
    ----------
    config : ExperimentConfig
        Uses ``config.h`` (or the default mesh size) and ``config.delta_hat``.
    k_list : sequence of float, optional
        Strictly increasing, nonnegative; ``config.k_list`` when omitted.

    Returns
    -------
    SandwichReport

    Raises
    ------
    OrderingViolation
        After all levels are solved, if some check failed; the exception's
        ``report`` attribute holds the full report.
    MaxIterExceeded
    """
    k_list = tuple(float(k) for k in (config.k_list if k_list is None else k_list))
    if not k_list or min(k_list) < 0 or any(a >= b for a, b in zip(k_list, k_list[1:])):
        raise ConfigurationError(f"K list must be nonnegative and strictly increasing, got {k_list}")
    problem = config.build_problem()
    lambda_set = config.direction_set()
    grid = config.build_grid(config.resolved_h(), lambda_set)
    pucci = make_pucci(config.delta_hat, lambda_set)
    cache = DecompositionCache(lambda_set, config.solver.basis_floor)
    log.info("Sandwich of %r at h=%g with %r, K = %s", problem, grid.h, pucci, list(k_list))

    base, base_report = ensure_converged(*solve_operator(DiscreteOperator(problem, grid, cache=cache),
                                                         config.solver))
    v = base.interior_values()
    report = SandwichReport(grid.h, base_report.tol)
    previous = None
    for K in k_list:
        upper_problem = fuse(problem, pucci, K, MAX_FUSE)
        lower_problem = fuse(problem, pucci, K, MIN_FUSE)
        upper_op = DiscreteOperator(upper_problem, grid, cache=cache)
        lower_op = DiscreteOperator(lower_problem, grid, cache=cache)
        upper, upper_report = ensure_converged(*solve_operator(upper_op, config.solver))
        lower, lower_report = ensure_converged(*solve_operator(lower_op, config.solver))
        tol = max(base_report.tol, upper_report.tol, lower_report.tol)
        report.tol = max(report.tol, tol)
        slack = SLACK_FACTOR * tol
        vu, vl = upper.interior_values(), lower.interior_values()

        checks = [(v - vu, 'upper bracket'), (vl - v, 'lower bracket')]
        if previous is not None:
            checks += [(vu - previous[0], 'upper nonincreasing in K'), (previous[1] - vl, 'lower nondecreasing in K')]
        found = [w for w in (_first_violation(grid, excess, slack, label, K) for excess, label in checks) if w]
        report.witnesses += found

        _, a_up, b_up = upper_op.hamiltonian(upper.values)
        _, a_lo, b_lo = lower_op.hamiltonian(lower.values)
        row = SandwichRow(K, float(np.max(vu - vl)), float(np.max(vu - v)), float(np.max(v - vl)), not found,
                          float(np.mean(upper_problem.truncation_active(a_up, b_up))),
                          float(np.mean(lower_problem.truncation_active(a_lo, b_lo))))
        report.rows.append(row)
        log.info("K=%g  gap=%.6e  upper=%.3e  lower=%.3e  active=%.3f/%.3f  ordering %s", K, row.gap,
                 row.upper_gap, row.lower_gap, row.upper_active, row.lower_active, 'ok' if not found else 'VIOLATED')
        previous = (vu, vl)

    report.fit_decay()
    if not report.ordering_ok:
        error = OrderingViolation(f"{len(report.witnesses)} ordering check(s) failed; first at "
                                  f"{report.witnesses[0]['point']} ({report.witnesses[0]['check']}, "
                                  f"K={report.witnesses[0]['K']:g})", report.witnesses[0])
        error.report = report
        raise error
    return report
