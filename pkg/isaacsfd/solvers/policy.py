"""
Policy iteration for Isaacs games
---------------------------------
The maximising control field is improved in an outer loop; for each frozen
``alpha`` the minimising player's problem is solved exactly by Howard's
algorithm. Every frozen pair gives a linear system with an M-matrix, solved
by Gauss-Seidel sweeps or directly. A control field that repeats in the outer
loop means the game iteration cycles, and the run continues with
Gauss-Seidel sweeps from the current iterate.
"""

import logging

import numpy as np
from scipy.sparse.linalg import spsolve

from isaacsfd.base import MaxIterExceeded
from isaacsfd.solvers._solver_base import SWEEP_MAX_ITER, MonotoneSolver
from isaacsfd.solvers.iterative import GaussSeidelSolver

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['PolicyIterationSolver']

# strict improvement threshold, as a fraction of tol
IMPROVEMENT = 1e-2


class PolicyIterationSolver(MonotoneSolver):
    method = 'policy'

    def __init__(self, operator, config):
        super().__init__(operator, config)
        self._sweeper = None

    def _linear_solve(self, alpha, beta, values, report):
        matrix, rhs = self.operator.policy_system(alpha, beta)
        report.linear_solves += 1
        interior = self.grid.interior
        if self.config.policy_linear == 'direct':
            values[interior] = spsolve(matrix, rhs)
            return
        # gauss-seidel sweeps on the frozen pair, to a tighter target
        if self._sweeper is None:
            self._sweeper = GaussSeidelSolver(self.operator, self.config.replace(method='gauss-seidel'))
        frozen = self._sweeper.levels[1][alpha, beta]
        tau = self.config.theta / -matrix.diagonal()
        target = IMPROVEMENT * self.tol
        for k in range(SWEEP_MAX_ITER):
            if np.max(np.abs(matrix @ values[interior] - rhs), initial=0.0) <= target:
                return
            self._sweeper.sweep(values, tau, forward=k % 2 == 0, frozen=frozen)
        log.warning("Frozen-control sweeps stopped above %.3e", target)

    def _best_response(self, alpha, values, report):
        """Howard's algorithm for the minimising player against a frozen ``alpha``."""
        idx = np.arange(self.grid.n_interior)
        eps = IMPROVEMENT * self.tol
        table = self.operator.table(values)
        beta = np.argmin(table[alpha, :, idx], axis=1)
        for _ in range(self.max_iter):
            self._linear_solve(alpha, beta, values, report)
            rows = self.operator.table(values)[alpha, :, idx]
            candidate = np.argmin(rows, axis=1)
            improve = rows[idx, candidate] < rows[idx, beta] - eps
            if not improve.any():
                return
            beta[improve] = candidate[improve]
        raise MaxIterExceeded(f"Minimising player did not settle in {self.max_iter} policy steps")

    def _fallback(self, values, report, reason):
        log.warning("Policy iteration %s; continuing with gauss-seidel sweeps", reason)
        report.fallback = True
        sweeps = GaussSeidelSolver(self.operator, self.config.replace(method='gauss-seidel', max_iter=None))
        sweeps.tol = self.tol
        return sweeps._iterate(values, report)

    def _iterate(self, values, report):
        idx = np.arange(self.grid.n_interior)
        eps = IMPROVEMENT * self.tol
        H, alpha, _ = self.operator.hamiltonian(values)
        seen = set()
        k = 0
        while k < self.max_iter:
            key = alpha.tobytes()
            if key in seen:
                return k + self._fallback(values, report, "revisited a control field")
            seen.add(key)
            try:
                self._best_response(alpha, values, report)
            except MaxIterExceeded:
                return k + self._fallback(values, report, "inner loop did not settle")
            k += 1
            table = self.operator.table(values)
            H, candidate, _ = self.operator.sup_inf(table)
            residual = float(np.max(np.abs(H)))
            self._record(report, k, residual)
            if residual <= self.tol:
                return k
            current = table[alpha, :, idx].min(axis=1)
            improve = H > current + eps
            if not improve.any():
                return k + self._fallback(values, report, "stalled above tol")
            alpha = alpha.copy()
            alpha[improve] = candidate[improve]
        return k + self._fallback(values, report, f"reached {self.max_iter} outer steps")
