"""
Damped monotone fixed-point sweeps ``u <- u + tau H_h[u]``.
"""

import logging

import numpy as np

from isaacsfd.solvers._solver_base import MonotoneSolver

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['JacobiSolver', 'GaussSeidelSolver']


class JacobiSolver(MonotoneSolver):
    """
    Simultaneous update of every interior point.

    The step is the smallest local step over the grid, so the update map is
    monotone and commutes with adding constants; the sup-norm residual is
    then nonincreasing from one iteration to the next.
    """
    method = 'jacobi'

    def _iterate(self, values, report):
        tau = float(np.min(self.operator.timestep(self.config.theta)))
        interior = self.grid.interior
        H, _, _ = self.operator.hamiltonian(values)
        residual = float(np.max(np.abs(H)))
        k = 0
        while residual > self.tol and k < self.max_iter:
            values[interior] += tau * H
            k += 1
            H, _, _ = self.operator.hamiltonian(values)
            residual = float(np.max(np.abs(H)))
            self._record(report, k, residual)
        return k


class GaussSeidelSolver(MonotoneSolver):
    """
    In-place update with the local step ``tau(x)``, sweeping the interior in
    lexicographic order and its reverse on alternate sweeps.

    Rows are visited a level at a time (see
    :meth:`DiscreteOperator.sweep_levels`), which gives the same iterates as
    visiting them one by one.
    """
    method = 'gauss-seidel'

    def __init__(self, operator, config):
        super().__init__(operator, config)
        self._levels = None

    @property
    def levels(self):
        if self._levels is None:
            self._levels = self.operator.sweep_levels()
        return self._levels

    def sweep(self, values, tau, forward=True, frozen=None):
        """
        One in-place sweep over ``G_h^o``.

        Parameters
        ----------
        values : ndarray, shape (n_grid,)
        tau : ndarray, shape (n_interior,)
            Local step per interior row.
        forward : bool
            Lexicographic order when True, its reverse otherwise.
        frozen : ndarray of int, shape (n_interior,), optional
            Stack position of a fixed control pair per row; the sup-inf over
            all pairs is used when omitted.
        """
        levels, slot = self.levels
        interior = self.grid.interior
        for rows, matrix, forcing in (levels if forward else reversed(levels)):
            local = (matrix @ values + forcing).reshape(-1, rows.size)
            if frozen is None:
                step = local[slot].min(axis=1).max(axis=0)
            else:
                step = local[frozen[rows], np.arange(rows.size)]
            values[interior[rows]] += tau[rows] * step

    def _iterate(self, values, report):
        tau = self.operator.timestep(self.config.theta)
        k = 0
        while k < self.max_iter:
            self.sweep(values, tau, forward=k % 2 == 0)
            k += 1
            residual = self.operator.residual(values)
            self._record(report, k, residual)
            if residual <= self.tol:
                break
        return k
