"""
Sparse assembly of the discrete operators
-----------------------------------------
For every control pair the map ``u -> L_h^{ab} u`` restricted to ``G_h^o``
is a sparse matrix with nonnegative off-diagonal entries. Assembling them
once turns every evaluation of ``H_h`` on the whole grid into a handful of
sparse products, which is what the solvers iterate on.
"""

import copy
import logging

import numpy as np
import scipy.sparse as sp

from isaacsfd.base import DegenerateStencil, is_constant
from isaacsfd.stencil import DecompositionCache

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['DiscreteOperator']


class _PairOperator():
    """
    Assembled ``L_h`` of one coefficient set.

    Attributes
    ----------
    matrix : scipy.sparse.csr_matrix, shape (n_interior, n_grid)
    forcing : ndarray, shape (n_interior,)
    diagonal : ndarray, shape (n_interior,)
        ``sum 2 a_k / h^2 + sum bbar_k / h + c``, the negated diagonal entry.
    basis_floor : float
    """
    def __init__(self, matrix, forcing, diagonal, basis_floor):
        self.matrix = matrix
        self.forcing = forcing
        self.diagonal = diagonal
        self.basis_floor = basis_floor


def _field_on(field, points, scalar=True):
    if is_constant(field):
        value = field(points[0])
        return np.full(points.shape[0], float(value)) if scalar else value
    return np.array([float(field(p)) for p in points])


class DiscreteOperator():
    """
    ``H_h`` and every ``L_h^{ab}`` of a problem on a grid, assembled.

    Parameters
    ----------
    problem : IsaacsProblem
    grid : Grid
    cache : DecompositionCache, optional
        Shared decomposition memo; one is created for the grid's direction
        set when omitted.
    basis_floor : float, optional
        Floor on coordinate weights for a newly created cache.

    Attributes
    ----------
    min_basis_floor : float
        Smallest coordinate-direction weight over every decomposition used,
        the empirical ``delta_1`` of the problem on this grid.
    """
    def __init__(self, problem, grid, cache=None, basis_floor=0.0):
        if problem.dims != grid.dims:
            raise ValueError(f"Problem is {problem.dims}D but the grid is {grid.dims}D")
        self.problem = problem
        self.grid = grid
        self.cache = DecompositionCache(grid.lambda_set, basis_floor) if cache is None else cache
        self._points = grid.points[grid.interior]

        built = {}
        self._pairs = []
        for i, j in problem.pairs():
            cs = problem.coefficient_set(i, j)
            if id(cs) not in built:
                built[id(cs)] = self._assemble(cs)
            self._pairs.append(((i, j), id(cs)))
        self._built = built
        self.min_basis_floor = min(op.basis_floor for op in built.values())
        self._forcing_shift = None
        log.debug("Assembled %d distinct operators for %r on %r (basis floor %.4g)",
                  len(built), problem, grid, self.min_basis_floor)

    @property
    def n_interior(self):
        return self.grid.n_interior

    def _assemble(self, cs):
        grid = self.grid
        lam = grid.lambda_set
        pts = self._points
        n = pts.shape[0]
        h = grid.h

        if cs.constant_operator:
            dec = self.cache.get(cs.diffusion_at(pts[0]), cs.drift(pts[0]))
            second = np.broadcast_to(dec.second_order, (n, len(lam.half_set)))
            first = np.broadcast_to(dec.first_order, (n, len(lam)))
            floor = dec.basis_floor
        else:
            decs = [self.cache.get(cs.diffusion_at(p), cs.drift(p)) for p in pts]
            second = np.array([dec.second_order for dec in decs])
            first = np.array([dec.first_order for dec in decs])
            floor = min(dec.basis_floor for dec in decs)
        c = _field_on(cs.discount, pts)
        f = _field_on(cs.forcing, pts)

        rows = np.arange(n)
        center = grid.interior
        nb = grid.neighbours
        r_parts, c_parts, d_parts = [], [], []
        for k in range(len(lam.half_set)):
            w = second[:, k] / h ** 2
            r_parts += [rows, rows, rows]
            c_parts += [nb[:, 2 * k], nb[:, 2 * k + 1], center]
            d_parts += [w, w, -2.0 * w]
        for j in range(len(lam)):
            w = first[:, j] / h
            r_parts += [rows, rows]
            c_parts += [nb[:, j], center]
            d_parts += [w, -w]
        r_parts.append(rows)
        c_parts.append(center)
        d_parts.append(-c)

        matrix = sp.coo_matrix((np.concatenate(d_parts), (np.concatenate(r_parts), np.concatenate(c_parts))),
                               shape=(n, grid.size)).tocsr()
        matrix.eliminate_zeros()
        diagonal = 2.0 * second.sum(axis=1) / h ** 2 + first.sum(axis=1) / h + c
        return _PairOperator(matrix, f, diagonal, floor)

    def pair(self, i, j):
        return self._built[id(self.problem.coefficient_set(i, j))]

    def forcing(self, i, j):
        f = self.pair(i, j).forcing
        return f if self._forcing_shift is None else f + self._forcing_shift

    def with_forcing_shift(self, shift):
        """
        Copy of this operator with ``shift`` added to every forcing.

        Parameters
        ----------
        shift : ndarray, shape (n_interior,)
        """
        shift = np.asarray(shift, dtype=float)
        if shift.shape != (self.n_interior,):
            raise ValueError(f"Forcing shift must have shape ({self.n_interior},)")
        other = copy.copy(self)
        other._forcing_shift = shift if self._forcing_shift is None else self._forcing_shift + shift
        return other

    def apply(self, i, j, values):
        """``L_h^{ij} u + f^{ij}`` on ``G_h^o``."""
        return self.pair(i, j).matrix @ values + self.forcing(i, j)

    def table(self, values):
        """
        All brackets ``L_h^{ab} u + f^{ab}`` on ``G_h^o``.

        Returns
        -------
        ndarray, shape (n_A, n_B, n_interior)
        """
        values = np.asarray(values, dtype=float)
        products = {key: op.matrix @ values for key, op in self._built.items()}
        out = np.empty((self.problem.n_A, self.problem.n_B, self.n_interior))
        for (i, j), key in self._pairs:
            out[i, j] = products[key] + self.forcing(i, j)
        return out

    def hamiltonian(self, values):
        """
        ``H_h[u]`` on ``G_h^o`` with the optimal controls.

        Returns
        -------
        H : ndarray, shape (n_interior,)
        alpha, beta : ndarray of int, shape (n_interior,)
            Optimal control indices, lowest index on ties.
        """
        return self.sup_inf(self.table(values))

    @staticmethod
    def sup_inf(table):
        cols = np.argmin(table, axis=1)
        row_min = np.take_along_axis(table, cols[:, None, :], axis=1)[:, 0, :]
        alpha = np.argmax(row_min, axis=0)
        idx = np.arange(table.shape[2])
        return row_min[alpha, idx], alpha, cols[alpha, idx]

    def residual(self, values):
        """``max over G_h^o |H_h[u]|``."""
        H, _, _ = self.hamiltonian(values)
        return float(np.max(np.abs(H)))

    def max_diagonal(self):
        """Largest diagonal coefficient over all controls, per interior point."""
        return np.max([op.diagonal for op in self._built.values()], axis=0)

    def timestep(self, theta=1.0):
        """
        Local monotone step ``tau(x) = theta / max_{ab} diagonal^{ab}(x)``.

        Raises
        ------
        DegenerateStencil
            If some point has no positive diagonal coefficient.
        """
        diag = self.max_diagonal()
        if np.any(diag <= 0):
            bad = self.grid.interior[int(np.flatnonzero(diag <= 0)[0])]
            raise DegenerateStencil(f"Zero diagonal coefficient at {self.grid.points[bad].tolist()}")
        return theta / diag

    def forcing_bound(self):
        return float(max(np.max(np.abs(self.forcing(i, j))) for (i, j), _ in self._pairs))

    def policy_system(self, alpha, beta):
        """
        Linear system of the frozen control field.

        Returns
        -------
        matrix : scipy.sparse.csc_matrix, shape (n_interior, n_interior)
            Rows of ``L_h^{alpha(x) beta(x)}`` on the interior unknowns
            (boundary values are zero).
        rhs : ndarray
            ``-f^{alpha(x) beta(x)}``, so that ``matrix @ u_int = rhs``.
        """
        n = self.n_interior
        matrix = sp.csr_matrix((n, self.grid.size))
        rhs = np.zeros(n)
        for (i, j), _ in self._pairs:
            mask = (alpha == i) & (beta == j)
            if not mask.any():
                continue
            matrix = matrix + sp.diags(mask.astype(float)) @ self.pair(i, j).matrix
            rhs[mask] = -self.forcing(i, j)[mask]
        return matrix[:, self.grid.interior].tocsc(), rhs

    def sweep_levels(self):
        """
        Interior rows grouped for lexicographic Gauss-Seidel, one group at a time.

        A row sits one level after its latest lexicographically earlier
        interior neighbour, so no two rows of a level are neighbours and an
        update of a whole level reads exactly what the sequential sweep reads.
        Visiting the levels backwards gives the reverse sweep.

        Returns
        -------
        levels : list of tuple
            ``(rows, matrix, forcing)`` per level: the interior rows, every
            distinct operator's rows stacked one operator after another, and
            the matching forcing.
        slot : ndarray of int, shape (n_A, n_B)
            Position of the pair ``(i, j)`` in each stack.
        """
        slot = np.zeros((self.problem.n_A, self.problem.n_B), dtype=int)
        if self.n_interior == 0:
            return [], slot
        row = self.grid.interior_row()
        earlier = row[self.grid.neighbours].tolist()
        depth = []
        for r, around in enumerate(earlier):
            depth.append(1 + max((depth[q] for q in around if 0 <= q < r), default=-1))
        depth = np.array(depth, dtype=int)

        keys = list(self._built)
        forcing = {}
        for (i, j), key in self._pairs:
            slot[i, j] = keys.index(key)
            forcing.setdefault(key, self.forcing(i, j))

        order = np.argsort(depth, kind='stable')
        bounds = np.flatnonzero(np.diff(depth[order])) + 1
        levels = []
        for rows in np.split(order, bounds):
            matrix = sp.vstack([self._built[key].matrix[rows] for key in keys], format='csr')
            levels.append((rows, matrix, np.concatenate([forcing[key][rows] for key in keys])))
        log.debug("Split %d interior rows into %d sweep levels", self.n_interior, len(levels))
        return levels, slot
