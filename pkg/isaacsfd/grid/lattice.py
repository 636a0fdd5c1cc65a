"""
Lattice grids
-------------
The point sets ``G_h = G cap hZ^d``, ``G_h^o = {x in hZ^d : x + hB in G}`` and
``dG_h = G_h minus G_h^o``, plus storage for functions on ``G_h``.
"""

import logging

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from isaacsfd.base import (EmptyInterior, GridError, GridMismatch, NonFiniteValue,
                           StencilEscape)

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['Grid', 'GridFunction', 'build_grid', 'restrict', 'sup_diff']


class Grid():
    """
    Lattice points of step ``h`` inside a domain, classified against a stencil.

    Points are stored in row-major lexicographic order of their integer
    lattice coordinates. Build instances with :func:`build_grid`.

    Attributes
    ----------
    h : float
        Mesh size.
    domain : Domain
    lambda_set : DirectionSet
    radius : float
        Stencil radius ``r_Lambda``.
    lattice : ndarray of int, shape (n, d)
        Integer coordinates ``k`` of each point ``x = h k``.
    points : ndarray, shape (n, d)
        Physical coordinates.
    interior_mask : ndarray of bool, shape (n,)
    interior : ndarray of int
        Indices of ``G_h^o`` in order.
    boundary : ndarray of int
        Indices of ``dG_h`` in order.
    neighbours : ndarray of int, shape (n_interior, n_directions)
        ``neighbours[r, j]`` is the index of ``interior[r] + h * directions[j]``.
    """
    def __init__(self, domain, h, lambda_set, lattice, interior_mask, neighbours):
        self.domain = domain
        self.h = float(h)
        self.lambda_set = lambda_set
        self.radius = lambda_set.radius
        self.lattice = lattice
        self.points = self.h * lattice.astype(float)
        self.interior_mask = interior_mask
        self.interior = np.flatnonzero(interior_mask)
        self.boundary = np.flatnonzero(~interior_mask)
        self.neighbours = neighbours
        self.index = {tuple(k): i for i, k in enumerate(lattice.tolist())}
        for arr in (self.lattice, self.points, self.interior_mask, self.interior,
                    self.boundary, self.neighbours):
            arr.setflags(write=False)
        self._components = None

    @property
    def dims(self):
        return self.lattice.shape[1]

    @property
    def size(self):
        return self.lattice.shape[0]

    @property
    def n_interior(self):
        return self.interior.shape[0]

    def __len__(self):
        return self.size

    def locate(self, x):
        """Index of the lattice point nearest to the physical point ``x``."""
        k = tuple(int(v) for v in np.rint(np.asarray(x, dtype=float) / self.h))
        try:
            return self.index[k]
        except KeyError:
            raise StencilEscape(f"Point {tuple(np.asarray(x).tolist())} is not in G_h") from None

    def shift(self, i, direction, steps=1):
        """
        Index of ``points[i] + steps * h * direction``.

        Raises
        ------
        StencilEscape
            If that lattice point is not in ``G_h``.
        """
        k = tuple(int(a) + steps * int(b) for a, b in zip(self.lattice[i], direction))
        try:
            return self.index[k]
        except KeyError:
            raise StencilEscape(
                f"{self.points[i].tolist()} + {steps}*h*{tuple(direction)} leaves G_h "
                f"(point is {'interior' if self.interior_mask[i] else 'boundary'})") from None

    def interior_row(self):
        """``row[i]`` is the position of point ``i`` in :attr:`interior`, or -1."""
        row = -np.ones(self.size, dtype=int)
        row[self.interior] = np.arange(self.n_interior)
        return row

    def components(self):
        """Number of connected components of ``G_h^o`` under Lambda-neighbour steps."""
        if self._components is None:
            n = self.n_interior
            if n == 0:
                self._components = 0
            else:
                row = self.interior_row()
                targets = row[self.neighbours]
                src = np.repeat(np.arange(n), targets.shape[1])
                dst = targets.ravel()
                keep = dst >= 0
                adjacency = coo_matrix((np.ones(keep.sum()), (src[keep], dst[keep])), shape=(n, n))
                self._components, _ = connected_components(adjacency, directed=False)
        return self._components

    def same_as(self, other):
        return (self is other) or (
            isinstance(other, Grid) and self.h == other.h and self.lambda_set == other.lambda_set
            and self.lattice.shape == other.lattice.shape and np.array_equal(self.lattice, other.lattice))

    def describe(self):
        return {'h': self.h, 'n_grid': self.size, 'n_interior': self.n_interior,
                'n_boundary': int(self.boundary.shape[0]), 'stencil_radius': self.radius,
                'components': int(self.components()), 'domain': self.domain.describe()}

    def __repr__(self):
        return f"Grid(h={self.h}, n_grid={self.size}, n_interior={self.n_interior})"


def build_grid(domain, h, lambda_set):
    """
    Enumerate and classify the lattice points of step ``h`` in ``domain``.

    Parameters
    ----------
    domain : Domain
    h : float
        Mesh size, positive.
    lambda_set : DirectionSet
        Stencil directions; its radius sets the width of the boundary layer.

    Returns
    -------
    Grid

    Raises
    ------
    EmptyInterior
        If no point has its stencil ball inside the domain.
    """
    h = float(h)
    if not h > 0:
        raise ValueError(f"Mesh size must be positive, got {h}")
    if lambda_set.dims != domain.dims:
        raise ValueError(f"Direction set is {lambda_set.dims}D but the domain is {domain.dims}D")

    lo, hi = domain.bounding_box()
    ranges = [np.arange(int(np.floor(a / h)), int(np.ceil(b / h)) + 1) for a, b in zip(lo, hi)]
    lattice = np.stack(np.meshgrid(*ranges, indexing='ij'), axis=-1).reshape(-1, domain.dims)
    inside = domain.levels(h * lattice.astype(float)) < 0
    lattice = lattice[inside]
    if lattice.shape[0] == 0:
        raise EmptyInterior(f"No lattice point of step {h} lies in {domain!r}")

    candidate = domain.contains_balls(h * lattice.astype(float), h * lambda_set.radius)
    index = {tuple(k): i for i, k in enumerate(lattice.tolist())}
    steps = lambda_set.matrix.astype(int)

    interior_mask = np.zeros(lattice.shape[0], dtype=bool)
    rows = []
    for i in np.flatnonzero(candidate):
        k = lattice[i]
        found = [index.get(tuple(k + s)) for s in steps]
        if any(j is None for j in found):
            # ball test and lattice membership disagree only at rounding level
            log.debug("Point %s passes the ball test but its stencil leaves G_h", (h * k).tolist())
            continue
        interior_mask[i] = True
        rows.append(found)

    if not interior_mask.any():
        raise EmptyInterior(
            f"G_h^o is empty for h={h}, stencil radius {lambda_set.radius:.4g} in {domain!r}")
    neighbours = np.array(rows, dtype=int)

    grid = Grid(domain, h, lambda_set, lattice, interior_mask, neighbours)
    _verify_stencil_closure(grid)
    n_comp = grid.components()
    if n_comp > 1:
        log.warning("G_h^o has %d connected components at h=%g", n_comp, h)
    log.debug("Built %r", grid)
    return grid


def _verify_stencil_closure(grid):
    for r, i in enumerate(grid.interior):
        for j, direction in enumerate(grid.lambda_set.directions):
            target = grid.neighbours[r, j]
            if not np.array_equal(grid.lattice[target], grid.lattice[i] + np.array(direction.components)):
                raise GridError(f"Stencil closure broken at {grid.points[i].tolist()}")


class GridFunction():
    """
    Real values on ``G_h``.

    Parameters
    ----------
    grid : Grid
    values : array_like, shape (grid.size,)

    Raises
    ------
    NonFiniteValue
        If any value is NaN or infinite.
    """
    def __init__(self, grid, values):
        values = np.array(values, dtype=float)
        if values.shape != (grid.size,):
            raise GridMismatch(f"Expected {grid.size} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NonFiniteValue(f"Non-finite value at {grid.points[bad].tolist()}")
        self.grid = grid
        self.values = values

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.size))

    def copy(self):
        return GridFunction(self.grid, self.values.copy())

    def at(self, x):
        return float(self.values[self.grid.locate(x)])

    def interior_values(self):
        return self.values[self.grid.interior]

    def boundary_values(self):
        return self.values[self.grid.boundary]

    def sup_norm(self):
        return float(np.max(np.abs(self.values)))

    def __len__(self):
        return self.values.shape[0]

    def __repr__(self):
        return f"GridFunction({self.grid!r}, sup={self.sup_norm():.6g})"


def restrict(f, grid):
    """
    Evaluate a scalar field at every point of ``G_h``.

    Raises
    ------
    NonFiniteValue
        If ``f`` is not finite at some lattice point.
    """
    return GridFunction(grid, [f(p) for p in grid.points])


def sup_diff(u, w, subset='all'):
    """
    ``max |u - w|`` over all of ``G_h``, ``G_h^o`` (``'interior'``) or ``dG_h`` (``'boundary'``).

    Raises
    ------
    GridMismatch
        If the two functions live on different grids.
    """
    if not u.grid.same_as(w.grid):
        raise GridMismatch("Grid functions live on different grids")
    diff = np.abs(u.values - w.values)
    if subset == 'all':
        pass
    elif subset == 'interior':
        diff = diff[u.grid.interior]
    elif subset == 'boundary':
        diff = diff[u.grid.boundary]
    else:
        raise ValueError(f"subset must be 'all', 'interior' or 'boundary', got {subset!r}")
    return float(np.max(diff)) if diff.size else 0.0
