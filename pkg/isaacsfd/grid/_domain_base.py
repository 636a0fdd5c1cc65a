"""
The base class for domains, kept private. Concrete domains live in
:mod:`isaacsfd.grid.domains` and override the hooks below.
"""

import numpy as np

__all__ = []


class Domain():
    """
    Base class representing a bounded open set ``G = {x : phi(x) < 0}``.

    Attributes
    ----------
    dims : int
        Space dimension.

    Methods
    -------
    level(x)
        the level function phi
    bounding_box()
        lower and upper corners of a box containing G
    contains_ball(x, r)
        whether the closed ball of radius r at x lies in G
    levels(points), contains_balls(points, r)
        vectorised forms used by grid construction
    """
    def __init__(self, dims):
        self.dims = int(dims)

    def level(self, x):
        raise NotImplementedError()

    def bounding_box(self):
        raise NotImplementedError()

    def contains_ball(self, x, r):
        raise NotImplementedError()

    def describe(self):
        raise NotImplementedError()

    def contains(self, x):
        return self.level(x) < 0

    def levels(self, points):
        """
        Evaluate the level function at each row of ``points``.

        Parameters
        ----------
        points : ndarray, shape (n, d)

        Returns
        -------
        ndarray, shape (n,)
        """
        return np.array([self.level(p) for p in np.asarray(points, dtype=float)], dtype=float)

    def contains_balls(self, points, r):
        """Vectorised :meth:`contains_ball` over the rows of ``points``."""
        return np.array([self.contains_ball(p, r) for p in np.asarray(points, dtype=float)], dtype=bool)

    def __repr__(self):
        return f"{type(self).__name__}({self.describe()})"
