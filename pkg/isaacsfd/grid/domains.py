"""
Domains
-------
Built-in smooth bounded domains. Balls and ellipsoids answer the
``contains_ball`` question exactly; a general level-set domain converts
level values into distance bounds through a Lipschitz constant of phi.
"""

import logging

import numpy as np
from scipy.optimize import brentq

from isaacsfd.grid._domain_base import Domain

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['Ball', 'Ellipsoid', 'LevelSetDomain', 'interval']


class Ball(Domain):
    """
    Open Euclidean ball.

    Parameters
    ----------
    center : array_like, shape (d,)
    radius : float
    """
    def __init__(self, center, radius):
        center = np.atleast_1d(np.asarray(center, dtype=float))
        super().__init__(center.shape[0])
        if radius <= 0:
            raise ValueError(f"Ball radius must be positive, got {radius}")
        self.center = center
        self.radius = float(radius)

    def level(self, x):
        x = np.asarray(x, dtype=float)
        return float(np.sum((x - self.center) ** 2) - self.radius ** 2)

    def levels(self, points):
        points = np.asarray(points, dtype=float)
        return np.sum((points - self.center) ** 2, axis=1) - self.radius ** 2

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def contains_ball(self, x, r):
        return bool(np.linalg.norm(np.asarray(x, dtype=float) - self.center) + r < self.radius)

    def contains_balls(self, points, r):
        points = np.asarray(points, dtype=float)
        return np.linalg.norm(points - self.center, axis=1) + r < self.radius

    def describe(self):
        return {'type': 'ball', 'center': self.center.tolist(), 'radius': self.radius}


def interval(radius=1.0, center=0.0):
    """The open interval ``(center - radius, center + radius)`` as a 1D ball."""
    return Ball([center], radius)


def _ellipsoid_boundary_distance(p, semi_axes):
    """
    Euclidean distance from an interior point to the boundary of an ellipsoid.

    The closest boundary point is ``x_i = s_i^2 p_i / (s_i^2 + t)`` for the root
    ``t`` in ``(-min s_i^2, 0)`` of ``sum (s_i p_i / (s_i^2 + t))^2 = 1``. When
    ``p`` has no component along the shortest axes the root may sit at the
    pole ``t = -min s_i^2``, handled separately.
    """
    s2 = semi_axes ** 2

    def g(t):
        return float(np.sum((semi_axes * p / (s2 + t)) ** 2) - 1.0)

    s2_min = float(np.min(s2))
    lo = -s2_min * (1.0 - 1e-13)
    if g(lo) > 0.0:
        t = brentq(g, lo, 0.0, xtol=1e-15, rtol=1e-15, maxiter=200)
        x = s2 * p / (s2 + t)
        return float(np.linalg.norm(x - p))

    shortest = np.isclose(s2, s2_min, rtol=1e-13, atol=0.0)
    x = np.zeros_like(p)
    x[~shortest] = s2[~shortest] * p[~shortest] / (s2[~shortest] - s2_min)
    remaining = max(1.0 - float(np.sum(x[~shortest] ** 2 / s2[~shortest])), 0.0)
    k = int(np.flatnonzero(shortest)[0])
    x[k] = np.sqrt(s2_min * remaining)
    return float(np.linalg.norm(x - p))


class Ellipsoid(Domain):
    """
    Open axis-aligned ellipsoid ``sum ((x_i - c_i) / s_i)^2 < 1``.

    Parameters
    ----------
    semi_axes : array_like, shape (d,)
    center : array_like, optional
        Defaults to the origin.
    """
    def __init__(self, semi_axes, center=None):
        semi_axes = np.atleast_1d(np.asarray(semi_axes, dtype=float))
        super().__init__(semi_axes.shape[0])
        if np.any(semi_axes <= 0):
            raise ValueError(f"Ellipsoid semi-axes must be positive, got {semi_axes.tolist()}")
        self.semi_axes = semi_axes
        self.center = np.zeros(self.dims) if center is None else np.asarray(center, dtype=float)

    def level(self, x):
        y = (np.asarray(x, dtype=float) - self.center) / self.semi_axes
        return float(np.sum(y ** 2) - 1.0)

    def levels(self, points):
        y = (np.asarray(points, dtype=float) - self.center) / self.semi_axes
        return np.sum(y ** 2, axis=1) - 1.0

    def bounding_box(self):
        return self.center - self.semi_axes, self.center + self.semi_axes

    def contains_ball(self, x, r):
        if self.level(x) >= 0:
            return False
        p = np.asarray(x, dtype=float) - self.center
        return _ellipsoid_boundary_distance(p, self.semi_axes) > r

    def describe(self):
        return {'type': 'ellipsoid', 'center': self.center.tolist(), 'semi_axes': self.semi_axes.tolist()}


class LevelSetDomain(Domain):
    """
    Domain given by a user level function.

    ``contains_ball`` uses ``dist(x, boundary) >= -phi(x) / lipschitz``, so it
    is conservative: points whose ball fits only barely may be classified as
    boundary points.

    Parameters
    ----------
    level_fn : callable
        ``x -> float``, negative exactly inside G.
    lower, upper : array_like, shape (d,)
        Corners of a box containing G.
    lipschitz : float
        Upper bound for ``|grad phi|`` on the box.
    """
    def __init__(self, level_fn, lower, upper, lipschitz):
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        super().__init__(lower.shape[0])
        if lipschitz <= 0:
            raise ValueError("lipschitz must be positive")
        self.level_fn = level_fn
        self.lower = lower
        self.upper = upper
        self.lipschitz = float(lipschitz)

    def level(self, x):
        return float(self.level_fn(np.asarray(x, dtype=float)))

    def bounding_box(self):
        return self.lower, self.upper

    def contains_ball(self, x, r):
        phi = self.level(x)
        return phi < 0 and -phi / self.lipschitz > r

    def describe(self):
        return {'type': 'level-set', 'lower': self.lower.tolist(), 'upper': self.upper.tolist(),
                'lipschitz': self.lipschitz}
