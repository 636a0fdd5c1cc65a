"""
Smooth test fields with analytic derivatives, used as exact solutions of
manufactured problems and as consistency checks.
"""

import numpy as np

from isaacsfd.base import SmoothField

__all__ = ['zero', 'linear', 'quadratic', 'ellipsoidal_polynomial', 'ellipsoidal_cosine',
           'sine', 'sine_product']


def zero(dims):
    return SmoothField(lambda x: 0.0, lambda x: np.zeros(dims), lambda x: np.zeros((dims, dims)),
                       name='zero')


def linear(p, c=0.0):
    """``v(x) = <p, x> + c``."""
    p = np.asarray(p, dtype=float)
    d = p.shape[0]
    return SmoothField(lambda x: p @ x + c, lambda x: p.copy(), lambda x: np.zeros((d, d)),
                       name='linear')


def quadratic(M, p=None, c=0.0):
    """``v(x) = x^T M x + <p, x> + c`` (M need not be symmetric)."""
    M = np.asarray(M, dtype=float)
    d = M.shape[0]
    p = np.zeros(d) if p is None else np.asarray(p, dtype=float)
    S = M + M.T
    return SmoothField(lambda x: x @ M @ x + p @ x + c, lambda x: S @ x + p, lambda x: S.copy(),
                       name='quadratic')


def _scaled_square(semi_axes):
    s2 = np.asarray(semi_axes, dtype=float) ** 2

    def q(x):
        return float(np.sum(x ** 2 / s2))

    def dq(x):
        return 2.0 * x / s2

    return q, dq, np.diag(2.0 / s2)


def ellipsoidal_polynomial(semi_axes, amplitude=1.0):
    """
    ``v(x) = A (1 - q(x))`` with ``q(x) = sum x_i^2 / s_i^2``.

    Vanishes on the boundary of the ellipsoid (ball when all ``s_i`` agree).
    """
    q, dq, d2q = _scaled_square(semi_axes)
    A = float(amplitude)
    return SmoothField(lambda x: A * (1.0 - q(x)), lambda x: -A * dq(x), lambda x: -A * d2q,
                       name=f'polynomial(A={A:g})')


def ellipsoidal_cosine(semi_axes, amplitude=1.0):
    """
    ``v(x) = A cos(pi q(x) / 2)``; on a ball of radius R this is
    ``A cos(pi |x|^2 / (2 R^2))``, which vanishes on the sphere.
    """
    q, dq, d2q = _scaled_square(semi_axes)
    A = float(amplitude)
    k = 0.5 * np.pi

    def value(x):
        return A * np.cos(k * q(x))

    def gradient(x):
        return -A * np.sin(k * q(x)) * k * dq(x)

    def hessian(x):
        g = dq(x)
        return -A * (np.cos(k * q(x)) * k ** 2 * np.outer(g, g) + np.sin(k * q(x)) * k * d2q)

    return SmoothField(value, gradient, hessian, name=f'cosine(A={A:g})')


def sine(dims, axis=0):
    """``v(x) = sin(x_axis)``."""
    def gradient(x):
        g = np.zeros(dims)
        g[axis] = np.cos(x[axis])
        return g

    def hessian(x):
        H = np.zeros((dims, dims))
        H[axis, axis] = -np.sin(x[axis])
        return H

    return SmoothField(lambda x: np.sin(x[axis]), gradient, hessian, name=f'sin(x_{axis + 1})')


def sine_product(dims=2):
    """``v(x) = sin(x_1) cos(x_2)``."""
    if dims < 2:
        raise ValueError("sine_product needs at least two dimensions")

    def gradient(x):
        g = np.zeros(dims)
        g[0] = np.cos(x[0]) * np.cos(x[1])
        g[1] = -np.sin(x[0]) * np.sin(x[1])
        return g

    def hessian(x):
        H = np.zeros((dims, dims))
        H[0, 0] = -np.sin(x[0]) * np.cos(x[1])
        H[1, 1] = -np.sin(x[0]) * np.cos(x[1])
        H[0, 1] = H[1, 0] = -np.cos(x[0]) * np.sin(x[1])
        return H

    return SmoothField(lambda x: np.sin(x[0]) * np.cos(x[1]), gradient, hessian,
                       name='sin(x_1)cos(x_2)')
