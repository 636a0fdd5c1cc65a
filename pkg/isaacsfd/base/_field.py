"""
Callable fields on R^d.

Coefficients, forcings and exact solutions are all plain callables of a point
``x`` (a 1D numpy array). Two thin wrappers add what the solvers need on top
of that: :class:`Constant` lets assembly evaluate a field once instead of per
grid point, and :class:`SmoothField` bundles a scalar field with its first and
second derivatives.
"""

import numpy as np

__all__ = ['Constant', 'SmoothField', 'constant', 'is_constant']


class Constant():
    """
    A field that returns the same value everywhere.

    Parameters
    ----------
    value : float or array_like
        Scalar, vector or matrix value.
    """
    def __init__(self, value):
        value = np.asarray(value, dtype=float)
        value.setflags(write=False)
        self.value = value

    def __call__(self, x):
        if self.value.ndim == 0:
            return float(self.value)
        return self.value.copy()

    def __repr__(self):
        return f"Constant({self.value.tolist()!r})"


def constant(value):
    return Constant(value)


def is_constant(field):
    return isinstance(field, Constant)


class SmoothField():
    """
    A twice (or more) differentiable scalar field with callable derivatives.

    Parameters
    ----------
    value : callable
        ``x -> float``.
    gradient : callable
        ``x -> ndarray (d,)``.
    hessian : callable
        ``x -> ndarray (d, d)``.
    name : str, optional
        Label used in logs and reports.
    """
    def __init__(self, value, gradient, hessian, name=''):
        self._value = value
        self._gradient = gradient
        self._hessian = hessian
        self.name = name

    def __call__(self, x):
        return float(self._value(np.asarray(x, dtype=float)))

    def gradient(self, x):
        return np.asarray(self._gradient(np.asarray(x, dtype=float)), dtype=float)

    def hessian(self, x):
        return np.asarray(self._hessian(np.asarray(x, dtype=float)), dtype=float)

    def __repr__(self):
        return f"SmoothField({self.name!r})"
