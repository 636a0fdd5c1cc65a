"""
Symbols and the continuous Isaacs operator
------------------------------------------
A symbol ``u = (u', u'')`` stands for the 0th, 1st and 2nd derivatives of a
function at a point. Evaluating the Isaacs operator on symbols is exact and
cheap, which makes it the reference for fusion and Pucci properties.
"""

import numpy as np

__all__ = ['Symbol', 'payoff_table', 'sup_inf', 'inf_sup', 'evaluate_symbol', 'ellipticity_margin']


class Symbol():
    """
    Parameters
    ----------
    u0 : float
        Function value ``u'_0``.
    grad : array_like, shape (d,)
        First derivatives ``u'_1 .. u'_d``.
    hess : array_like, shape (d, d)
        Symmetric second derivatives ``u''``.
    """
    def __init__(self, u0, grad, hess):
        self.u0 = float(u0)
        self.grad = np.atleast_1d(np.asarray(grad, dtype=float))
        self.hess = np.atleast_2d(np.asarray(hess, dtype=float))
        if self.hess.shape != (self.grad.shape[0],) * 2:
            raise ValueError(f"Hessian shape {self.hess.shape} does not match gradient length {self.grad.shape[0]}")
        if not np.allclose(self.hess, self.hess.T, rtol=0.0, atol=1e-12):
            raise ValueError("Symbol Hessian must be symmetric")

    @classmethod
    def of_field(cls, v, x):
        """Symbol of a :class:`~isaacsfd.base.SmoothField` at ``x``."""
        return cls(v(x), v.gradient(x), v.hessian(x))

    @classmethod
    def random(cls, rng, dims, scale=1.0):
        m = rng.normal(scale=scale, size=(dims, dims))
        return cls(rng.normal(scale=scale), rng.normal(scale=scale, size=dims), 0.5 * (m + m.T))

    @property
    def dims(self):
        return self.grad.shape[0]

    def __add__(self, other):
        return Symbol(self.u0 + other.u0, self.grad + other.grad, self.hess + other.hess)

    def __mul__(self, scalar):
        return Symbol(scalar * self.u0, scalar * self.grad, scalar * self.hess)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        return f"Symbol(u0={self.u0:.6g}, grad={self.grad.tolist()}, hess={self.hess.tolist()})"


def payoff_table(problem, symbol, x):
    """
    Table of ``a:u'' + b.u' - c u'_0 + f`` over all control pairs at ``x``.

    Returns
    -------
    ndarray, shape (n_A, n_B)
    """
    table = np.empty((problem.n_A, problem.n_B))
    for i, j in problem.pairs():
        a, b, c, f = problem.evaluate(i, j, x)
        table[i, j] = float(np.sum(a * symbol.hess)) + float(b @ symbol.grad) - c * symbol.u0 + f
    return table


def sup_inf(table):
    """
    ``max_i min_j table[i, j]`` with its argument pair.

    Ties go to the lowest index in both players.
    """
    table = np.asarray(table, dtype=float)
    cols = np.argmin(table, axis=1)
    row_min = table[np.arange(table.shape[0]), cols]
    i = int(np.argmax(row_min))
    return float(row_min[i]), (i, int(cols[i]))


def inf_sup(table):
    """``min_j max_i table[i, j]`` with its argument pair."""
    table = np.asarray(table, dtype=float)
    rows = np.argmax(table, axis=0)
    col_max = table[rows, np.arange(table.shape[1])]
    j = int(np.argmin(col_max))
    return float(col_max[j]), (int(rows[j]), j)


def evaluate_symbol(problem, symbol, x):
    """
    Continuous Isaacs operator ``H(u, x)`` on a symbol.

    Returns
    -------
    value : float
    argpair : tuple of int
        Optimal ``(i, j)`` control indices.
    """
    return sup_inf(payoff_table(problem, symbol, np.asarray(x, dtype=float)))


def ellipticity_margin(problem, symbol, x, direction, t=1.0):
    """
    ``H(u', u'' + t l l^T, x) - H(u, x) - t delta |l|^2``.

    Nonnegative for every ``t > 0`` and direction ``l`` when all diffusions
    lie in ``S_delta``.
    """
    l = np.asarray(direction, dtype=float)
    bumped = Symbol(symbol.u0, symbol.grad, symbol.hess + t * np.outer(l, l))
    return (evaluate_symbol(problem, bumped, x)[0] - evaluate_symbol(problem, symbol, x)[0]
            - t * problem.delta * float(l @ l))
