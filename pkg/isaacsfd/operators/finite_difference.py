"""
Pointwise finite-difference operators
-------------------------------------
``delta_{h,l} u(x) = (u(x + hl) - u(x)) / h``,
``Delta_{h,l} u(x) = (u(x + hl) - 2u(x) + u(x - hl)) / h^2``,
``L_h^{ab} u = a_k Delta_{h,l_k} u + bbar_k delta_{h,l_k} u - c u`` and
``H_h[u] = sup_a inf_b [L_h^{ab} u + f^{ab}]``, evaluated at a single grid
point given by its index in ``G_h``. These are the readable reference
implementations; :mod:`isaacsfd.operators.assembly` computes the same
quantities for all points at once.
"""

import numpy as np

from isaacsfd.grid import restrict
from isaacsfd.operators.symbols import sup_inf
from isaacsfd.stencil import DecompositionCache

__all__ = ['delta_h', 'delta2_h', 'apply_L_h', 'apply_H_h', 'apply_L_continuous', 'consistency_gap']


def _h(u, h):
    return u.grid.h if h is None else float(h)


def delta_h(u, x, l, h=None):
    """
    Forward difference of ``u`` at grid index ``x`` along direction ``l``.

    Raises
    ------
    StencilEscape
        If ``x + h l`` is not in ``G_h``.
    """
    return (u.values[u.grid.shift(x, l)] - u.values[x]) / _h(u, h)


def delta2_h(u, x, l, h=None):
    """Central second difference of ``u`` at grid index ``x`` along ``l``."""
    up = u.values[u.grid.shift(x, l)]
    down = u.values[u.grid.shift(x, l, steps=-1)]
    return (up - 2.0 * u.values[x] + down) / _h(u, h) ** 2


def _cache_for(grid, cache):
    return DecompositionCache(grid.lambda_set) if cache is None else cache


def apply_L_h(problem, alpha, beta, u, x, cache=None):
    """
    ``L_h^{alpha beta} u`` at the grid index ``x``.

    Parameters
    ----------
    problem : IsaacsProblem
    alpha, beta : int
        Control indices.
    u : GridFunction
    x : int
        Index of an interior point.
    cache : DecompositionCache, optional

    Raises
    ------
    InsufficientStencil, StencilEscape
    """
    grid = u.grid
    cache = _cache_for(grid, cache)
    a, b, c, _ = problem.evaluate(alpha, beta, grid.points[x])
    dec = cache.get(a, b)
    lam = grid.lambda_set
    total = 0.0
    for w, l in zip(dec.second_order, lam.half_set):
        if w != 0.0:
            total += w * delta2_h(u, x, l)
    for w, l in zip(dec.first_order, lam.directions):
        if w != 0.0:
            total += w * delta_h(u, x, l)
    return total - c * u.values[x]


def apply_H_h(problem, u, x, cache=None):
    """
    ``H_h[u]`` at the grid index ``x``.

    Returns
    -------
    value : float
    argpair : tuple of int
        Optimal ``(alpha, beta)`` indices, lowest index on ties.
    """
    cache = _cache_for(u.grid, cache)
    point = u.grid.points[x]
    table = np.empty((problem.n_A, problem.n_B))
    for i, j in problem.pairs():
        table[i, j] = apply_L_h(problem, i, j, u, x, cache) + problem.evaluate(i, j, point).f
    return sup_inf(table)


def apply_L_continuous(problem, alpha, beta, v, x):
    """``L^{alpha beta} v(x) = a:D^2v + b.Dv - c v`` for a smooth field ``v``."""
    x = np.asarray(x, dtype=float)
    a, b, c, _ = problem.evaluate(alpha, beta, x)
    return float(np.sum(a * v.hessian(x))) + float(b @ v.gradient(x)) - c * v(x)


def consistency_gap(problem, alpha, beta, v, grid, cache=None):
    """
    ``max over G_h^o of |L^{ab} v - L_h^{ab} v|`` for the restriction of ``v``.
    """
    cache = _cache_for(grid, cache)
    u = restrict(v, grid)
    gap = 0.0
    for x in grid.interior:
        exact = apply_L_continuous(problem, alpha, beta, v, grid.points[x])
        gap = max(gap, abs(exact - apply_L_h(problem, alpha, beta, u, x, cache)))
    return gap
