"""
Problem catalog
---------------
Named problem builders selected from the command line. Every builder takes
the space dimension, the semi-axes of the (origin-centred) domain and a map
of string or float parameters.

==================== ======== ================================================
name                 controls description
==================== ======== ================================================
poisson-ball         1 x 1    ``a = I``, constant forcing, exact solution
variable-linear      1 x 1    rotating anisotropic ``a(x)``
bellman-2            2 x 1    two linear operators, sup only
isaacs-2x2           2 x 2    genuinely sup-inf, constant operators
manufactured-isaacs  2 x 2    isaacs-2x2 with forcing from an exact solution
==================== ======== ================================================
"""

import logging
from collections import namedtuple

import numpy as np

from isaacsfd.base import ConfigurationError, constant
from isaacsfd.problems import fields
from isaacsfd.problems._problem_base import CoefficientSet, build_problem, manufacture

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['CATALOG', 'CatalogEntry', 'build_catalog_problem', 'catalog_names']

CatalogEntry = namedtuple('CatalogEntry', ['builder', 'description', 'default_h_list', 'lambda_m'])


def _param(params, key, default, cast=float):
    value = params.get(key, default)
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"Parameter {key}={value!r} is not a valid {cast.__name__}") from None


def _embed(block, dims):
    """Identity of size ``dims`` with ``block`` in the top-left corner (truncated for d = 1)."""
    block = np.asarray(block, dtype=float)
    out = np.eye(dims)
    n = min(dims, block.shape[0])
    out[:n, :n] = block[:n, :n]
    return out


def _embed_vector(vector, dims):
    out = np.zeros(dims)
    n = min(dims, len(vector))
    out[:n] = np.asarray(vector, dtype=float)[:n]
    return out


def _pair(a, b, c, f, dims):
    return CoefficientSet(constant(_embed_vector(b, dims)), constant(c), constant(f),
                          diffusion=constant(_embed(a, dims)))


def poisson_ball(dims, semi_axes, params, seed=0):
    """``a = I``, ``b = 0``, ``c = 0``, ``f = forcing``; exact on origin-centred ellipsoids."""
    f = _param(params, 'forcing', 1.0)
    delta = _param(params, 'delta', 0.5)
    s2 = np.asarray(semi_axes, dtype=float) ** 2
    exact = fields.ellipsoidal_polynomial(semi_axes, amplitude=f / float(np.sum(2.0 / s2)))
    coefficients = {(0, 0): _pair(np.eye(dims), np.zeros(dims), 0.0, f, dims)}
    return build_problem(dims, [0], [0], coefficients, delta, name='poisson-ball', exact_solution=exact,
                         seed=seed)


class _RotatingDiffusion():
    """``a(x) = I + kappa e(x) e(x)^T`` with ``e = (-sin t, cos t)``, ``t = omega pi x_1``."""
    def __init__(self, dims, kappa, omega):
        self.dims = dims
        self.kappa = kappa
        self.omega = omega

    def __call__(self, x):
        if self.dims == 1:
            return np.array([[1.0 + self.kappa * np.sin(self.omega * np.pi * x[0]) ** 2]])
        t = self.omega * np.pi * x[0]
        e = np.zeros(self.dims)
        e[0], e[1] = -np.sin(t), np.cos(t)
        return np.eye(self.dims) + self.kappa * np.outer(e, e)


def variable_linear(dims, semi_axes, params, seed=0):
    kappa = _param(params, 'anisotropy', 1.0)
    omega = _param(params, 'rotation', 1.0)
    f = _param(params, 'forcing', 1.0)
    delta = _param(params, 'delta', 0.5)
    coefficients = {(0, 0): CoefficientSet(constant(np.zeros(dims)), constant(0.0), constant(f),
                                           diffusion=_RotatingDiffusion(dims, kappa, omega))}
    return build_problem(dims, [0], [0], coefficients, delta, name='variable-linear', seed=seed)


def bellman_2(dims, semi_axes, params, seed=0):
    delta = _param(params, 'delta', 0.5)
    coefficients = {
        (0, 0): _pair(np.eye(2), [0.0, 0.0], 0.0, _param(params, 'f0', 1.0), dims),
        (1, 0): _pair([[1.2, 0.3], [0.3, 0.8]], [0.5, 0.0], 0.5, _param(params, 'f1', 1.2), dims),
    }
    return build_problem(dims, [0, 1], [0], coefficients, delta, name='bellman-2', seed=seed)


_ISAACS_PAIRS = {
    (0, 0): ([[1.0, 0.0], [0.0, 1.0]], [0.0, 0.0], 0.0, 1.0),
    (0, 1): ([[1.6, 0.0], [0.0, 0.7]], [0.4, 0.0], 0.2, 0.8),
    (1, 0): ([[1.2, 0.4], [0.4, 0.9]], [0.0, -0.3], 0.0, 1.3),
    (1, 1): ([[0.8, 0.0], [0.0, 1.4]], [-0.2, 0.2], 0.5, 0.6),
}


def isaacs_2x2(dims, semi_axes, params, seed=0):
    """
    Two players with two controls each; the payoff table has no saddle point
    for generic symbols, so sup-inf and inf-sup differ.
    """
    delta = _param(params, 'delta', 0.5)
    scale = _param(params, 'forcing_scale', 1.0)
    coefficients = {key: _pair(a, b, c, scale * f, dims) for key, (a, b, c, f) in _ISAACS_PAIRS.items()}
    return build_problem(dims, [0, 1], [0, 1], coefficients, delta, name='isaacs-2x2', seed=seed)


def manufactured_isaacs(dims, semi_axes, params, seed=0):
    """isaacs-2x2 with forcings computed from an exact solution vanishing on the boundary."""
    profile = _param(params, 'profile', 'cosine', cast=str)
    amplitude = _param(params, 'amplitude', 0.25)
    if profile == 'cosine':
        v = fields.ellipsoidal_cosine(semi_axes, amplitude)
    elif profile == 'polynomial':
        v = fields.ellipsoidal_polynomial(semi_axes, amplitude)
    elif profile == 'zero':
        v = fields.zero(dims)
    else:
        raise ConfigurationError(f"Unknown profile {profile!r} (cosine, polynomial or zero)")
    problem = manufacture(v, isaacs_2x2(dims, semi_axes, params, seed))
    problem.name = 'manufactured-isaacs'
    return problem


CATALOG = {
    'poisson-ball': CatalogEntry(poisson_ball, 'Poisson equation, a = I, constant forcing',
                                 (0.2, 0.1, 0.05, 0.025), 1),
    'variable-linear': CatalogEntry(variable_linear, 'Linear equation with rotating anisotropic diffusion',
                                    (0.2, 0.1, 0.05, 0.025), 1),
    'bellman-2': CatalogEntry(bellman_2, 'Bellman equation with two controls',
                              (0.2, 0.1, 0.05, 0.025), 1),
    'isaacs-2x2': CatalogEntry(isaacs_2x2, 'Isaacs equation with two controls per player',
                               (0.2, 0.1, 0.05, 0.025), 1),
    'manufactured-isaacs': CatalogEntry(manufactured_isaacs, 'isaacs-2x2 with a manufactured exact solution',
                                        (0.2, 0.1, 0.05, 0.025), 1),
}


def catalog_names():
    return sorted(CATALOG)


def build_catalog_problem(name, dims, semi_axes, params=None, seed=0):
    """
    Build a catalog problem by name.

    Parameters
    ----------
    name : str
    dims : int
    semi_axes : sequence of float
        Semi-axes of the origin-centred domain (the radius repeated for balls).
    params : dict, optional
        Builder parameters, values may be strings.
    seed : int, optional
        Seed of the validation sample points.

    Raises
    ------
    ConfigurationError
        For unknown names or malformed parameters.
    """
    try:
        entry = CATALOG[name]
    except KeyError:
        raise ConfigurationError(f"Unknown problem {name!r}; choose from {', '.join(catalog_names())}") from None
    semi_axes = np.broadcast_to(np.asarray(semi_axes, dtype=float), (int(dims),)).copy()
    problem = entry.builder(int(dims), semi_axes, dict(params or {}), seed)
    log.info("Built catalog problem %r", problem)
    return problem
