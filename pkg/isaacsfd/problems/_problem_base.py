"""
Isaacs problems: finite control sets and one coefficient record per control
pair. Kept private; import from :mod:`isaacsfd.problems`.
"""

import logging
from collections import namedtuple

import numpy as np

from isaacsfd.base import (EllipticityViolation, NegativeC, ProblemError, constant, is_constant)

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['Coefficients', 'CoefficientSet', 'IsaacsProblem', 'build_problem', 'manufacture']

ELLIPTICITY_TOL = 1e-8

Coefficients = namedtuple('Coefficients', ['a', 'b', 'c', 'f'])
Coefficients.__doc__ = "Coefficient values of one control pair at one point: diffusion, drift, discount, forcing."


def _as_field(value):
    return value if callable(value) else constant(value)


class CoefficientSet():
    """
    Coefficient fields of one control pair ``(alpha, beta)``.

    Exactly one of ``diffusion`` and ``sigma`` is given; with ``sigma`` the
    diffusion is ``a = (1/2) sigma sigma^T`` at each evaluation. Non-callable
    values are wrapped as constants.

    Parameters
    ----------
    drift : callable or array_like
        ``b(x)``, shape (d,).
    discount : callable or float
        ``c(x) >= 0``.
    forcing : callable or float
        ``f(x)``.
    diffusion : callable or array_like, optional
        ``a(x)``, shape (d, d).
    sigma : callable or array_like, optional
        ``sigma(x)``, shape (d, d').
    """
    def __init__(self, drift, discount, forcing, diffusion=None, sigma=None):
        if (diffusion is None) == (sigma is None):
            raise ValueError("Give exactly one of diffusion and sigma")
        self.diffusion = None if diffusion is None else _as_field(diffusion)
        self.sigma = None if sigma is None else _as_field(sigma)
        self.drift = _as_field(drift)
        self.discount = _as_field(discount)
        self.forcing = _as_field(forcing)

    def diffusion_at(self, x):
        if self.sigma is not None:
            s = np.atleast_2d(np.asarray(self.sigma(x), dtype=float))
            return 0.5 * s @ s.T
        return np.atleast_2d(np.asarray(self.diffusion(x), dtype=float))

    def at(self, x):
        """Evaluate every field at ``x``."""
        return Coefficients(self.diffusion_at(x),
                            np.atleast_1d(np.asarray(self.drift(x), dtype=float)),
                            float(self.discount(x)),
                            float(self.forcing(x)))

    @property
    def constant_operator(self):
        """True when diffusion and drift do not depend on x."""
        second = self.sigma if self.sigma is not None else self.diffusion
        return is_constant(second) and is_constant(self.drift)

    def with_forcing(self, forcing):
        return CoefficientSet(self.drift, self.discount, forcing,
                              diffusion=self.diffusion, sigma=self.sigma)


class IsaacsProblem():
    """
    ``H[u](x) = sup_alpha inf_beta [a^{ab}:D^2u + b^{ab}.Du - c^{ab} u + f^{ab}]``
    with finite ordered control sets.

    Controls are addressed by position: ``i`` indexes ``controls_A`` and
    ``j`` indexes ``controls_B``.

    Attributes
    ----------
    dims : int
    controls_A, controls_B : tuple
        Control labels.
    delta : float
        Ellipticity constant, eigenvalues of ``a`` lie in ``[delta, 1/delta]``.
    holder_gamma1 : float
        Hoelder exponent of the coefficients, carried as metadata.
    exact_solution : SmoothField or None
        Known solution of the continuous problem, if any.
    """
    def __init__(self, dims, controls_A, controls_B, coefficients, delta, holder_gamma1=1.0,
                 name='', exact_solution=None):
        self.dims = int(dims)
        self.controls_A = tuple(controls_A)
        self.controls_B = tuple(controls_B)
        if not self.controls_A or not self.controls_B:
            raise ProblemError("Control sets must be nonempty")
        if not 0 < delta <= 1:
            raise ProblemError(f"delta must lie in (0, 1], got {delta}")
        if not 0 < holder_gamma1 <= 1:
            raise ProblemError(f"holder_gamma1 must lie in (0, 1], got {holder_gamma1}")
        self.delta = float(delta)
        self.holder_gamma1 = float(holder_gamma1)
        self.name = name
        self.exact_solution = exact_solution

        table = []
        for alpha in self.controls_A:
            row = []
            for beta in self.controls_B:
                try:
                    row.append(coefficients[(alpha, beta)])
                except KeyError:
                    raise ProblemError(f"Missing coefficients for control pair {(alpha, beta)!r}") from None
            table.append(tuple(row))
        self._table = tuple(table)

    @property
    def n_A(self):
        return len(self.controls_A)

    @property
    def n_B(self):
        return len(self.controls_B)

    def pairs(self):
        for i in range(self.n_A):
            for j in range(self.n_B):
                yield i, j

    def coefficient_set(self, i, j):
        return self._table[i][j]

    def evaluate(self, i, j, x):
        """Coefficients of control pair ``(i, j)`` at point ``x``."""
        return self._table[i][j].at(np.asarray(x, dtype=float))

    def coefficient_map(self):
        return {(self.controls_A[i], self.controls_B[j]): self._table[i][j] for i, j in self.pairs()}

    def describe(self):
        return {'name': self.name, 'dims': self.dims, 'n_A': self.n_A, 'n_B': self.n_B,
                'delta': self.delta, 'holder_gamma1': self.holder_gamma1,
                'exact_solution': None if self.exact_solution is None else self.exact_solution.name}

    def __repr__(self):
        return f"{type(self).__name__}({self.name!r}, |A|={self.n_A}, |B|={self.n_B}, d={self.dims})"


def _sample_points(dims, domain, n_samples, rng):
    if domain is None:
        return rng.uniform(-1.0, 1.0, size=(n_samples, dims))
    lo, hi = domain.bounding_box()
    accepted = []
    for _ in range(100):
        batch = rng.uniform(lo, hi, size=(4 * n_samples, dims))
        accepted.extend(batch[domain.levels(batch) < 0])
        if len(accepted) >= n_samples:
            break
    if len(accepted) < n_samples:
        raise ProblemError(f"Could not sample {n_samples} points inside {domain!r}")
    return np.asarray(accepted[:n_samples])


def validate_problem(problem, points):
    """
    Spot-check ellipticity and coefficient bounds at ``points``.

    Raises
    ------
    EllipticityViolation
        If ``a`` is not symmetric or has an eigenvalue outside ``[delta, 1/delta]``.
    NegativeC
        If ``c < 0`` somewhere.
    """
    lo, hi = problem.delta - ELLIPTICITY_TOL, 1.0 / problem.delta + ELLIPTICITY_TOL
    bound = 1.0 / problem.delta
    excess = 0.0
    for i, j in problem.pairs():
        pair = (problem.controls_A[i], problem.controls_B[j])
        for x in points:
            a, b, c, f = problem.evaluate(i, j, x)
            if a.shape != (problem.dims, problem.dims):
                raise EllipticityViolation(f"Diffusion of {pair!r} has shape {a.shape}")
            if np.max(np.abs(a - a.T)) > ELLIPTICITY_TOL:
                raise EllipticityViolation(f"Diffusion of {pair!r} is not symmetric at {x.tolist()}")
            eig = np.linalg.eigvalsh(a)
            if eig[0] < lo or eig[-1] > hi:
                raise EllipticityViolation(
                    f"Diffusion of {pair!r} at {x.tolist()} has eigenvalues {eig.tolist()} "
                    f"outside [{problem.delta:g}, {1.0 / problem.delta:g}]")
            if c < -ELLIPTICITY_TOL:
                raise NegativeC(f"c = {c:g} < 0 for {pair!r} at {x.tolist()}")
            excess = max(excess, np.linalg.norm(b) - bound, c - bound, abs(f) - bound)
    if excess > 0:
        log.warning("Coefficients of %r exceed the bound 1/delta=%g by %.3g on sampled points",
                    problem, bound, excess)


def build_problem(dims, controls_A, controls_B, coefficients, delta, holder_gamma1=1.0, name='',
                  exact_solution=None, domain=None, sample_points=None, n_samples=100, seed=0):
    """
    Build and validate an Isaacs problem.

    Parameters
    ----------
    dims : int
    controls_A, controls_B : sequence
        Finite ordered control labels.
    coefficients : dict
        ``{(alpha, beta): CoefficientSet}`` for every pair.
    delta : float
        Ellipticity constant in ``(0, 1]``.
    holder_gamma1 : float, optional
    name : str, optional
    exact_solution : SmoothField, optional
    domain : Domain, optional
        Validation samples are drawn inside it; otherwise from ``[-1, 1]^d``.
    sample_points : array_like, optional
        Explicit validation points, overriding random sampling.
    n_samples : int, optional
        Number of random validation points per control pair (at least 100).
    seed : int, optional

    Returns
    -------
    IsaacsProblem

    Raises
    ------
    EllipticityViolation, NegativeC
    """
    problem = IsaacsProblem(dims, controls_A, controls_B, coefficients, delta,
                            holder_gamma1=holder_gamma1, name=name, exact_solution=exact_solution)
    if sample_points is None:
        sample_points = _sample_points(problem.dims, domain, max(int(n_samples), 100),
                                       np.random.default_rng(seed))
    validate_problem(problem, np.atleast_2d(np.asarray(sample_points, dtype=float)))
    log.debug("Built %r", problem)
    return problem


class _ManufacturedForcing():
    """``f(x) = -(a:D^2v + b.Dv - c v)`` for one control pair."""
    def __init__(self, coefficient_set, v):
        self.coefficient_set = coefficient_set
        self.v = v

    def __call__(self, x):
        cs = self.coefficient_set
        a = cs.diffusion_at(x)
        b = np.atleast_1d(np.asarray(cs.drift(x), dtype=float))
        c = float(cs.discount(x))
        return -(float(np.sum(a * self.v.hessian(x))) + float(b @ self.v.gradient(x)) - c * self.v(x))


def manufacture(v_exact, problem):
    """
    Replace every forcing so that ``v_exact`` solves the continuous equation.

    Each pair gets ``f^{ab} = -L^{ab} v_exact``, so every bracket of the
    Isaacs operator vanishes at ``v_exact`` and ``H[v_exact] = 0``.

    Parameters
    ----------
    v_exact : SmoothField
    problem : IsaacsProblem

    Returns
    -------
    IsaacsProblem
        A copy carrying ``v_exact`` as its exact solution.
    """
    coefficients = {key: cs.with_forcing(_ManufacturedForcing(cs, v_exact))
                    for key, cs in problem.coefficient_map().items()}
    return IsaacsProblem(problem.dims, problem.controls_A, problem.controls_B, coefficients,
                         problem.delta, holder_gamma1=problem.holder_gamma1,
                         name=f"{problem.name}+manufactured({v_exact.name})", exact_solution=v_exact)
