"""
Monotone stencil weights
------------------------
Splits a diffusion matrix ``a`` and a drift vector ``b`` into nonnegative
weights over a direction set so that

    a = sum_k a_k l_k l_k^T     (over the half set)
    b = sum_k bbar_k l_k        (over the signed set)

which turns ``a_ij D_ij u + b_i D_i u`` into ``a_k D_k^2 u + bbar_k D_k u``.
The diffusion split is a small linear program that maximises the smallest
weight on the coordinate directions; the drift split is a sign split on the
coordinate directions.
"""

import logging
import threading

import numpy as np
from scipy.optimize import linprog

from isaacsfd.base import InsufficientStencil, SingularInput

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['Decomposition', 'decompose_diffusion', 'split_drift', 'decompose',
           'DecompositionCache', 'REASSEMBLY_TOL', 'FEASIBILITY_TOL']

REASSEMBLY_TOL = 1e-9
FEASIBILITY_TOL = 1e-10
SYMMETRY_TOL = 1e-12


class Decomposition():
    """
    Directional weights realising one ``(a, b)`` pair.

    Attributes
    ----------
    lambda_set : DirectionSet
        The direction set the weights refer to.
    second_order : ndarray, shape (n_half,)
        ``a_k`` per half-set direction.
    first_order : ndarray, shape (n_directions,)
        ``bbar_k`` per signed direction.
    basis_floor : float
        Smallest ``a_k`` over the coordinate directions.
    """
    def __init__(self, lambda_set, second_order, first_order, basis_floor):
        self.lambda_set = lambda_set
        self.second_order = np.asarray(second_order, dtype=float)
        self.first_order = np.asarray(first_order, dtype=float)
        self.basis_floor = float(basis_floor)
        self.second_order.setflags(write=False)
        self.first_order.setflags(write=False)

    def diffusion(self):
        """Reassembled ``sum_k a_k l_k l_k^T``."""
        return np.einsum('k,kij->ij', self.second_order, self.lambda_set.outer_products())

    def drift(self):
        """Reassembled ``sum_k bbar_k l_k``."""
        return self.first_order @ self.lambda_set.matrix

    def with_drift(self, other):
        """Combine this second-order part with the first-order part of ``other``."""
        return Decomposition(self.lambda_set, self.second_order, other.first_order, self.basis_floor)

    def weights(self):
        """``{direction: a_k}`` over the half set, in half-set order."""
        return dict(zip(self.lambda_set.half_set, self.second_order.tolist()))

    def __eq__(self, other):
        return (isinstance(other, Decomposition) and self.lambda_set == other.lambda_set
                and np.array_equal(self.second_order, other.second_order)
                and np.array_equal(self.first_order, other.first_order))

    def __repr__(self):
        return (f"Decomposition(second_order={self.second_order.tolist()}, "
                f"first_order={self.first_order.tolist()}, basis_floor={self.basis_floor:.6g})")


def _check_matrix(a, dims):
    a = np.asarray(a, dtype=float)
    if a.ndim == 0 and dims == 1:
        a = a.reshape(1, 1)
    if a.shape != (dims, dims):
        raise SingularInput(f"Diffusion must be a {dims}x{dims} matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise SingularInput("Diffusion matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
        raise SingularInput("Diffusion matrix is not symmetric")
    return 0.5 * (a + a.T)


def _polish(weights, columns, target, optimum, basis):
    """
    Remove the solver's rounding from the LP weights.

    The smallest correction on the support that makes the equality system
    hold exactly is added to the LP solution, so the weights stay at the LP
    vertex up to rounding. The correction is dropped if it makes a weight
    negative or pulls the coordinate floor below the LP optimum.
    """
    clipped = np.clip(weights, 0.0, None)
    support = clipped > FEASIBILITY_TOL
    if not np.any(support):
        return clipped
    sub = columns[:, support]
    correction, *_ = np.linalg.lstsq(sub, target - sub @ clipped[support], rcond=None)
    polished = clipped.copy()
    polished[support] += correction
    if np.min(polished) < -FEASIBILITY_TOL or np.min(polished[basis]) < optimum - FEASIBILITY_TOL:
        return clipped
    polished = np.clip(polished, 0.0, None)
    old = np.max(np.abs(columns @ clipped - target))
    new = np.max(np.abs(columns @ polished - target))
    return polished if new <= old else clipped


def decompose_diffusion(a, lambda_set, delta1_min=0.0):
    """
    Split a symmetric positive definite matrix into nonnegative directional weights.

    Solves::

        max t   s.t.   sum_k a_k l_k l_k^T = a,   a_k >= 0,   a_{e_i} >= t

    over the half set of ``lambda_set``.

    Parameters
    ----------
    a : array_like, shape (d, d)
        Symmetric diffusion matrix (scalar allowed when d = 1).
    lambda_set : DirectionSet
        Directions available to the stencil.
    delta1_min : float, optional
        Required floor for the coordinate-direction weights.

    Returns
    -------
    Decomposition
        Second-order weights; the first-order part is zero.

    Raises
    ------
    InsufficientStencil
        If the program is infeasible or its optimum is below ``delta1_min``.
    SingularInput
        If ``a`` is not a finite symmetric matrix.
    """
    d = lambda_set.dims
    a = _check_matrix(a, d)

    iu = np.triu_indices(d)
    outer = lambda_set.outer_products()
    n = len(lambda_set.half_set)
    columns = np.stack([outer[k][iu] for k in range(n)], axis=1)
    target = a[iu]

    # variables: a_1 .. a_n, t
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_eq = np.hstack([columns, np.zeros((columns.shape[0], 1))])
    a_ub = np.zeros((d, n + 1))
    for row, k in enumerate(lambda_set.basis_indices):
        a_ub[row, k] = -1.0
        a_ub[row, -1] = 1.0
    bounds = [(0.0, None)] * n + [(None, None)]

    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(d), A_eq=a_eq, b_eq=target, bounds=bounds,
                  method='highs-ds',
                  options={'primal_feasibility_tolerance': FEASIBILITY_TOL,
                           'dual_feasibility_tolerance': FEASIBILITY_TOL})
    if res.status != 0:
        raise InsufficientStencil(
            f"No nonnegative split of {a.tolist()} over {lambda_set!r} ({res.message.strip()}); "
            "increase the direction max-norm")

    basis = list(lambda_set.basis_indices)
    weights = _polish(np.asarray(res.x[:n]), columns, target, float(res.x[-1]), basis)
    residual = float(np.max(np.abs(columns @ weights - target)))
    if residual > REASSEMBLY_TOL:
        raise InsufficientStencil(f"Split of {a.tolist()} reassembles only to {residual:.3g}")

    floor = float(np.min(weights[basis]))
    if floor < delta1_min - FEASIBILITY_TOL:
        raise InsufficientStencil(
            f"Best coordinate weight {floor:.6g} for {a.tolist()} is below the floor "
            f"{delta1_min:.6g} on {lambda_set!r}; increase the direction max-norm")

    log.debug("Decomposed %s with basis floor %.6g", a.tolist(), floor)
    return Decomposition(lambda_set, weights, np.zeros(len(lambda_set)), floor)


def split_drift(b, lambda_set):
    """
    Sign-split a drift vector on the coordinate directions.

    ``bbar_{+e_i} = max(b_i, 0)`` and ``bbar_{-e_i} = max(-b_i, 0)``; every
    other weight is zero.

    Returns
    -------
    Decomposition
        First-order weights; the second-order part is zero.
    """
    d = lambda_set.dims
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if b.shape != (d,):
        raise SingularInput(f"Drift must be a vector of length {d}, got shape {b.shape}")
    if not np.all(np.isfinite(b)):
        raise SingularInput("Drift vector has non-finite entries")

    first = np.zeros(len(lambda_set))
    for i, k in enumerate(lambda_set.basis_indices):
        # directions[2k] is +e_i and directions[2k + 1] is -e_i
        first[2 * k] = max(b[i], 0.0)
        first[2 * k + 1] = max(-b[i], 0.0)
    return Decomposition(lambda_set, np.zeros(len(lambda_set.half_set)), first, 0.0)


def decompose(a, b, lambda_set, delta1_min=0.0):
    """Full decomposition of ``(a, b)``: LP diffusion split plus drift sign split."""
    return decompose_diffusion(a, lambda_set, delta1_min).with_drift(split_drift(b, lambda_set))


def _round_key(values):
    return tuple(float(f"{v:.12g}") for v in np.ravel(values))


class DecompositionCache():
    """
    Thread-safe memo of decompositions keyed by rounded coefficient values.

    Coefficients vary with x, so the same ``(a, b)`` recurs for constant or
    piecewise-constant fields; values are rounded to 12 significant digits
    before lookup.

    Parameters
    ----------
    lambda_set : DirectionSet
    delta1_min : float, optional
        Floor passed to :func:`decompose_diffusion`.
    """
    def __init__(self, lambda_set, delta1_min=0.0):
        self.lambda_set = lambda_set
        self.delta1_min = float(delta1_min)
        self._lock = threading.Lock()
        self._diffusion = {}
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._diffusion)

    def diffusion(self, a):
        key = _round_key(a)
        with self._lock:
            found = self._diffusion.get(key)
            if found is not None:
                self.hits += 1
                return found
        dec = decompose_diffusion(a, self.lambda_set, self.delta1_min)
        with self._lock:
            self.misses += 1
            return self._diffusion.setdefault(key, dec)

    def get(self, a, b):
        """Decomposition of ``(a, b)``; the drift split is cheap and never cached."""
        return self.diffusion(a).with_drift(split_drift(b, self.lambda_set))

    @property
    def min_basis_floor(self):
        with self._lock:
            floors = [dec.basis_floor for dec in self._diffusion.values()]
        return min(floors) if floors else float('nan')
