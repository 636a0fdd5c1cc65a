"""
Pucci-type majorant
-------------------
A convex, positively homogeneous extremal operator

    P(u) = max_{(M, s)} [ tr(M u'') + delta_hat^{-1} sum_i s_i u'_i ]

taken over a finite family of matrices ``M`` with eigenvalues in
``[delta_hat, 1/delta_hat]`` and all sign patterns ``s``. Each member is a
constant-coefficient operator with zero discount, so the family can be
added to an Isaacs problem as extra controls.

The matrices are directional: ``delta_hat I``, ``delta_hat^{-1} I`` and,
for every half-set direction ``l``, ``delta_hat I + (delta_hat^{-1} -
delta_hat) l l^T / |l|^2``, which stretches one direction to the upper
ellipticity bound.
"""

import itertools
import logging

import numpy as np

from isaacsfd.base import constant
from isaacsfd.problems._problem_base import CoefficientSet

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['PucciFamily', 'make_pucci']


class PucciFamily():
    """
    Finite max-of-linear extremal operator.

    Attributes
    ----------
    delta_hat : float
    lambda_set : DirectionSet
    matrices : tuple of ndarray
        Second-order slopes; the first is ``delta_hat I`` and the last is
        the maximal member ``delta_hat^{-1} I``.
    signs : tuple of tuple of int
        All ``2^d`` drift sign patterns.
    drift_bound : float
        ``1 / delta_hat``.
    """
    def __init__(self, delta_hat, lambda_set, matrices, signs):
        self.delta_hat = float(delta_hat)
        self.lambda_set = lambda_set
        self.matrices = tuple(matrices)
        self.signs = tuple(signs)
        self.drift_bound = 1.0 / self.delta_hat
        self.members = tuple((M, self.drift_bound * np.array(s, dtype=float))
                             for M in self.matrices for s in self.signs)

    @property
    def dims(self):
        return self.lambda_set.dims

    def __len__(self):
        return len(self.members)

    def linear_values(self, grad, hess):
        """Values of every member on the symbol ``(grad, hess)``."""
        grad = np.atleast_1d(np.asarray(grad, dtype=float))
        hess = np.atleast_2d(np.asarray(hess, dtype=float))
        return np.array([float(np.sum(M * hess)) + float(b @ grad) for M, b in self.members])

    def __call__(self, grad, hess):
        """``P(u)`` on the symbol; the value ``u'_0`` does not enter (c = 0)."""
        return float(np.max(self.linear_values(grad, hess)))

    def lower(self, grad, hess):
        """``-P(-u) = min`` over the members."""
        return float(np.min(self.linear_values(grad, hess)))

    def coefficient_sets(self, forcing):
        """One constant :class:`CoefficientSet` per member, all with forcing ``forcing``."""
        return [CoefficientSet(constant(b), constant(0.0), constant(forcing), diffusion=constant(M))
                for M, b in self.members]

    def describe(self):
        return {'delta_hat': self.delta_hat, 'n_matrices': len(self.matrices),
                'n_signs': len(self.signs), 'n_members': len(self)}

    def __repr__(self):
        return f"PucciFamily(delta_hat={self.delta_hat:g}, members={len(self)})"


def make_pucci(delta_hat, lambda_set):
    """
    Build the directional Pucci family for a direction set.

    Parameters
    ----------
    delta_hat : float
        Ellipticity of the family, in ``(0, 1]``.
    lambda_set : DirectionSet

    Returns
    -------
    PucciFamily
    """
    if not 0 < delta_hat <= 1:
        raise ValueError(f"delta_hat must lie in (0, 1], got {delta_hat}")
    d = lambda_set.dims
    lo, hi = float(delta_hat), 1.0 / float(delta_hat)
    eye = np.eye(d)

    candidates = [lo * eye]
    for l in lambda_set.half_set:
        v = l.vector
        candidates.append(lo * eye + (hi - lo) * np.outer(v, v) / (v @ v))
    candidates.append(hi * eye)

    matrices = []
    for M in candidates:
        if any(np.allclose(M, other, rtol=0.0, atol=1e-14) for other in matrices):
            continue
        eig = np.linalg.eigvalsh(M)
        if eig[0] < lo - 1e-12 or eig[-1] > hi + 1e-12:
            raise AssertionError(f"Pucci member {M.tolist()} leaves S_{lo:g}")
        matrices.append(M)

    signs = list(itertools.product((1, -1), repeat=d))
    family = PucciFamily(delta_hat, lambda_set, matrices, signs)
    log.debug("Built %r with %d matrices", family, len(matrices))
    return family
