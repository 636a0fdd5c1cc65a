"""
Truncated equations by operator fusion
--------------------------------------
``max(H[u], P[u] - K)`` is again an Isaacs operator over the enlarged
max-player set ``A_1 + A_2`` with forcing ``-K`` on the Pucci part, and
``min(H[u], -P[-u] + K)`` is one over the enlarged min-player set
``B_1 + B_2`` with forcing ``+K`` on the Pucci part. The Pucci controls do
not depend on the opponent's control.
"""

import logging

import numpy as np

from isaacsfd.problems._problem_base import IsaacsProblem

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['FusedProblem', 'fuse', 'MAX_FUSE', 'MIN_FUSE']

MAX_FUSE = 'max-fuse'
MIN_FUSE = 'min-fuse'


class FusedProblem(IsaacsProblem):
    """
    An Isaacs problem whose operator is ``max(H, P - K)`` or ``min(H, -P[-.] + K)``.

    Control labels of the base problem become ``('H', label)``; Pucci members
    become ``('P', m)``.

    Attributes
    ----------
    base : IsaacsProblem
    pucci : PucciFamily
    K : float
    mode : str
        ``'max-fuse'`` or ``'min-fuse'``.
    """
    def __init__(self, base, pucci, K, mode):
        if K < 0:
            raise ValueError(f"Truncation level must be nonnegative, got {K}")
        if mode not in (MAX_FUSE, MIN_FUSE):
            raise ValueError(f"mode must be {MAX_FUSE!r} or {MIN_FUSE!r}, got {mode!r}")
        self.base = base
        self.pucci = pucci
        self.K = float(K)
        self.mode = mode

        base_A = [('H', a) for a in base.controls_A]
        base_B = [('H', b) for b in base.controls_B]
        extra = [('P', m) for m in range(len(pucci))]
        coefficients = {(('H', a), ('H', b)): cs for (a, b), cs in base.coefficient_map().items()}
        if mode == MAX_FUSE:
            members = pucci.coefficient_sets(-self.K)
            for label, cs in zip(extra, members):
                for beta in base_B:
                    coefficients[(label, beta)] = cs
            controls_A, controls_B = base_A + extra, base_B
        else:
            members = pucci.coefficient_sets(self.K)
            for label, cs in zip(extra, members):
                for alpha in base_A:
                    coefficients[(alpha, label)] = cs
            controls_A, controls_B = base_A, base_B + extra

        super().__init__(base.dims, controls_A, controls_B, coefficients,
                         min(base.delta, pucci.delta_hat), holder_gamma1=base.holder_gamma1,
                         name=f"{base.name}[{mode}, K={self.K:g}]")

    def truncation_active(self, alpha_idx, beta_idx):
        """
        Mask of points whose optimal control lies in the Pucci part.

        Parameters
        ----------
        alpha_idx, beta_idx : ndarray of int
            Optimal control indices per point, as returned by the discrete
            Hamiltonian.
        """
        if self.mode == MAX_FUSE:
            return np.asarray(alpha_idx) >= self.base.n_A
        return np.asarray(beta_idx) >= self.base.n_B

    def describe(self):
        out = super().describe()
        out.update({'mode': self.mode, 'K': self.K, 'pucci': self.pucci.describe()})
        return out


def fuse(problem, pucci, K, mode):
    """
    Fuse an Isaacs problem with a Pucci family at truncation level ``K``.

    Parameters
    ----------
    problem : IsaacsProblem
    pucci : PucciFamily
    K : float
        ``K >= 0``.
    mode : {'max-fuse', 'min-fuse'}

    Returns
    -------
    FusedProblem
    """
    fused = FusedProblem(problem, pucci, K, mode)
    log.debug("Fused %r", fused)
    return fused
