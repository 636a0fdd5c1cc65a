"""
Integer direction sets
----------------------
Finite sets of primitive integer vectors along which the scheme takes pure
second differences and one-sided first differences.
"""

import itertools
import logging
import math
from functools import reduce

import numpy as np

log = logging.getLogger(__name__)
log.addHandler(logging.NullHandler())

__all__ = ['Direction', 'DirectionSet', 'generate_lambda']


class Direction():
    """
    A primitive nonzero integer vector.

    Parameters
    ----------
    components : sequence of int
        Lattice steps along each coordinate.

    Raises
    ------
    ValueError
        If the vector is zero or its components share a common divisor.
    """
    __slots__ = ('components',)

    def __init__(self, components):
        components = tuple(int(c) for c in components)
        if not components or all(c == 0 for c in components):
            raise ValueError("Direction must be a nonzero integer vector")
        if reduce(math.gcd, (abs(c) for c in components)) != 1:
            raise ValueError(f"Direction {components} is not primitive (gcd != 1)")
        self.components = components

    @property
    def dims(self):
        return len(self.components)

    @property
    def vector(self):
        return np.array(self.components, dtype=float)

    @property
    def norm(self):
        return math.sqrt(sum(c * c for c in self.components))

    @property
    def is_basis(self):
        """True for the coordinate vectors ``+e_i`` and ``-e_i``."""
        return sum(c != 0 for c in self.components) == 1

    def canonical(self):
        """The member of ``{l, -l}`` whose first nonzero component is positive."""
        first = next(c for c in self.components if c != 0)
        return self if first > 0 else -self

    def __neg__(self):
        return Direction(-c for c in self.components)

    def __eq__(self, other):
        return isinstance(other, Direction) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __iter__(self):
        return iter(self.components)

    def __repr__(self):
        return f"Direction{self.components}"


def _half_set_key(direction):
    # shortest first; within a shell e_1 before e_2 and (1, 1) before (1, -1)
    return (sum(c * c for c in direction.components), tuple(-c for c in direction.components))


class DirectionSet():
    """
    A direction set closed under negation.

    Attributes
    ----------
    dims : int
        Space dimension d.
    max_norm : int
        Generation bound m on the max-norm of the members.
    half_set : tuple of Direction
        One representative per pair ``{l, -l}``, ordered by length.
    directions : tuple of Direction
        The full signed set, ``half_set[k]`` followed by its negation.
    radius : float
        Largest Euclidean length of a member, i.e. the radius of the
        smallest closed ball centred at the origin containing the set.
    """
    def __init__(self, dims, max_norm, half_set):
        self.dims = int(dims)
        self.max_norm = int(max_norm)
        self.half_set = tuple(sorted({l.canonical() for l in half_set}, key=_half_set_key))
        self.directions = tuple(itertools.chain.from_iterable((l, -l) for l in self.half_set))
        self.radius = max(l.norm for l in self.half_set)
        self.half_matrix = np.array([l.components for l in self.half_set], dtype=float)
        self.matrix = np.array([l.components for l in self.directions], dtype=float)
        self.half_matrix.setflags(write=False)
        self.matrix.setflags(write=False)

        basis = []
        for i in range(self.dims):
            e = tuple(1 if j == i else 0 for j in range(self.dims))
            try:
                basis.append(self.half_set.index(Direction(e)))
            except ValueError:
                raise ValueError(f"Direction set misses the basis vector e_{i + 1}") from None
        self.basis_indices = tuple(basis)

    def __len__(self):
        return len(self.directions)

    def __iter__(self):
        return iter(self.directions)

    def __contains__(self, direction):
        return direction in self.directions

    def __eq__(self, other):
        return isinstance(other, DirectionSet) and self.half_set == other.half_set

    def __hash__(self):
        return hash(self.half_set)

    def index(self, direction):
        """Position of ``direction`` in :attr:`directions`."""
        return self.directions.index(direction)

    def half_index(self, direction):
        """Position of ``direction`` or its negation in :attr:`half_set`."""
        return self.half_set.index(direction.canonical())

    def outer_products(self):
        """Stack of ``l l^T`` over the half set, shape ``(n_half, d, d)``."""
        return np.einsum('ki,kj->kij', self.half_matrix, self.half_matrix)

    def __repr__(self):
        return f"DirectionSet(dims={self.dims}, max_norm={self.max_norm}, size={len(self)})"


def generate_lambda(d, m):
    """
    Enumerate every primitive integer vector with max-norm at most ``m``.

    Parameters
    ----------
    d : int
        Space dimension, ``d >= 1``.
    m : int
        Max-norm bound, ``m >= 1``.

    Returns
    -------
    DirectionSet
        Symmetric set containing all ``+-e_i``; ``(d=2, m=1)`` gives the
        eight neighbours of the nine-point stencil.
    """
    d, m = int(d), int(m)
    if d < 1 or m < 1:
        raise ValueError(f"generate_lambda needs d >= 1 and m >= 1, got d={d}, m={m}")

    half = []
    for z in itertools.product(range(-m, m + 1), repeat=d):
        if all(c == 0 for c in z):
            continue
        if reduce(math.gcd, (abs(c) for c in z)) != 1:
            continue
        first = next(c for c in z if c != 0)
        if first > 0:
            half.append(Direction(z))

    lam = DirectionSet(d, m, half)
    log.debug("Generated %r with radius %.6g", lam, lam.radius)
    return lam
