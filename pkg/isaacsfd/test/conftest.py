import numpy as np
import pytest

from isaacsfd.base import constant
from isaacsfd.grid import Ball, build_grid, interval
from isaacsfd.problems import CoefficientSet, build_catalog_problem, build_problem
from isaacsfd.stencil import generate_lambda


def linear_problem(a, b, c, f, delta=0.5, dims=None):
    """Single-control constant-coefficient problem."""
    a = np.atleast_2d(np.asarray(a, dtype=float))
    dims = a.shape[0] if dims is None else dims
    cs = CoefficientSet(constant(np.atleast_1d(np.asarray(b, dtype=float))), constant(c), constant(f),
                        diffusion=constant(a))
    return build_problem(dims, [0], [0], {(0, 0): cs}, delta, name='linear')


def random_s_delta(rng, dims, delta):
    """Symmetric matrix with eigenvalues drawn uniformly from ``[delta, 1/delta]``."""
    q, _ = np.linalg.qr(rng.normal(size=(dims, dims)))
    eig = rng.uniform(delta, 1.0 / delta, size=dims)
    a = q @ np.diag(eig) @ q.T
    return 0.5 * (a + a.T)


def dominant_matrix(rng):
    """2x2 diagonally dominant matrix with eigenvalues in ``[0.5, 2]``."""
    d1, d2 = rng.uniform(1.0, 1.5, size=2)
    off = rng.uniform(-0.5, 0.5)
    return np.array([[d1, off], [off, d2]])


@pytest.fixture(scope='session')
def lam1():
    return generate_lambda(1, 1)


@pytest.fixture(scope='session')
def lam2():
    return generate_lambda(2, 1)


@pytest.fixture(scope='session')
def disk():
    return Ball([0.0, 0.0], 1.0)


@pytest.fixture(scope='session')
def disk_grid(disk, lam2):
    return build_grid(disk, 0.1, lam2)


@pytest.fixture(scope='session')
def coarse_disk_grid(disk, lam2):
    return build_grid(disk, 0.2, lam2)


@pytest.fixture(scope='session')
def line_grid(lam1):
    return build_grid(interval(), 0.25, lam1)


@pytest.fixture(scope='session')
def isaacs_problem():
    return build_catalog_problem('isaacs-2x2', 2, [1.0, 1.0])


@pytest.fixture(scope='session')
def poisson_disk():
    return build_catalog_problem('poisson-ball', 2, [1.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
