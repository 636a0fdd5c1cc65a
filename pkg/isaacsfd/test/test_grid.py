import numpy as np
import pytest

from isaacsfd.base import EmptyInterior, GridMismatch, NonFiniteValue, StencilEscape
from isaacsfd.grid import (Ball, Ellipsoid, GridFunction, LevelSetDomain, build_grid, interval, restrict,
                           sup_diff)
from isaacsfd.problems import fields
from isaacsfd.stencil import generate_lambda


def test_interval_grid_classification(line_grid):
    np.testing.assert_allclose(line_grid.points[:, 0], [-0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75])
    np.testing.assert_allclose(line_grid.points[line_grid.interior, 0], [-0.5, -0.25, 0.0, 0.25, 0.5])
    np.testing.assert_allclose(line_grid.points[line_grid.boundary, 0], [-0.75, 0.75])


def test_points_are_lexicographic(disk_grid):
    keys = [tuple(k) for k in disk_grid.lattice.tolist()]
    assert keys == sorted(keys)


def test_interior_stencil_closure(disk_grid, lam2):
    for r, i in enumerate(disk_grid.interior):
        x = disk_grid.points[i]
        assert np.linalg.norm(x) + disk_grid.h * lam2.radius < 1.0
        for j, l in enumerate(lam2.directions):
            target = disk_grid.neighbours[r, j]
            np.testing.assert_allclose(disk_grid.points[target], x + disk_grid.h * l.vector, atol=1e-12)


def test_boundary_points_fail_the_ball_test(disk_grid):
    x = disk_grid.points[disk_grid.boundary]
    r = disk_grid.h * disk_grid.radius
    assert np.all(np.linalg.norm(x, axis=1) + r >= 1.0 - 1e-12)
    assert np.all(np.linalg.norm(x, axis=1) < 1.0)


def test_interval_at_half_spacing(lam1):
    grid = build_grid(interval(), 0.5, lam1)
    np.testing.assert_allclose(grid.points[:, 0], [-0.5, 0.0, 0.5])
    np.testing.assert_allclose(grid.points[grid.interior, 0], [0.0])
    np.testing.assert_allclose(grid.points[grid.boundary, 0], [-0.5, 0.5])


def test_unit_disk_at_half_spacing(disk, lam2):
    grid = build_grid(disk, 0.5, lam2)
    assert grid.size == 9
    np.testing.assert_allclose(grid.points[grid.interior], [[0.0, 0.0]])
    assert grid.boundary.size == 8
    u = restrict(fields.quadratic(np.eye(2)), grid)
    assert u.at([0.5, -0.5]) == pytest.approx(0.5)


def test_halving_h_quadruples_the_disk_grid(disk, lam2):
    sizes = [build_grid(disk, h, lam2).size for h in (0.25, 0.125, 0.0625, 0.03125)]
    assert sizes[0] == 45
    for coarse, fine in zip(sizes, sizes[1:]):
        assert fine >= 4 * coarse


def test_disk_interior_is_connected(disk_grid):
    assert disk_grid.components() == 1
    assert disk_grid.describe()['components'] == 1


def test_empty_interior():
    with pytest.raises(EmptyInterior):
        build_grid(Ball([0.0, 0.0], 1.0), 5.0, generate_lambda(2, 1))


def test_grid_rejects_mismatched_dimensions(lam1):
    with pytest.raises(ValueError):
        build_grid(Ball([0.0, 0.0], 1.0), 0.1, lam1)


def test_shift_leaving_the_grid(line_grid):
    last = line_grid.locate([0.75])
    with pytest.raises(StencilEscape):
        line_grid.shift(last, (1,))
    assert line_grid.shift(last, (1,), steps=-1) == line_grid.locate([0.5])


def test_locate_outside(line_grid):
    with pytest.raises(StencilEscape):
        line_grid.locate([2.0])


def test_grid_function_checks(line_grid):
    with pytest.raises(GridMismatch):
        GridFunction(line_grid, np.zeros(3))
    values = np.zeros(line_grid.size)
    values[2] = np.nan
    with pytest.raises(NonFiniteValue):
        GridFunction(line_grid, values)


def test_restrict_and_sup_diff(line_grid):
    v = fields.ellipsoidal_polynomial([1.0], amplitude=0.5)
    u = restrict(v, line_grid)
    assert u.at([0.0]) == pytest.approx(0.5)
    np.testing.assert_allclose(u.boundary_values(), [0.5 * (1 - 0.75 ** 2)] * 2)
    zero = GridFunction.zeros(line_grid)
    assert sup_diff(u, zero) == pytest.approx(0.5)
    assert sup_diff(u, zero, 'boundary') == pytest.approx(0.5 * (1 - 0.75 ** 2))
    with pytest.raises(ValueError):
        sup_diff(u, zero, 'edges')


def test_sup_diff_needs_the_same_grid(line_grid, lam1):
    other = build_grid(interval(), 0.125, lam1)
    with pytest.raises(GridMismatch):
        sup_diff(GridFunction.zeros(line_grid), GridFunction.zeros(other))


def test_ellipsoid_exact_distance():
    domain = Ellipsoid([2.0, 1.0])
    assert domain.contains_ball([0.0, 0.0], 0.99)
    assert not domain.contains_ball([0.0, 0.0], 1.01)
    assert domain.contains_ball([0.0, 0.5], 0.49)
    assert not domain.contains_ball([0.0, 0.5], 0.51)
    assert not domain.contains_ball([3.0, 0.0], 0.1)


def test_ellipsoid_grid_matches_ball_when_round(lam2):
    ball = build_grid(Ball([0.0, 0.0], 1.0), 0.2, lam2)
    round_ellipsoid = build_grid(Ellipsoid([1.0, 1.0]), 0.2, lam2)
    assert ball.same_as(round_ellipsoid)
    np.testing.assert_array_equal(ball.interior_mask, round_ellipsoid.interior_mask)


def test_level_set_domain_is_conservative():
    domain = LevelSetDomain(lambda x: float(x @ x) - 1.0, [-1.0, -1.0], [1.0, 1.0], lipschitz=2.0)
    assert domain.contains_ball(np.zeros(2), 0.4)
    assert not domain.contains_ball(np.zeros(2), 0.6)
    grid = build_grid(domain, 0.2, generate_lambda(2, 1))
    exact = build_grid(Ball([0.0, 0.0], 1.0), 0.2, generate_lambda(2, 1))
    assert grid.size == exact.size
    assert grid.n_interior <= exact.n_interior
