import numpy as np
import pytest

from conftest import linear_problem
from isaacsfd.base import ConfigurationError, MaxIterExceeded, constant
from isaacsfd.grid import GridFunction, build_grid, interval, sup_diff
from isaacsfd.operators import DiscreteOperator
from isaacsfd.problems import CATALOG, CoefficientSet, build_catalog_problem, build_problem
from isaacsfd.solvers import (METHODS, GaussSeidelSolver, PolicyIterationSolver, SolverConfig, SolverReport,
                              check_comparison, ensure_converged, residual, solve, solve_operator)


def test_zero_forcing_gives_zero(disk_grid):
    problem = linear_problem(np.eye(2), [0.0, 0.0], 0.0, 0.0)
    for method in METHODS:
        v, report = solve(problem, disk_grid, SolverConfig(method=method))
        assert report.iterations == 0
        assert report.converged
        assert v.sup_norm() == 0.0


@pytest.mark.parametrize('method', METHODS)
@pytest.mark.parametrize('h', [0.25, 0.125])
def test_one_dimensional_poisson_matches_the_parabola(lam1, method, h):
    # second differences are exact on quadratics, so the discrete solution is
    # the parabola vanishing at the outermost grid points
    grid = build_grid(interval(), h, lam1)
    edge = float(np.max(grid.points))
    v, report = solve(linear_problem([[1.0]], [0.0], 0.0, 2.0), grid, SolverConfig(method=method))
    assert report.converged
    np.testing.assert_allclose(v.values, edge ** 2 - grid.points[:, 0] ** 2, atol=1e-8)


def test_dominated_control_is_never_used(lam1):
    grid = build_grid(interval(), 0.125, lam1)

    def pair(f):
        return CoefficientSet(constant([0.0]), constant(0.0), constant(f), diffusion=constant([[1.0]]))

    two = build_problem(1, [0, 1], [0], {(0, 0): pair(1.0), (1, 0): pair(2.0)}, 0.5)
    one = build_problem(1, [0], [0], {(0, 0): pair(2.0)}, 0.5)
    for method in METHODS:
        v2, _ = solve(two, grid, SolverConfig(method=method))
        v1, _ = solve(one, grid, SolverConfig(method=method))
        assert sup_diff(v1, v2) <= 1e-8


def _agreement(problem, grid):
    solutions = {method: solve(problem, grid, SolverConfig(method=method))[0] for method in METHODS}
    reference = solutions['policy']
    for method, v in solutions.items():
        assert sup_diff(v, reference) <= 1e-6, method


def test_methods_agree(isaacs_problem, coarse_disk_grid):
    _agreement(isaacs_problem, coarse_disk_grid)


@pytest.mark.slow
@pytest.mark.parametrize('name', sorted(CATALOG))
def test_methods_agree_on_every_catalog_problem(name, disk_grid):
    problem = build_catalog_problem(name, 2, [1.0, 1.0])
    solutions, tol = {}, 0.0
    for method in METHODS:
        solutions[method], report = solve(problem, disk_grid, SolverConfig(method=method))
        tol = max(tol, report.tol)
    for method, v in solutions.items():
        assert sup_diff(v, solutions['policy']) <= 10 * tol, method


@pytest.mark.parametrize('name', sorted(CATALOG))
def test_jacobi_residual_never_increases(name, coarse_disk_grid):
    problem = build_catalog_problem(name, 2, [1.0, 1.0])
    _, report = solve(problem, coarse_disk_grid, SolverConfig(method='jacobi', report_every=1))
    residuals = [r for _, r in report.history]
    assert len(residuals) == report.iterations + 1
    for before, after in zip(residuals, residuals[1:]):
        assert after <= before * (1 + 1e-12) + 1e-15


@pytest.mark.parametrize('name', sorted(CATALOG))
def test_solution_does_not_depend_on_the_start(name, coarse_disk_grid, rng):
    problem = build_catalog_problem(name, 2, [1.0, 1.0])
    start = rng.uniform(-1.0, 1.0, coarse_disk_grid.size)
    v0, report0 = solve(problem, coarse_disk_grid)
    v1, report = solve(problem, coarse_disk_grid, SolverConfig(method='gauss-seidel'), initial=start)
    assert report.converged
    assert sup_diff(v0, v1) <= 10 * max(report0.tol, report.tol)
    # boundary values are reset whatever the start
    assert np.all(v1.boundary_values() == 0.0)


@pytest.mark.parametrize('method', ['jacobi', 'gauss-seidel'])
@pytest.mark.parametrize('name', sorted(CATALOG))
def test_iterates_stay_bounded(name, method, coarse_disk_grid):
    # the sweeps are nonexpansive, so no iterate from zero is further from v_h than zero is
    problem = build_catalog_problem(name, 2, [1.0, 1.0])
    v, report = solve(problem, coarse_disk_grid, SolverConfig(method=method))
    bound = v.sup_norm() + 10 * report.tol
    for cap in (2 ** k for k in range(14)):
        u, partial = solve(problem, coarse_disk_grid, SolverConfig(method=method, max_iter=cap))
        assert sup_diff(u, v) <= bound
        assert u.sup_norm() <= 2 * bound
        if partial.converged:
            break


def test_level_sweeps_match_point_by_point_sweeps(isaacs_problem, coarse_disk_grid, rng):
    operator = DiscreteOperator(isaacs_problem, coarse_disk_grid)
    solver = GaussSeidelSolver(operator, SolverConfig(method='gauss-seidel'))
    tau = operator.timestep(1.0)
    interior = coarse_disk_grid.interior
    start = rng.uniform(-1.0, 1.0, coarse_disk_grid.size)
    start[coarse_disk_grid.boundary] = 0.0
    for forward in (True, False):
        expected = start.copy()
        rows = range(coarse_disk_grid.n_interior)
        for r in (rows if forward else reversed(rows)):
            H, _, _ = operator.hamiltonian(expected)
            expected[interior[r]] += tau[r] * H[r]
        values = start.copy()
        solver.sweep(values, tau, forward=forward)
        np.testing.assert_allclose(values, expected, rtol=0.0, atol=1e-13)
    levels, _ = solver.levels
    visited = np.sort(np.concatenate([rows for rows, _, _ in levels]))
    np.testing.assert_array_equal(visited, np.arange(coarse_disk_grid.n_interior))
    assert len(levels) < coarse_disk_grid.n_interior


@pytest.mark.parametrize('grid_name', ['coarse_disk_grid', 'disk_grid'])
def test_policy_iteration_is_fast_on_bellman_problems(request, grid_name):
    grid = request.getfixturevalue(grid_name)
    problem = build_catalog_problem('bellman-2', 2, [1.0, 1.0])
    _, report = solve(problem, grid, SolverConfig(method='policy'))
    assert report.converged
    assert report.iterations <= 50
    assert not report.fallback


def test_residual_of_zero_is_the_forcing(coarse_disk_grid):
    problem = linear_problem(np.eye(2), [0.0, 0.0], 0.0, 1.0)
    assert residual(problem, GridFunction.zeros(coarse_disk_grid)) == pytest.approx(1.0)


def test_residual_after_a_point_perturbation(isaacs_problem, coarse_disk_grid):
    v, report = solve(isaacs_problem, coarse_disk_grid)
    operator = DiscreteOperator(isaacs_problem, coarse_disk_grid)
    eps = 1e-3
    bumped = v.copy()
    bumped.values[coarse_disk_grid.interior[3]] += eps
    bound = report.residual + eps * float(np.max(operator.max_diagonal()))
    assert residual(isaacs_problem, bumped) <= bound * (1 + 1e-9)


def test_unit_forcing_increase_raises_the_centre(poisson_disk, coarse_disk_grid):
    operator = DiscreteOperator(poisson_disk, coarse_disk_grid)
    ones = np.ones(coarse_disk_grid.n_interior)
    base, _ = solve_operator(operator)
    raised, _ = solve_operator(operator.with_forcing_shift(ones))
    centre = coarse_disk_grid.locate([0.0, 0.0])
    assert raised.values[centre] - base.values[centre] > 0.05
    assert np.all(raised.interior_values() >= base.interior_values())


def test_comparison_check(isaacs_problem, coarse_disk_grid):
    result = check_comparison(isaacs_problem, coarse_disk_grid, trials=3, seed=4)
    assert result['trials'] == 3
    assert result['sign_checked']
    assert result['min_increase'] >= -2 * result['tol']


@pytest.mark.slow
def test_comparison_check_many_trials(isaacs_problem, disk_grid):
    result = check_comparison(isaacs_problem, disk_grid, trials=50, seed=5)
    assert result['min_increase'] >= -2 * result['tol']


def test_comparison_needs_a_trial(poisson_disk, coarse_disk_grid):
    with pytest.raises(ValueError):
        check_comparison(poisson_disk, coarse_disk_grid, trials=0)


def test_iteration_cap(poisson_disk, disk_grid, caplog):
    v, report = solve(poisson_disk, disk_grid, SolverConfig(method='jacobi', max_iter=2))
    assert not report.converged
    assert report.iterations == 2
    assert 'stopped after 2 iterations' in caplog.text
    with pytest.raises(MaxIterExceeded) as err:
        ensure_converged(v, report)
    assert err.value.solution is v
    assert err.value.report is report


def test_report_to_dict(poisson_disk, coarse_disk_grid):
    _, report = solve(poisson_disk, coarse_disk_grid)
    data = report.to_dict()
    assert data['converged'] is True
    assert data['method'] == 'policy'
    assert data['history'][0][0] == 0


@pytest.mark.parametrize('changes', [
    {'method': 'newton'},
    {'theta': 0.0},
    {'theta': 1.5},
    {'tol': -1.0},
    {'max_iter': 0},
    {'report_every': 0},
    {'policy_linear': 'cg'},
    {'basis_floor': -0.1},
])
def test_solver_config_validation(changes):
    with pytest.raises(ConfigurationError):
        SolverConfig(**changes)


def test_solver_config_defaults():
    config = SolverConfig()
    assert config.method == 'policy'
    assert config.policy_linear == 'sweep'
    assert config.resolved_tol(2.0) == pytest.approx(3e-9)
    assert config.resolved_max_iter() == 100
    assert config.replace(method='jacobi').resolved_max_iter() == 10 ** 6
    assert config.replace(tol=1e-6).resolved_tol(2.0) == 1e-6


def test_policy_sweeps_match_direct_solves(isaacs_problem, coarse_disk_grid):
    direct, _ = solve(isaacs_problem, coarse_disk_grid, SolverConfig(policy_linear='direct'))
    sweeps, report = solve(isaacs_problem, coarse_disk_grid, SolverConfig(policy_linear='sweep'))
    assert report.converged
    assert report.linear_solves >= 1
    assert sup_diff(direct, sweeps) <= 1e-6


def test_policy_fallback_finishes_with_sweeps(isaacs_problem, coarse_disk_grid):
    operator = DiscreteOperator(isaacs_problem, coarse_disk_grid)
    solver = PolicyIterationSolver(operator, SolverConfig())
    values = np.zeros(coarse_disk_grid.size)
    report = SolverReport(method='policy', tol=solver.tol)
    solver._fallback(values, report, 'was asked to')
    assert report.fallback
    assert operator.residual(values) <= solver.tol
