import numpy as np
import pytest

from conftest import linear_problem
from isaacsfd.base import ConfigurationError, EllipticityViolation, NegativeC, ProblemError, constant
from isaacsfd.operators import Symbol, evaluate_symbol
from isaacsfd.problems import (CATALOG, MAX_FUSE, MIN_FUSE, CoefficientSet, build_catalog_problem,
                               build_problem, fields, fuse, make_pucci)
from isaacsfd.stencil import generate_lambda


def test_ellipticity_is_checked():
    with pytest.raises(EllipticityViolation):
        linear_problem(np.diag([3.0, 1.0]), [0.0, 0.0], 0.0, 1.0, delta=0.5)
    with pytest.raises(EllipticityViolation):
        linear_problem(np.diag([0.1, 1.0]), [0.0, 0.0], 0.0, 1.0, delta=0.5)


def test_negative_discount_is_rejected():
    with pytest.raises(NegativeC):
        linear_problem(np.eye(2), [0.0, 0.0], -0.5, 1.0)


def test_missing_pair_is_rejected():
    cs = CoefficientSet(constant([0.0]), constant(0.0), constant(1.0), diffusion=constant([[1.0]]))
    with pytest.raises(ProblemError):
        build_problem(1, [0, 1], [0], {(0, 0): cs}, 0.5)


def test_bound_excess_only_warns(caplog):
    problem = linear_problem(np.eye(2), [0.0, 0.0], 0.0, 5.0, delta=0.5)
    assert problem.n_A == 1
    assert 'exceed the bound' in caplog.text


def test_sigma_gives_half_outer_product():
    sigma = np.array([[1.0, 0.0], [0.5, 1.0]])
    cs = CoefficientSet(constant([0.0, 0.0]), constant(0.0), constant(0.0), sigma=constant(sigma))
    np.testing.assert_allclose(cs.diffusion_at(np.zeros(2)), 0.5 * sigma @ sigma.T)
    with pytest.raises(ValueError):
        CoefficientSet(constant([0.0]), constant(0.0), constant(0.0))


@pytest.mark.parametrize('name', sorted(CATALOG))
@pytest.mark.parametrize('dims', [1, 2])
def test_catalog_builds(name, dims):
    problem = build_catalog_problem(name, dims, [1.0] * dims)
    assert problem.dims == dims
    assert problem.n_A >= 1 and problem.n_B >= 1


def test_catalog_rejects_unknown_names_and_parameters():
    with pytest.raises(ConfigurationError):
        build_catalog_problem('heat', 2, [1.0, 1.0])
    with pytest.raises(ConfigurationError):
        build_catalog_problem('poisson-ball', 2, [1.0, 1.0], {'forcing': 'lots'})
    with pytest.raises(ConfigurationError):
        build_catalog_problem('manufactured-isaacs', 2, [1.0, 1.0], {'profile': 'wavy'})


@pytest.mark.parametrize('semi_axes', [[1.0], [1.0, 1.0], [2.0, 1.0]])
def test_poisson_exact_solution(semi_axes):
    problem = build_catalog_problem('poisson-ball', len(semi_axes), semi_axes, {'forcing': 2.0})
    v = problem.exact_solution
    rng = np.random.default_rng(3)
    for x in rng.uniform(-0.5, 0.5, size=(5, len(semi_axes))):
        assert np.trace(v.hessian(x)) + 2.0 == pytest.approx(0.0, abs=1e-12)
    boundary = np.zeros(len(semi_axes))
    boundary[0] = semi_axes[0]
    assert v(boundary) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize('profile', ['cosine', 'polynomial'])
def test_manufactured_solution_zeroes_every_bracket(profile):
    problem = build_catalog_problem('manufactured-isaacs', 2, [1.0, 1.0], {'profile': profile})
    v = problem.exact_solution
    for x in ([0.1, -0.3], [0.5, 0.2], [0.0, 0.0]):
        x = np.array(x)
        value, _ = evaluate_symbol(problem, Symbol.of_field(v, x), x)
        assert value == pytest.approx(0.0, abs=1e-12)


def test_cosine_profile_vanishes_on_the_boundary():
    v = fields.ellipsoidal_cosine([2.0, 1.0], amplitude=0.25)
    assert v([2.0, 0.0]) == pytest.approx(0.0, abs=1e-15)
    assert v([0.0, 1.0]) == pytest.approx(0.0, abs=1e-15)
    assert v([0.0, 0.0]) == pytest.approx(0.25)


def test_field_derivatives_match_finite_differences():
    rng = np.random.default_rng(5)
    eps = 1e-5
    for v in (fields.ellipsoidal_cosine([1.5, 1.0]), fields.sine_product(), fields.quadratic(np.eye(2) + 0.3)):
        x = rng.uniform(-0.5, 0.5, size=2)
        for k in range(2):
            e = np.zeros(2)
            e[k] = eps
            assert (v(x + e) - v(x - e)) / (2 * eps) == pytest.approx(v.gradient(x)[k], abs=1e-7)
            np.testing.assert_allclose((v.gradient(x + e) - v.gradient(x - e)) / (2 * eps), v.hessian(x)[k],
                                       atol=1e-6)


def test_pucci_family_in_one_dimension(lam1):
    pucci = make_pucci(0.5, lam1)
    assert [float(M[0, 0]) for M in pucci.matrices] == [0.5, 2.0]
    assert len(pucci) == 4
    assert pucci([0.0], [[1.0]]) == pytest.approx(2.0)
    assert pucci([0.0], [[-1.0]]) == pytest.approx(-0.5)
    assert pucci([1.0], [[0.0]]) == pytest.approx(2.0)
    assert pucci.lower([0.0], [[-1.0]]) == pytest.approx(-2.0)


def test_pucci_family_is_convex_homogeneous_and_elliptic(lam2):
    pucci = make_pucci(0.5, lam2)
    rng = np.random.default_rng(11)
    for _ in range(50):
        u, w = Symbol.random(rng, 2), Symbol.random(rng, 2)
        t = rng.uniform(0.1, 3.0)
        assert pucci(t * u.grad, t * u.hess) == pytest.approx(t * pucci(u.grad, u.hess))
        assert pucci(u.grad + w.grad, u.hess + w.hess) <= pucci(u.grad, u.hess) + pucci(w.grad, w.hess) + 1e-12
        l = lam2.directions[int(rng.integers(len(lam2)))].vector
        bumped = pucci(u.grad, u.hess + t * np.outer(l, l))
        assert bumped >= pucci(u.grad, u.hess) + t * 0.5 * float(l @ l) - 1e-12
        assert pucci.lower(u.grad, u.hess) == pytest.approx(-pucci(-u.grad, -u.hess))


def test_pucci_rejects_bad_delta(lam2):
    with pytest.raises(ValueError):
        make_pucci(1.5, lam2)


@pytest.mark.parametrize('K', [0.0, 0.5, 3.0])
def test_fusion_is_exact_on_symbols(isaacs_problem, lam2, K):
    pucci = make_pucci(0.5, lam2)
    upper = fuse(isaacs_problem, pucci, K, MAX_FUSE)
    lower = fuse(isaacs_problem, pucci, K, MIN_FUSE)
    rng = np.random.default_rng(int(10 * K))
    x = np.array([0.2, -0.1])
    for _ in range(1000):
        u = Symbol.random(rng, 2)
        H, _ = evaluate_symbol(isaacs_problem, u, x)
        assert evaluate_symbol(upper, u, x)[0] == pytest.approx(max(H, pucci(u.grad, u.hess) - K))
        assert evaluate_symbol(lower, u, x)[0] == pytest.approx(min(H, pucci.lower(u.grad, u.hess) + K))


def test_fusion_is_monotone_in_the_level(isaacs_problem, lam2):
    pucci = make_pucci(0.5, lam2)
    levels = [0.0, 0.25, 1.0, 4.0]
    uppers = [fuse(isaacs_problem, pucci, K, MAX_FUSE) for K in levels]
    lowers = [fuse(isaacs_problem, pucci, K, MIN_FUSE) for K in levels]
    rng = np.random.default_rng(31)
    x = np.array([-0.3, 0.15])
    for _ in range(200):
        u = Symbol.random(rng, 2)
        up = [evaluate_symbol(p, u, x)[0] for p in uppers]
        low = [evaluate_symbol(p, u, x)[0] for p in lowers]
        H, _ = evaluate_symbol(isaacs_problem, u, x)
        assert all(a >= b - 1e-12 for a, b in zip(up, up[1:]))
        assert all(a <= b + 1e-12 for a, b in zip(low, low[1:]))
        assert low[-1] - 1e-12 <= H <= up[-1] + 1e-12


def test_fused_control_sets(isaacs_problem, lam2):
    pucci = make_pucci(0.5, lam2)
    upper = fuse(isaacs_problem, pucci, 1.0, MAX_FUSE)
    lower = fuse(isaacs_problem, pucci, 1.0, MIN_FUSE)
    assert upper.n_A == isaacs_problem.n_A + len(pucci)
    assert upper.n_B == isaacs_problem.n_B
    assert lower.n_B == isaacs_problem.n_B + len(pucci)
    assert upper.controls_A[0] == ('H', 0)
    assert upper.controls_A[-1] == ('P', len(pucci) - 1)
    assert upper.delta == 0.5
    np.testing.assert_array_equal(upper.truncation_active(np.array([0, 1, 2, 5]), np.zeros(4, dtype=int)),
                                  [False, False, True, True])
    np.testing.assert_array_equal(lower.truncation_active(np.zeros(3, dtype=int), np.array([1, 2, 3])),
                                  [False, True, True])


def test_fusion_rejects_negative_levels(isaacs_problem, lam2):
    with pytest.raises(ValueError):
        fuse(isaacs_problem, make_pucci(0.5, lam2), -1.0, MAX_FUSE)
    with pytest.raises(ValueError):
        fuse(isaacs_problem, make_pucci(0.5, lam2), 1.0, 'average')


def test_pucci_members_share_coefficient_sets_across_the_opponent(isaacs_problem):
    upper = fuse(isaacs_problem, make_pucci(0.5, generate_lambda(2, 1)), 2.0, MAX_FUSE)
    i = isaacs_problem.n_A
    assert upper.coefficient_set(i, 0) is upper.coefficient_set(i, 1)
    assert upper.evaluate(i, 0, np.zeros(2)).f == -2.0
