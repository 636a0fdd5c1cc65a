import numpy as np
import pytest

from conftest import random_s_delta
from isaacsfd.base import InsufficientStencil, SingularInput
from isaacsfd.stencil import (Direction, DecompositionCache, decompose, decompose_diffusion, generate_lambda,
                              split_drift)


@pytest.mark.parametrize('d, m, size, radius', [
    (1, 1, 2, 1.0),
    (2, 1, 8, np.sqrt(2.0)),
    (2, 2, 16, np.sqrt(5.0)),
    (3, 1, 26, np.sqrt(3.0)),
])
def test_generate_lambda_sizes(d, m, size, radius):
    lam = generate_lambda(d, m)
    assert len(lam) == size
    assert len(lam.half_set) == size // 2
    assert lam.radius == pytest.approx(radius)
    for l in lam.directions:
        assert -l in lam
        assert max(abs(c) for c in l) <= m


def test_half_set_order(lam2):
    assert lam2.half_set[0] == Direction((1, 0))
    assert lam2.half_set[1] == Direction((0, 1))
    assert lam2.half_set[2] == Direction((1, 1))
    assert lam2.half_set[3] == Direction((1, -1))
    assert lam2.directions[1] == Direction((-1, 0))
    assert lam2.basis_indices == (0, 1)


@pytest.mark.parametrize('components', [(0, 0), (2, 2), (0, -4)])
def test_direction_rejects_non_primitive(components):
    with pytest.raises(ValueError):
        Direction(components)


def test_generate_lambda_rejects_bad_arguments():
    with pytest.raises(ValueError):
        generate_lambda(0, 1)
    with pytest.raises(ValueError):
        generate_lambda(2, 0)


def test_identity_uses_coordinate_directions(lam2):
    dec = decompose_diffusion(np.eye(2), lam2)
    np.testing.assert_allclose(dec.second_order, [1.0, 1.0, 0.0, 0.0], atol=1e-12)
    assert dec.basis_floor == pytest.approx(1.0)


def test_scalar_diffusion_in_one_dimension(lam1):
    dec = decompose_diffusion(2.0, lam1)
    np.testing.assert_allclose(dec.second_order, [2.0])


def test_off_diagonal_goes_to_diagonal_directions(lam2):
    a = np.array([[1.2, 0.3], [0.3, 0.8]])
    dec = decompose_diffusion(a, lam2)
    np.testing.assert_allclose(dec.diffusion(), a, atol=1e-9)
    assert np.all(dec.second_order >= 0)
    # the diagonal weights only carry the off-diagonal entry
    assert dec.second_order[2] - dec.second_order[3] == pytest.approx(0.3)
    assert dec.basis_floor == pytest.approx(0.5)


def test_random_matrices_reassemble():
    rng = np.random.default_rng(7)
    lambdas = {(d, m): generate_lambda(d, m) for d in (2, 3) for m in (1, 2, 3)}
    successes = 0
    for _ in range(200):
        d = int(rng.choice([2, 3]))
        m = int(rng.integers(1, 4))
        a = random_s_delta(rng, d, 0.2)
        try:
            dec = decompose_diffusion(a, lambdas[(d, m)])
        except InsufficientStencil:
            continue
        successes += 1
        assert np.all(dec.second_order >= 0)
        assert np.max(np.abs(dec.diffusion() - a)) <= 1e-9
    assert successes > 0


def test_longer_directions_never_lower_the_floor():
    rng = np.random.default_rng(19)
    lambdas = [generate_lambda(2, m) for m in (1, 2, 3)]
    compared = 0
    for _ in range(200):
        a = random_s_delta(rng, 2, 0.2)
        floors = []
        for lam in lambdas:
            try:
                floors.append(decompose_diffusion(a, lam).basis_floor)
            except InsufficientStencil:
                floors.append(None)
        for coarse, fine in zip(floors, floors[1:]):
            if coarse is None:
                continue
            # a split over fewer directions is still a split over more
            assert fine is not None
            assert fine >= coarse - 1e-9
            compared += 1
    assert compared > 0


def test_decomposition_is_deterministic():
    rng = np.random.default_rng(23)
    lam = generate_lambda(3, 2)
    for _ in range(20):
        a = random_s_delta(rng, 3, 0.3)
        try:
            first = decompose_diffusion(a, lam)
        except InsufficientStencil:
            continue
        assert decompose_diffusion(a, lam) == first


def test_known_infeasible_matrix_needs_longer_directions():
    a = np.array([[0.5, 1.0], [1.0, 10.0]])
    with pytest.raises(InsufficientStencil):
        decompose_diffusion(a, generate_lambda(2, 1))
    dec = decompose_diffusion(a, generate_lambda(2, 3))
    assert np.max(np.abs(dec.diffusion() - a)) <= 1e-9


def test_basis_floor_requirement(lam2):
    with pytest.raises(InsufficientStencil):
        decompose_diffusion(np.eye(2), lam2, delta1_min=1.5)
    assert decompose_diffusion(np.eye(2), lam2, delta1_min=0.9).basis_floor == pytest.approx(1.0)


@pytest.mark.parametrize('a', [
    [[1.0, 0.2], [0.0, 1.0]],
    [[1.0, np.nan], [np.nan, 1.0]],
    [[1.0, 0.0, 0.0]],
])
def test_bad_matrices_are_singular_input(lam2, a):
    with pytest.raises(SingularInput):
        decompose_diffusion(a, lam2)


def test_singular_input_is_a_value_error(lam2):
    with pytest.raises(ValueError):
        decompose_diffusion([[1.0, 1.0], [0.0, 1.0]], lam2)


def test_drift_sign_split(lam2):
    dec = split_drift([1.0, -2.0], lam2)
    # directions: e1, -e1, e2, -e2, ...
    np.testing.assert_allclose(dec.first_order[:4], [1.0, 0.0, 0.0, 2.0])
    assert np.all(dec.first_order[4:] == 0)
    np.testing.assert_allclose(dec.drift(), [1.0, -2.0])


def test_drift_shape_checked(lam2):
    with pytest.raises(SingularInput):
        split_drift([1.0, 2.0, 3.0], lam2)


def test_full_decomposition(lam2):
    dec = decompose(np.eye(2), [0.5, 0.5], lam2)
    np.testing.assert_allclose(dec.diffusion(), np.eye(2), atol=1e-12)
    np.testing.assert_allclose(dec.drift(), [0.5, 0.5])


def test_cache_reuses_decompositions(lam2):
    cache = DecompositionCache(lam2)
    first = cache.get(np.eye(2), [0.0, 0.0])
    second = cache.get(np.eye(2) * (1 + 1e-15), [1.0, 0.0])
    assert cache.misses == 1
    assert cache.hits == 1
    np.testing.assert_array_equal(first.second_order, second.second_order)
    assert cache.min_basis_floor == pytest.approx(1.0)
