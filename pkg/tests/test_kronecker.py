import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from popoviciu.errors import DimensionMismatchError
from popoviciu.kronecker import (
    GeneratorSet,
    approximate_by_combination,
    combination_distance,
    dense_generators,
    first_primes,
    is_q_independent_witness,
)

SQRT2 = math.sqrt(2)


def test_first_primes():
    assert first_primes(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@pytest.mark.parametrize("d, expected", [(1, [2]), (2, [2, 3]), (3, [2, 3, 5])])
def test_witness(d, expected):
    assert np.allclose(is_q_independent_witness(d), np.sqrt(expected))


@pytest.mark.parametrize("d", [0, 26])
def test_witness_range(d):
    with pytest.raises(ValueError):
        is_q_independent_witness(d)


def test_dense_generators_d1_half():
    g = dense_generators(1, None, 0.5)
    assert np.allclose(g.generators.ravel(), [1 / 3, SQRT2 / 3])
    # N = 2 and M = 2 are not enough
    assert 1 / 2 >= 0.5 and SQRT2 / 2 >= 0.5


def test_dense_generators_d1_two():
    assert np.allclose(dense_generators(1, None, 2.0).generators.ravel(), [1, SQRT2])


def test_dense_generators_d2():
    g = dense_generators(2, None, 0.3)
    # smallest M with sqrt(5)/M < 0.3 is 8, not 6
    assert math.sqrt(5) / 7 >= 0.3 > math.sqrt(5) / 8
    assert np.allclose(g.generators, [[0.25, 0], [0, 0.25], [SQRT2 / 8, math.sqrt(3) / 8]])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.floats(1e-3, 10.0))
def test_dense_generators_norms(d, eps):
    g = dense_generators(d, None, eps)
    norms = np.linalg.norm(g.generators, axis=1)
    assert g.size == d + 1
    assert np.all(norms < eps)
    # minimality of N and M
    N = round(1 / norms[0])
    M = round(np.linalg.norm(is_q_independent_witness(d)) / norms[-1])
    assert N == 1 or 1 / (N - 1) >= eps
    assert M == 1 or np.linalg.norm(is_q_independent_witness(d)) / (M - 1) >= eps


def test_shifted_variant():
    x0 = np.array([1.0, -2.0])
    g = dense_generators(2, x0, 0.3)
    assert g.size == 4
    assert np.all(np.linalg.norm(g.generators - x0, axis=1) < 0.3)
    assert np.array_equal(g.generators[0], x0)


def test_generator_set_validation():
    with pytest.raises(ValueError):
        GeneratorSet(2, [[1, 0], [0, 1]])
    with pytest.raises(DimensionMismatchError):
        GeneratorSet(1, [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        GeneratorSet(1, [[1], [2]], ranks=(1,))


def test_generator_set_json():
    g = dense_generators(2, None, 0.3).with_ranks([2, 2, 2])
    d = g.to_dict()
    assert set(d) == {"dim", "generators", "ranks"}
    back = GeneratorSet.from_dict(d)
    assert np.array_equal(back.generators, g.generators) and back.ranks == (2, 2, 2)
    assert dense_generators(1).to_dict()["ranks"] is None


def test_approximate_exact_combination():
    g = GeneratorSet(1, [[1.0], [SQRT2]])
    res = approximate_by_combination(g, [SQRT2 - 1], 1e-6, 10)
    assert res.success and res.m.tolist() == [-1, 1]


def test_approximate_zero():
    g = dense_generators(2, None, 0.3)
    res = approximate_by_combination(g, [0, 0], 1e-9, 5)
    assert res.success and res.m.tolist() == [0, 0, 0]


def _brute_force_pi(bound, tol):
    # scan m1 by |m1| then value, m0 = nearest integer
    for m1 in sorted(range(-bound, bound + 1), key=lambda v: (abs(v), v)):
        m0 = round(math.pi - m1 * SQRT2)
        if abs(m0) <= bound and abs(m0 + m1 * SQRT2 - math.pi) < tol:
            return m0, m1
    return None


def test_approximate_pi_matches_brute_force():
    g = GeneratorSet(1, [[1.0], [SQRT2]])
    res = approximate_by_combination(g, [math.pi], 1e-3, 200)
    expected = _brute_force_pi(200, 1e-3)
    assert expected == (-11, 10)
    assert res.success and tuple(res.m) == expected
    assert abs(res.m[0] + res.m[1] * SQRT2 - math.pi) < 1e-3
    assert res.distance == pytest.approx(5.43e-4, rel=1e-2)


def test_approximate_budget_failure():
    g = GeneratorSet(1, [[1.0], [SQRT2]])
    res = approximate_by_combination(g, [math.pi], 1e-9, 3)
    assert not res.success
    assert res.distance == pytest.approx(combination_distance(g, res.m, [math.pi]))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        approximate_by_combination(dense_generators(2), [1.0], 1e-3, 5)


@pytest.mark.parametrize("d", [1, 2])
def test_density_smoke(d):
    rng = np.random.default_rng(d)
    g = dense_generators(d, None, 0.3)
    for target in rng.uniform(0, 1, (100, d)):
        res = approximate_by_combination(g, target, 1e-2, 10_000)
        assert res.success
        assert np.max(np.abs(res.m)) <= 10_000
        assert combination_distance(g, res.m, target) < 1e-2


def test_deterministic_tie_break():
    # the zero irrational coefficient is tried first
    g = GeneratorSet(1, [[0.5], [SQRT2]])
    res = approximate_by_combination(g, [1.0], 1e-9, 10)
    assert res.m.tolist() == [2, 0]
