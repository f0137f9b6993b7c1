import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from popoviciu.errors import DimensionMismatchError, NonFiniteSamplesError
from popoviciu.exppoly import evaluate
from popoviciu.trig import (
    TrigPolynomial,
    detect_axis_degree,
    evaluate_trig,
    grid_points,
    random_trig_polynomial,
    reconstruct_adaptive,
    reconstruct_joint,
    verify_separate_slices,
)

TAU = 2 * math.pi


def cos_cos(x):
    return np.cos(TAU * x[:, 0]) * np.cos(TAU * x[:, 1]) + 0j


def test_pure_monomial():
    p = reconstruct_joint(lambda x: np.exp(1j * TAU * (x[:, 0] - x[:, 1])), (1, 1), 1)
    assert list(p.coeffs) == [(1, -1)]
    assert p.coefficient((1, -1)) == pytest.approx(1, abs=1e-12)


def test_cos_cos():
    p = reconstruct_joint(cos_cos, (1, 1), 1)
    assert sorted(p.coeffs) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]
    assert all(abs(c - 0.25) < 1e-12 for c in p.coeffs.values())
    # product-to-sum at random points
    pts = np.random.default_rng(0).uniform(-2, 2, (20, 2))
    assert np.allclose(evaluate_trig(p, pts), cos_cos(pts), atol=1e-12)
    assert evaluate_trig(p, [0.1, 0.2]) == pytest.approx(math.cos(0.2 * math.pi) * math.cos(0.4 * math.pi))


def test_constant():
    p = reconstruct_joint(lambda x: np.full(len(x), 5.0 + 0j), (2.0, 3.0), 2)
    assert p.coeffs == {(0, 0): 5}


def test_evaluate_examples():
    assert evaluate_trig(TrigPolynomial(2, (1, 1), 0, {(0, 0): 5}), [0.3, -7]) == 5
    assert evaluate_trig(TrigPolynomial(1, (1,), 1, {(1,): 1}), [0.25]) == pytest.approx(1j)


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        evaluate_trig(TrigPolynomial(2, (1, 1), 0, {(0, 0): 1}), [0.1, 0.2, 0.3])


def test_validation_and_trim():
    with pytest.raises(ValueError):
        TrigPolynomial(1, (1,), 1, {(2,): 1})
    with pytest.raises(ValueError):
        TrigPolynomial(1, (-1,), 1, {})
    assert TrigPolynomial(1, (1,), 1, {(1,): 1e-13}).coeffs == {}


def test_non_finite_grid():
    with pytest.raises(NonFiniteSamplesError):
        reconstruct_joint(lambda x: np.full(len(x), np.nan), (1,), 1)


def test_grid_matches_samples():
    rng = np.random.default_rng(1)
    p = random_trig_polynomial(rng, 2, 2)
    q = reconstruct_joint(p, p.periods, 2)
    pts = grid_points(p.periods, 2)
    assert np.max(np.abs(evaluate_trig(q, pts) - evaluate_trig(p, pts))) < 1e-10


def _coeff_error(p, q):
    keys = set(p.coeffs) | set(q.coeffs)
    return max(abs(p.coefficient(a) - q.coefficient(a)) for a in keys)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3), st.integers(0, 3))
def test_round_trip(seed, d, m):
    rng = np.random.default_rng(seed)
    p = random_trig_polynomial(rng, d, m)
    q = reconstruct_joint(lambda x: evaluate_trig(p, x), p.periods, m)
    assert _coeff_error(p, q) < 1e-9
    assert verify_separate_slices(q, p, 10, rng) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 2), st.integers(0, 2), st.integers(1, 3))
def test_degree_monotonicity(seed, d, m, extra):
    rng = np.random.default_rng(seed)
    p = random_trig_polynomial(rng, d, m)
    vals = lambda x: evaluate_trig(p, x)
    base = reconstruct_joint(vals, p.periods, m)
    big = reconstruct_joint(vals, p.periods, m + extra)
    for a, c in big.coeffs.items():
        if max(map(abs, a)) > m:
            assert abs(c) < 1e-10
        else:
            assert abs(c - base.coefficient(a)) < 1e-10


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_periodicity(seed, d):
    rng = np.random.default_rng(seed)
    p = random_trig_polynomial(rng, d, 2)
    x = rng.uniform(-3, 3, (5, d))
    ref = evaluate_trig(p, x)
    for k in range(d):
        shifted = x.copy()
        shifted[:, k] += p.periods[k]
        assert np.all(np.abs(evaluate_trig(p, shifted) - ref) <= 1e-10 * np.maximum(1, np.abs(ref)))


def test_to_exp_polynomial_agrees():
    rng = np.random.default_rng(2)
    p = random_trig_polynomial(rng, 2, 2)
    x = rng.uniform(-1, 1, (10, 2))
    assert np.allclose(evaluate(p.to_exp_polynomial(), x), evaluate_trig(p, x), atol=1e-10)


def test_adaptive():
    p = reconstruct_adaptive(cos_cos, (1, 1), 1)
    assert p.degree == 1 and len(p.coeffs) == 4
    f3 = lambda x: np.exp(3j * TAU * x[:, 0]) + 0j
    assert reconstruct_adaptive(f3, (1,), 1).degree == 4
    assert reconstruct_adaptive(f3, (1,), 1).coefficient((3,)) == pytest.approx(1)


# --- verify_separate_slices ---------------------------------------------------

def test_slices_adversarial_oracle():
    p = reconstruct_joint(cos_cos, (1, 1), 1)
    grid = {tuple(np.round(q, 12)) for q in grid_points((1, 1), 1)}

    def bad(x):
        off = np.array([tuple(np.round(q, 12)) not in grid for q in x])
        return cos_cos(x) + off

    q = reconstruct_joint(bad, (1, 1), 1)
    assert _coeff_error(p, q) < 1e-12
    assert verify_separate_slices(q, bad, 5) >= 1 - 1e-12


def test_slices_zero():
    zero = TrigPolynomial(2, (1, 1), 1, {})
    assert verify_separate_slices(zero, lambda x: np.zeros(len(x)), 5) == 0


def test_slices_exact():
    rng = np.random.default_rng(3)
    for _ in range(5):
        p = random_trig_polynomial(rng, 2, 3)
        q = reconstruct_joint(p, p.periods, 3)
        assert verify_separate_slices(q, p, 10, rng) < 1e-9


# --- detect_axis_degree -----------------------------------------------------

def test_detect_cos_cos():
    for axis in (0, 1):
        assert detect_axis_degree(cos_cos, axis, [0.17, 0.33], 1.0, 4) == 1


def test_detect_constant():
    assert detect_axis_degree(lambda x: np.full(len(x), 2.0), 0, [0.0], 1.0, 3) == 0


@pytest.mark.parametrize("m_max", [0, 1, 3, 6])
def test_detect_exact_top(m_max):
    f = lambda x: np.exp(1j * TAU * m_max * x[:, 0])
    assert detect_axis_degree(f, 0, [0.4], 1.0, m_max) == m_max


def test_detect_errors():
    with pytest.raises(ValueError):
        detect_axis_degree(cos_cos, 0, [0, 0], 1.0, -1)
    with pytest.raises(NonFiniteSamplesError):
        detect_axis_degree(lambda x: np.full(len(x), np.inf), 0, [0.0], 1.0, 2)


def test_json_round_trip():
    p = random_trig_polynomial(np.random.default_rng(4), 2, 1)
    d = p.to_dict()
    assert set(d) == {"dim", "periods", "degree", "coeffs"}
    q = TrigPolynomial.from_dict(d)
    assert q.coeffs == p.coeffs and q.periods == p.periods
