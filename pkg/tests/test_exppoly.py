import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from popoviciu.errors import DimensionMismatchError
from popoviciu.exppoly import (
    ExpPolynomial,
    Term,
    canonicalize,
    evaluate,
    random_exp_polynomial,
    translate_span_dim,
)


def translate_rank_oracle(p, rng, extra=3, tol=1e-9):
    """Numerical rank of [p(x_i + s_k)] over random points and random shifts."""
    D = translate_span_dim(p)
    xs = rng.uniform(-1, 1, size=(60, p.dim))
    shifts = rng.uniform(-1, 1, size=(D + extra, p.dim))
    A = np.stack([evaluate(p, xs + s) for s in shifts], axis=1)
    A /= np.linalg.norm(A, axis=0)
    sv = np.linalg.svd(A, compute_uv=False)
    return int(np.sum(sv > tol * sv[0]))


# --- evaluate -------------------------------------------------------------

def test_evaluate_constant():
    assert evaluate(ExpPolynomial.monomial(1, [0], [0]), 7.3) == 1


def test_evaluate_identity_monomial():
    assert evaluate(ExpPolynomial.monomial(1, [1], [0]), 3.0) == 3


def test_evaluate_exponents_cancel():
    p = ExpPolynomial.monomial(2, [0, 0], [1, -1])
    assert evaluate(p, [1.0, 1.0]) == pytest.approx(2)


def test_zero_power_zero_is_one():
    assert evaluate(ExpPolynomial.monomial(1, [0], [0]), 0.0) == 1
    assert evaluate(ExpPolynomial.monomial(1, [2], [0]), 0.0) == 0


def test_evaluate_vectorized_matches_pointwise(rng):
    p = random_exp_polynomial(rng, 2, 3)
    pts = rng.uniform(-1, 1, (5, 2))
    assert np.allclose(evaluate(p, pts), [evaluate(p, x) for x in pts])


def test_dimension_mismatch():
    p = ExpPolynomial.monomial(1, [0, 0], [0, 0])
    with pytest.raises(DimensionMismatchError):
        evaluate(p, [1.0, 2.0, 3.0])
    with pytest.raises(DimensionMismatchError):
        ExpPolynomial(2, ((1.0, (0,), (0, 0)),))


def test_limits_guarded():
    with pytest.raises(ValueError):
        ExpPolynomial.monomial(1, [33], [0])
    with pytest.raises(ValueError):
        ExpPolynomial(1, tuple((1.0, (0,), (float(k),)) for k in range(1025)))


# --- canonicalize ---------------------------------------------------------

def test_canonicalize_merges():
    p = ExpPolynomial(1, ((1, (1,), (0,)), (2, (1,), (0,))))
    assert canonicalize(p).terms == (Term(3, (1,), (0,)),)


def test_canonicalize_cancels():
    p = ExpPolynomial(1, ((1, (1,), (0,)), (-1, (1,), (0,))))
    assert canonicalize(p).terms == ()


def test_canonicalize_keeps_canonical():
    p = ExpPolynomial(1, ((5, (0,), (0,)),))
    assert canonicalize(p).terms == p.terms


def test_canonical_order_is_deterministic():
    a = ExpPolynomial(1, ((1, (0,), (2,)), (1, (0,), (1j,)), (1, (1,), (1j,))))
    b = ExpPolynomial(1, tuple(reversed(a.terms)))
    assert canonicalize(a).terms == canonicalize(b).terms
    assert [t.lam[0] for t in canonicalize(a).terms] == [1j, 1j, 2]


def test_exact_lambda_equality_no_fuzzy_merge():
    p = ExpPolynomial(1, ((1, (0,), (1.0,)), (1, (0,), (1.0 + 1e-15,))))
    assert len(canonicalize(p).terms) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_canonicalize_preserves_values(seed):
    rng = np.random.default_rng(seed)
    base = random_exp_polynomial(rng, 2, 3)
    doubled = ExpPolynomial(2, base.terms + base.scale(-0.5).terms + base.terms)
    x = rng.uniform(-1, 1, (10, 2))
    lhs, rhs = evaluate(canonicalize(doubled), x), evaluate(doubled, x)
    assert np.allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.max(np.abs(rhs)))


# --- translate_span_dim ---------------------------------------------------

def test_span_exp():
    assert translate_span_dim(ExpPolynomial.monomial(1, [0], [1])) == 1


def test_span_identity(rng):
    p = ExpPolynomial.monomial(1, [1], [0])
    assert translate_span_dim(p) == 2 == translate_rank_oracle(p, rng)


def test_span_poly_times_exp(rng):
    p = ExpPolynomial.monomial(1, [2], [3])
    assert translate_span_dim(p) == 3 == translate_rank_oracle(p, rng)


@pytest.mark.parametrize("alpha", [(0, 0), (1, 0), (2, 1), (3, 2), (1, 1, 1)])
def test_span_single_monomial_product_formula(alpha):
    p = ExpPolynomial.monomial(0.7, list(alpha), [0.3] * len(alpha))
    assert translate_span_dim(p) == int(np.prod(np.asarray(alpha) + 1))


def test_span_mixed_polynomial(rng):
    # x^2 + y^2 : derivatives 2x, 2y, 2 -> dimension 4 (not 9)
    p = ExpPolynomial(2, ((1, (2, 0), (0, 0)), (1, (0, 2), (0, 0))))
    assert translate_span_dim(p) == 4 == translate_rank_oracle(p, rng)


def test_span_zero():
    assert translate_span_dim(ExpPolynomial(1, ())) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 2), st.integers(1, 5))
def test_span_matches_numerical_rank(seed, dim, n):
    rng = np.random.default_rng(seed)
    p = random_exp_polynomial(rng, dim, n)
    assert translate_span_dim(p) == n
    assert translate_rank_oracle(p, rng) == n


# --- serialization --------------------------------------------------------

def test_json_shape():
    p = ExpPolynomial(2, ((1 + 2j, (1, 0), (0.5, -1j)),))
    data = json.loads(p.dumps())
    assert data == {"dim": 2, "terms": [{"coeff": [1.0, 2.0], "alpha": [1, 0],
                                        "lambda": [[0.5, 0.0], [-0.0, -1.0]]}]}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_json_round_trip_exact(seed):
    p = random_exp_polynomial(np.random.default_rng(seed), 2, 4)
    text = p.dumps()
    q = ExpPolynomial.loads(text)
    assert q.terms == p.terms
    assert q.dumps() == text
