"""Exponential polynomials in d real variables.

An exponential polynomial is a finite sum of monomials

    c * x_1^a_1 * ... * x_d^a_d * exp(<lam, x>)

with complex ``c`` and ``lam``. Values are immutable; every operation is a
pure function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError

MAX_ALPHA = 32
MAX_TERMS = 1024


@dataclass(frozen=True)
class Term:
    coeff: complex
    alpha: tuple[int, ...]
    lam: tuple[complex, ...]

    def key(self):
        return (
            tuple(z.real for z in self.lam),
            tuple(z.imag for z in self.lam),
            self.alpha,
        )


@dataclass(frozen=True)
class ExpPolynomial:
    """Finite sum of exponential monomials on R^d.

    Parameters
    ----------
    dim : int
        Number of variables ``d``.
    terms : sequence of Term or (coeff, alpha, lam) triples
        Monomials. Duplicates and zero coefficients are allowed here;
        :func:`canonicalize` removes them.
    """

    dim: int
    terms: tuple[Term, ...] = ()

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("dim must be a positive integer")
        object.__setattr__(self, "dim", int(self.dim))
        if len(self.terms) > MAX_TERMS:
            raise ValueError(f"at most {MAX_TERMS} terms are supported")
        terms = tuple(_coerce_term(t, self.dim) for t in self.terms)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def monomial(cls, coeff, alpha, lam) -> "ExpPolynomial":
        alpha = tuple(np.atleast_1d(alpha).tolist())
        return cls(len(alpha), (Term(coeff, alpha, tuple(np.atleast_1d(lam).tolist())),))

    def __call__(self, x):
        return evaluate(self, x)

    def __add__(self, other: "ExpPolynomial") -> "ExpPolynomial":
        if other.dim != self.dim:
            raise DimensionMismatchError("cannot add exponential polynomials of different dim")
        return ExpPolynomial(self.dim, self.terms + other.terms)

    def scale(self, c: complex) -> "ExpPolynomial":
        return ExpPolynomial(
            self.dim, tuple(Term(c * t.coeff, t.alpha, t.lam) for t in self.terms)
        )

    def is_zero(self) -> bool:
        return not canonicalize(self).terms

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "terms": [
                {
                    "coeff": [t.coeff.real, t.coeff.imag],
                    "alpha": list(t.alpha),
                    "lambda": [[z.real, z.imag] for z in t.lam],
                }
                for t in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExpPolynomial":
        dim = int(data["dim"])
        terms = []
        for t in data["terms"]:
            re, im = t["coeff"]
            terms.append(
                Term(
                    complex(float(re), float(im)),
                    tuple(int(a) for a in t["alpha"]),
                    tuple(complex(float(r), float(i)) for r, i in t["lambda"]),
                )
            )
        return cls(dim, tuple(terms))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def loads(cls, text: str) -> "ExpPolynomial":
        return cls.from_dict(json.loads(text))


def _coerce_term(t, dim: int) -> Term:
    if not isinstance(t, Term):
        coeff, alpha, lam = t
        t = Term(coeff, tuple(alpha), tuple(lam))
    alpha = tuple(int(a) for a in t.alpha)
    lam = tuple(complex(z) for z in t.lam)
    if len(alpha) != dim or len(lam) != dim:
        raise DimensionMismatchError(
            f"term has alpha/lambda of length {len(alpha)}/{len(lam)}, expected {dim}"
        )
    if any(a < 0 or a > MAX_ALPHA for a in alpha):
        raise ValueError(f"alpha components must lie in [0, {MAX_ALPHA}]")
    return Term(complex(t.coeff), alpha, lam)


def as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    """Coerce ``x`` to an ``(N, dim)`` float array; report whether it was a single point."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        if dim != 1:
            raise DimensionMismatchError(f"scalar point given for dim {dim}")
        return arr.reshape(1, 1), True
    if arr.ndim == 1:
        if dim == 1 and arr.shape[0] != 1:
            return arr.reshape(-1, 1), False
        if arr.shape[0] != dim:
            raise DimensionMismatchError(f"point of length {arr.shape[0]} for dim {dim}")
        return arr.reshape(1, dim), True
    if arr.ndim == 2 and arr.shape[1] == dim:
        return arr, False
    raise DimensionMismatchError(f"points of shape {arr.shape} for dim {dim}")


def evaluate(p: ExpPolynomial, x):
    """Evaluate ``p`` at a point or an ``(N, d)`` array of points.

    ``0**0`` is taken as 1. A single point returns a complex scalar, an
    array of points returns a complex array of length N.
    """
    pts, single = as_points(x, p.dim)
    out = np.zeros(pts.shape[0], dtype=complex)
    for t in p.terms:
        lam = np.asarray(t.lam, dtype=complex)
        mono = np.prod(pts ** np.asarray(t.alpha), axis=1)
        out += t.coeff * mono * np.exp(pts @ lam)
    return complex(out[0]) if single else out


def canonicalize(p: ExpPolynomial) -> ExpPolynomial:
    """Merge equal (alpha, lambda) pairs, drop zero terms, sort deterministically.

    Lambda equality is exact; no tolerance-based merging happens here.
    """
    merged: dict[tuple, complex] = {}
    for t in p.terms:
        k = (t.alpha, t.lam)
        merged[k] = merged.get(k, 0j) + t.coeff
    terms = [Term(c, a, lam) for (a, lam), c in merged.items() if c != 0]
    terms.sort(key=Term.key)
    return ExpPolynomial(p.dim, tuple(terms))


# --- translate-span dimension -------------------------------------------------
#
# The translation-invariant span of p splits into independent pieces, one per
# distinct lambda. For P(x) e^{<lam,x>} the piece has the same dimension as the
# span of all partial derivatives of the polynomial P, computed exactly over
# the Gaussian rationals.

def _q(z: complex) -> tuple[Fraction, Fraction]:
    return Fraction(z.real), Fraction(z.imag)


def _mul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _inv(a):
    n = a[0] * a[0] + a[1] * a[1]
    return a[0] / n, -a[1] / n


def _derivative(poly: dict, k: int) -> dict:
    out = {}
    for alpha, c in poly.items():
        if alpha[k] == 0:
            continue
        beta = alpha[:k] + (alpha[k] - 1,) + alpha[k + 1:]
        out[beta] = (c[0] * alpha[k], c[1] * alpha[k])
    return out


def _reduce(v: dict, rows: dict) -> dict:
    v = dict(v)
    while True:
        hits = [m for m in v if m in rows]
        if not hits:
            return v
        m = max(hits)
        c = v[m]
        for mono, rc in rows[m].items():
            prod = _mul(c, rc)
            cur = v.get(mono, (Fraction(0), Fraction(0)))
            new = (cur[0] - prod[0], cur[1] - prod[1])
            if new[0] == 0 and new[1] == 0:
                v.pop(mono, None)
            else:
                v[mono] = new


def derivative_span_dim(poly: dict, dim: int) -> int:
    """Exact dimension of the span of all partial derivatives of a polynomial.

    ``poly`` maps exponent tuples to exact ``(re, im)`` Fraction pairs.
    """
    poly = {a: c for a, c in poly.items() if c[0] != 0 or c[1] != 0}
    if not poly:
        return 0
    rows: dict = {}
    queue = [poly]
    while queue:
        v = _reduce(queue.pop(), rows)
        if not v:
            continue
        pivot = max(v)
        scale = _inv(v[pivot])
        v = {m: _mul(c, scale) for m, c in v.items()}
        rows[pivot] = v
        queue.extend(_derivative(v, k) for k in range(dim))
    return len(rows)


def translate_span_dim(p: ExpPolynomial) -> int:
    """Dimension of the span of all translates of ``p``."""
    groups: dict[tuple, dict] = {}
    for t in canonicalize(p).terms:
        g = groups.setdefault(t.lam, {})
        c = _q(t.coeff)
        prev = g.get(t.alpha, (Fraction(0), Fraction(0)))
        g[t.alpha] = (prev[0] + c[0], prev[1] + c[1])
    return sum(derivative_span_dim(g, p.dim) for g in groups.values())


def random_exp_polynomial(
    rng: np.random.Generator,
    dim: int,
    span_dim: int,
    *,
    lam_radius: float = 1.0,
    allow_powers: bool = True,
    min_separation: float = 0.0,
) -> ExpPolynomial:
    """Draw an exponential polynomial with translate-span dimension ``span_dim``.

    Exponents are drawn from the ball of radius ``lam_radius`` in C^d and
    coefficients from the unit disc. In one variable, ``allow_powers`` groups
    part of the budget into ``x^r e^{lam x}`` blocks; in several variables all
    terms are pure exponentials.
    """
    if span_dim < 1:
        raise ValueError("span_dim must be positive")
    if dim == 1 and allow_powers:
        sizes = []
        left = span_dim
        while left:
            s = int(rng.integers(1, left + 1))
            sizes.append(s)
            left -= s
    else:
        sizes = [1] * span_dim
    lams: list[np.ndarray] = []
    while len(lams) < len(sizes):
        cand = _random_ball(rng, dim) * lam_radius
        if all(np.linalg.norm(cand - q) > max(min_separation, 1e-9) for q in lams):
            lams.append(cand)
    terms = []
    for size, lam in zip(sizes, lams):
        for r in range(size):
            c = _random_ball(rng, 1)[0]
            if r == size - 1:
                # leading power must be present for the block to have full size
                c = c if abs(c) > 0.1 else 0.1 + 0j
            terms.append(Term(c, (r,) if dim == 1 else (0,) * dim, tuple(lam.tolist())))
    return canonicalize(ExpPolynomial(dim, tuple(terms)))


def _random_ball(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniform sample from the unit ball of C^dim (viewed as R^{2 dim})."""
    v = rng.standard_normal(2 * dim)
    v /= np.linalg.norm(v)
    v *= rng.uniform() ** (1.0 / (2 * dim))
    return v[:dim] + 1j * v[dim:]


def from_terms(dim: int, terms: Iterable[Sequence]) -> ExpPolynomial:
    """Convenience constructor from ``(coeff, alpha, lam)`` triples."""
    return ExpPolynomial(dim, tuple(terms))
