"""Finite generator sets of dense additive subgroups of R^d.

The construction uses Kronecker's criterion: Z^d/N + theta Z is dense in R^d
when {1, theta_1, ..., theta_d} is linearly independent over Q. We take
theta = (sqrt(p_1), ..., sqrt(p_d)) for the first d primes.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError

MAX_WITNESS_DIM = 25
# enumeration cap for the non-basis coefficients in approximate_by_combination
MAX_CANDIDATES = 5_000_000


def first_primes(count: int) -> list[int]:
    primes: list[int] = []
    k = 2
    while len(primes) < count:
        if all(k % p for p in primes if p * p <= k):
            primes.append(k)
        k += 1
    return primes


def is_q_independent_witness(d: int) -> np.ndarray:
    """Return (sqrt(p_1), ..., sqrt(p_d)); {1, theta} is Q-independent."""
    if not 1 <= d <= MAX_WITNESS_DIM:
        raise ValueError(f"d must lie in [1, {MAX_WITNESS_DIM}]")
    return np.sqrt(np.asarray(first_primes(d), dtype=float))


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    dim: int
    generators: np.ndarray
    ranks: tuple[int, ...] | None = None

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if G.shape[1] != self.dim:
            raise DimensionMismatchError(f"generators have dim {G.shape[1]}, expected {self.dim}")
        if G.shape[0] < self.dim + 1:
            raise ValueError("a dense subgroup of R^d needs at least d+1 generators")
        object.__setattr__(self, "generators", G)
        if self.ranks is not None:
            ranks = tuple(int(r) for r in self.ranks)
            if len(ranks) != G.shape[0] or any(r < 1 for r in ranks):
                raise ValueError("ranks must be positive, one per generator")
            object.__setattr__(self, "ranks", ranks)

    @property
    def size(self) -> int:
        return self.generators.shape[0]

    def with_ranks(self, ranks) -> "GeneratorSet":
        return GeneratorSet(self.dim, self.generators, tuple(ranks))

    def combine(self, m) -> np.ndarray:
        return np.asarray(m, dtype=float) @ self.generators

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "generators": self.generators.tolist(),
            "ranks": list(self.ranks) if self.ranks is not None else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorSet":
        return cls(int(data["dim"]), np.asarray(data["generators"], float), data.get("ranks"))

    def dumps(self) -> str:
        return json.dumps(self.to_dict())


def _smallest_divisor(length: float, eps: float) -> int:
    """Smallest positive integer N with length / N < eps."""
    N = max(1, math.floor(length / eps) + 1)
    while length / N >= eps:
        N += 1
    while N > 1 and length / (N - 1) < eps:
        N -= 1
    return N


def dense_generators(d: int, center=None, radius: float = 1.0) -> GeneratorSet:
    """Generators of a dense subgroup of R^d lying in a small ball.

    Returns e_k / N (k = 1..d) and theta / M, all of norm below ``radius``.
    For a nonzero ``center`` x0 the shifted family {x0, x0 + h_1, ...} is
    returned instead, which lies in B(x0, radius) and still generates a
    dense subgroup.
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    theta = is_q_independent_witness(d)
    N = _smallest_divisor(1.0, radius)
    M = _smallest_divisor(float(np.linalg.norm(theta)), radius)
    gens = np.vstack([np.eye(d) / N, theta / M])
    x0 = np.zeros(d) if center is None else np.asarray(center, dtype=float).reshape(d)
    if np.any(x0 != 0):
        gens = np.vstack([x0, x0 + gens])
    return GeneratorSet(d, gens)


@dataclass(frozen=True, eq=False)
class Approximation:
    """Outcome of :func:`approximate_by_combination`.

    ``m`` holds the best combination found; ``success`` tells whether its
    distance is below the requested tolerance.
    """

    m: np.ndarray | None
    distance: float
    success: bool


def _candidate_order(extra: int, bound: int) -> np.ndarray:
    if extra == 1:
        r = np.arange(-bound, bound + 1)
        return r[np.lexsort((r, np.abs(r)))][:, None]
    count = (2 * bound + 1) ** extra
    if count > MAX_CANDIDATES:
        raise ValueError(
            f"{count} candidate combinations exceed the enumeration cap {MAX_CANDIDATES}"
        )
    cand = np.array(list(itertools.product(range(-bound, bound + 1), repeat=extra)))
    keys = [cand[:, j] for j in reversed(range(extra))] + [np.abs(cand).max(axis=1)]
    return cand[np.lexsort(keys)]


def approximate_by_combination(
    gens: GeneratorSet, target, tol: float, coeff_bound: int
) -> Approximation:
    """Find integers m with ||sum_i m_i h_i - target|| < tol and max |m_i| <= B.

    The first d generators are treated as a lattice basis; the remaining
    coefficients are enumerated in order of increasing magnitude (ties
    broken lexicographically) and the basis coefficients are obtained by
    rounding the exact real solution. A failed search is not evidence
    against density.
    """
    target = np.asarray(target, dtype=float).reshape(-1)
    if target.shape[0] != gens.dim:
        raise DimensionMismatchError("target and generators differ in dimension")
    d = gens.dim
    basis, extra = gens.generators[:d], gens.generators[d:]
    inv = np.linalg.inv(basis)
    cand = _candidate_order(extra.shape[0], int(coeff_bound))

    resid = target[None, :] - cand @ extra
    coeff = np.rint(resid @ inv)
    ok = np.all(np.abs(coeff) <= coeff_bound, axis=1)
    approx = coeff @ basis + cand @ extra
    dist = np.linalg.norm(approx - target[None, :], axis=1)
    dist[~ok] = np.inf

    hit = np.flatnonzero(dist < tol)
    idx = int(hit[0]) if hit.size else int(np.argmin(dist))
    if not np.isfinite(dist[idx]):
        return Approximation(None, math.inf, False)
    m = np.concatenate([coeff[idx], cand[idx]]).astype(np.int64)
    return Approximation(m, float(dist[idx]), bool(hit.size))


def combination_distance(gens: GeneratorSet, m, target) -> float:
    """Recompute ||sum_i m_i h_i - target|| from integer coefficients."""
    return float(np.linalg.norm(gens.combine(m) - np.asarray(target, dtype=float)))
