"""Recovery of exponential polynomials from uniform samples.

Pipeline: fit a monic order-n linear recurrence to the samples, take the
roots of its characteristic polynomial, cluster them into multiplicities and
fit the confluent Vandermonde system ``sum_j sum_r c_{j,r} k^r mu_j^k``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AmbiguousOrderError,
    InsufficientSamplesError,
    ResidualTooLargeError,
    ZeroRootError,
)
from .exppoly import ExpPolynomial, Term, canonicalize, evaluate
from .hankel import DEFAULT_RANK_TOL, SampleGrid1D, _hankel, numerical_rank

DEFAULT_CLUSTER_RADIUS = 1e-6
# radii tried when no explicit radius is given, finest first
ADAPTIVE_RADII = (1e-6, 1e-5, 1e-4, 1e-3)


@dataclass(frozen=True, eq=False)
class RadoCoefficients:
    """Monic recurrence ``sum_k a[k] f(x + k h) = 0`` with ``a[-1] == 1``."""

    a: np.ndarray
    residual: float = 0.0

    def __post_init__(self):
        a = np.asarray(self.a, dtype=complex).ravel()
        if a.size < 2 or a[-1] != 1:
            raise ValueError("coefficients must have length >= 2 and a_n == 1")
        object.__setattr__(self, "a", a)

    @property
    def order(self) -> int:
        return self.a.size - 1


@dataclass(frozen=True)
class RootCluster:
    roots: tuple[tuple[complex, int], ...]

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)


@dataclass(frozen=True, eq=False)
class Recovery:
    poly: ExpPolynomial
    rado: RadoCoefficients
    roots: RootCluster
    residual: float


def rado_coefficients(g: SampleGrid1D, n: int, tol: float = DEFAULT_RANK_TOL) -> RadoCoefficients:
    """Least-squares monic recurrence of order ``n`` for the samples.

    Raises
    ------
    AmbiguousOrderError
        If the n-column Hankel system is numerically rank deficient; the
        samples then satisfy a recurrence of lower order.
    """
    if n < 1:
        raise ValueError("order n must be positive")
    v = g.values
    # K - n + 1 >= n equations for n unknowns
    if v.size < 2 * n:
        raise InsufficientSamplesError(f"order {n} needs {2 * n} samples, got {v.size}")
    H = _hankel(v, v.size - n, n + 1)
    A, b = H[:, :n], -H[:, n]
    rank = numerical_rank(A, tol)
    if rank < n:
        raise AmbiguousOrderError(
            f"recurrence of order {n} is ill-posed (rank {rank}); reduce the order", rank
        )
    sol, *_ = np.linalg.lstsq(A, b, rcond=None)
    a = np.append(sol, 1.0 + 0j)
    denom = np.linalg.norm(H) * np.linalg.norm(a)
    residual = float(np.linalg.norm(H @ a) / denom) if denom > 0 else 0.0
    return RadoCoefficients(a, residual)


def companion_matrix(a: np.ndarray) -> np.ndarray:
    """Companion matrix of the monic polynomial z^n + a[n-1] z^{n-1} + ... + a[0]."""
    n = a.size - 1
    C = np.zeros((n, n), dtype=complex)
    C[1:, :-1] = np.eye(n - 1)
    C[:, -1] = -a[:-1]
    return C


def _cluster(mus: np.ndarray, radius: float) -> RootCluster:
    # single-linkage: roots closer than radius * max(1, |mu|) share a cluster
    n = mus.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(1.0, abs(mus[i]), abs(mus[j]))
            if abs(mus[i] - mus[j]) <= radius * scale:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(mus[i])
    roots = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    roots.sort(key=lambda r: (r[0].real, r[0].imag))
    return RootCluster(tuple(roots))


def characteristic_roots(
    rado: RadoCoefficients, cluster_radius: float = DEFAULT_CLUSTER_RADIUS
) -> RootCluster:
    """Companion-matrix roots, clustered at relative radius ``cluster_radius``."""
    mus = np.linalg.eigvals(companion_matrix(rado.a))
    return _cluster(mus, cluster_radius)


def _fit(g: SampleGrid1D, roots: RootCluster) -> tuple[ExpPolynomial, float]:
    k = np.arange(g.values.size, dtype=float)
    cols, labels = [], []
    for mu, mult in roots.roots:
        base = mu ** k
        for r in range(mult):
            cols.append(k ** r * base)
            labels.append((mu, r))
    V = np.stack(cols, axis=1)
    scale = np.linalg.norm(V, axis=0)
    scale[scale == 0] = 1.0
    c, *_ = np.linalg.lstsq(V / scale, g.values, rcond=None)
    c = c / scale

    hlen = g.step_length
    floor = 1e-13 * (1.0 + np.max(np.abs(g.values)))
    terms = []
    for (mu, r), coeff in zip(labels, c):
        # k^r mu^k  ==  (t / |h|)^r e^{lam t}  with  t = k |h|
        lam = complex(np.log(mu)) / hlen
        coeff = complex(coeff) / hlen ** r
        if abs(coeff) * (g.K * hlen) ** r * max(1.0, abs(mu) ** g.K) <= floor:
            continue
        terms.append(Term(coeff, (r,), (lam,)))
    poly = canonicalize(ExpPolynomial(1, tuple(terms)))
    return poly, reconstruction_residual(poly, g)


def recover_exp_polynomial(
    g: SampleGrid1D,
    n: int,
    *,
    tol: float | None = None,
    cluster_radius: float | None = None,
    rank_tol: float = DEFAULT_RANK_TOL,
) -> Recovery:
    """Reconstruct the exponential polynomial behind uniform samples.

    The result is a univariate polynomial in the line parameter ``t``,
    where sample ``k`` sits at ``t = k * |h|``; exponents use the principal
    logarithm ``lam = Log(mu) / |h|``.

    With ``cluster_radius=None`` several clustering radii are tried and the
    coarsest clustering whose fit is as good as the finest one is kept.

    Raises
    ------
    ZeroRootError
        A characteristic root is (numerically) zero.
    ResidualTooLargeError
        ``tol`` is given and the reconstruction residual exceeds it.
    """
    rado = rado_coefficients(g, n, rank_tol)
    mus = np.linalg.eigvals(companion_matrix(rado.a))
    top = max(1.0, float(np.max(np.abs(mus))))
    if np.any(np.abs(mus) <= 1e-12 * top):
        raise ZeroRootError("characteristic polynomial has a zero root")

    radii = ADAPTIVE_RADII if cluster_radius is None else (cluster_radius,)
    fits = []
    seen = set()
    for radius in radii:
        roots = _cluster(mus, radius)
        if roots.roots in seen:
            continue
        seen.add(roots.roots)
        poly, res = _fit(g, roots)
        fits.append((roots, poly, res))
    best = min(res for _, _, res in fits)
    accept = max(10.0 * best, 1e-13)
    roots, poly, res = min(
        (f for f in fits if f[2] <= accept), key=lambda f: len(f[0].roots)
    )
    result = Recovery(poly, rado, roots, res)
    if tol is not None and res > tol:
        raise ResidualTooLargeError(
            f"reconstruction residual {res:.3e} exceeds tolerance {tol:.3e}", result
        )
    return result


def reconstruction_residual(p: ExpPolynomial, g: SampleGrid1D, *, along_line: bool = True) -> float:
    """max_k |p(point_k) - values[k]| / (1 + max_k |values[k]|).

    With ``along_line`` the univariate ``p`` is evaluated at the line parameter
    ``t_k = k |h|``; otherwise at the grid points ``base + k * step``.
    """
    if along_line:
        pts = (np.arange(g.values.size) * g.step_length)[:, None]
        if p.dim != 1:
            raise ValueError("along_line residual needs a univariate polynomial")
    else:
        pts = g.points()
    vals = evaluate(p, pts)
    return float(np.max(np.abs(vals - g.values)) / (1.0 + np.max(np.abs(g.values))))
