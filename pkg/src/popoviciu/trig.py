"""Joint trigonometric polynomials reconstructed from separate-variable slices.

If f is a T_k-periodic trigonometric polynomial of degree <= m in each
variable separately, it is a trigonometric polynomial jointly, and its
coefficients are determined by the values on a tensor grid with 2m+1 nodes
per axis. With equispaced nodes the interpolation system is a scaled DFT.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NonFiniteSamplesError
from .exppoly import ExpPolynomial, Term, as_points

TRIM = 1e-12
DETECT_REL = 1e-9
ADAPTIVE_TOL = 1e-10
ADAPTIVE_CAP = 64


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    """sum_alpha c_alpha prod_k exp(2 pi i alpha_k x_k / T_k), |alpha_k| <= degree."""

    dim: int
    periods: tuple[float, ...]
    degree: int
    coeffs: dict

    def __post_init__(self):
        periods = tuple(float(t) for t in self.periods)
        if len(periods) != self.dim or any(t <= 0 for t in periods):
            raise ValueError("need one positive period per variable")
        coeffs = {}
        for alpha, c in self.coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.dim or any(abs(a) > self.degree for a in alpha):
                raise ValueError(f"frequency {alpha} outside degree {self.degree}")
            if abs(c) >= TRIM:
                coeffs[alpha] = complex(c)
        object.__setattr__(self, "periods", periods)
        object.__setattr__(self, "coeffs", dict(sorted(coeffs.items())))

    def __call__(self, x):
        return evaluate_trig(self, x)

    def coefficient(self, alpha) -> complex:
        return self.coeffs.get(tuple(alpha), 0j)

    def to_exp_polynomial(self) -> ExpPolynomial:
        w = 2j * np.pi / np.asarray(self.periods)
        terms = [
            Term(c, (0,) * self.dim, tuple((w * np.asarray(a)).tolist()))
            for a, c in self.coeffs.items()
        ]
        return ExpPolynomial(self.dim, tuple(terms))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "periods": list(self.periods),
            "degree": self.degree,
            "coeffs": [
                {"alpha": list(a), "c": [c.real, c.imag]} for a, c in self.coeffs.items()
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TrigPolynomial":
        coeffs = {tuple(e["alpha"]): complex(*e["c"]) for e in data["coeffs"]}
        return cls(int(data["dim"]), tuple(data["periods"]), int(data["degree"]), coeffs)

    def dumps(self) -> str:
        return json.dumps(self.to_dict())


def evaluate_trig(p: TrigPolynomial, x):
    pts, single = as_points(x, p.dim)
    out = np.zeros(pts.shape[0], dtype=complex)
    if p.coeffs:
        alphas = np.asarray(list(p.coeffs), dtype=float)
        cs = np.asarray(list(p.coeffs.values()))
        phase = 2j * np.pi * (pts / np.asarray(p.periods)) @ alphas.T
        out = np.exp(phase) @ cs
    return complex(out[0]) if single else out


def grid_nodes(periods, m: int) -> list[np.ndarray]:
    L = 2 * m + 1
    return [np.arange(L) * T / L for T in periods]


def grid_points(periods, m: int) -> np.ndarray:
    """Tensor grid Q_1 x ... x Q_d in C order, shape ((2m+1)^d, d)."""
    nodes = grid_nodes(periods, m)
    mesh = np.meshgrid(*nodes, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def coefficients_from_grid(values: np.ndarray, periods, m: int) -> TrigPolynomial:
    """Invert grid samples (shape (2m+1,)*d) to trigonometric coefficients."""
    d = len(periods)
    L = 2 * m + 1
    if not np.all(np.isfinite(values)):
        raise NonFiniteSamplesError("grid evaluation produced non-finite values")
    C = np.fft.fftn(values.reshape((L,) * d)) / L ** d
    coeffs = {}
    for alpha in itertools.product(range(-m, m + 1), repeat=d):
        c = C[tuple(a % L for a in alpha)]
        if abs(c) >= TRIM:
            coeffs[alpha] = complex(c)
    return TrigPolynomial(d, tuple(periods), m, coeffs)


def reconstruct_joint(f: Callable, periods, m: int) -> TrigPolynomial:
    """Sample ``f`` on the (2m+1)^d equispaced grid and invert by DFT."""
    periods = tuple(float(t) for t in periods)
    if m < 0:
        raise ValueError("degree must be nonnegative")
    pts = grid_points(periods, m)
    values = np.asarray(f(pts), dtype=complex)
    return coefficients_from_grid(values, periods, m)


def reconstruct_adaptive(
    f: Callable, periods, m: int = 1, *, tol: float = ADAPTIVE_TOL, cap: int = ADAPTIVE_CAP
) -> TrigPolynomial:
    """Double the degree until coefficients beyond the previous degree vanish."""
    m = max(1, m)
    prev = reconstruct_joint(f, periods, m)
    while m < cap:
        m = min(2 * m, cap)
        cur = reconstruct_joint(f, periods, m)
        extra = [abs(c) for a, c in cur.coeffs.items() if max(map(abs, a)) > prev.degree]
        if max(extra, default=0.0) < tol:
            return TrigPolynomial(cur.dim, cur.periods, prev.degree, {
                a: c for a, c in cur.coeffs.items() if max(map(abs, a), default=0) <= prev.degree
            })
        prev = cur
    return prev


def verify_separate_slices(
    p: TrigPolynomial, f: Callable, trials: int, rng: np.random.Generator | None = None
) -> float:
    """Max |p - f| over random axis-parallel slices, 4m+5 points each."""
    rng = np.random.default_rng(0) if rng is None else rng
    T = np.asarray(p.periods)
    count = 4 * p.degree + 5
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(p.dim))
        base = rng.uniform(0, 1, p.dim) * T
        pts = np.repeat(base[None, :], count, axis=0)
        pts[:, k] += np.arange(count) * T[k] / count
        dev = np.abs(evaluate_trig(p, pts) - np.asarray(f(pts), dtype=complex))
        worst = max(worst, float(np.max(dev)))
    return worst


def detect_axis_degree(f: Callable, axis: int, base, period: float, m_max: int) -> int:
    """Largest frequency visible on a (2 m_max + 1)-point slice along ``axis``.

    Frequencies above ``m_max`` alias onto lower ones and are not detected.
    """
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    base = np.asarray(base, dtype=float).reshape(-1)
    L = 2 * m_max + 1
    pts = np.repeat(base[None, :], L, axis=0)
    pts[:, axis] += np.arange(L) * period / L
    vals = np.asarray(f(pts), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteSamplesError("slice evaluation produced non-finite values")
    C = np.abs(np.fft.fft(vals)) / L
    top = C.max()
    if top == 0:
        return 0
    freqs = np.rint(np.fft.fftfreq(L) * L).astype(int)
    return int(np.max(np.abs(freqs[C > DETECT_REL * top])))


def random_trig_polynomial(rng: np.random.Generator, dim: int, m: int, periods=None) -> TrigPolynomial:
    periods = tuple(rng.uniform(0.5, 3.0, dim)) if periods is None else tuple(periods)
    coeffs = {
        a: complex(rng.standard_normal(), rng.standard_normal())
        for a in itertools.product(range(-m, m + 1), repeat=dim)
    }
    return TrigPolynomial(dim, periods, m, coeffs)

