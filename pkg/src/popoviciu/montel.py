"""Finite-dimensional realization of the Montel-type translate argument.

Functions are represented by their values on a fixed probe cloud. For each
generator h_i the translates f, tau f, ..., tau^{n_i} f are fitted by a
companion-form step operator M_i; the mixed translates
tau_{h_1}^{a_1} ... tau_{h_s}^{a_s} f (0 <= a_i < n_i) span the space W, and
membership of arbitrary lattice translates tau_{m.h} f in W is measured by a
relative projection residual.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    ProbeSetTooSmallError,
    RankDeficiencyError,
    RankExcessError,
    SingularOperatorError,
)
from .hankel import DEFAULT_RANK_TOL, numerical_rank
from .kronecker import GeneratorSet

log = logging.getLogger(__name__)

DEFAULT_PROBES = 200
DEFAULT_PROBE_BOX = 3.0
MAGNITUDE_CAP = 1e12


class LatticeSampler:
    """Evaluation oracle plus the probe cloud that turns functions into vectors.

    Parameters
    ----------
    f : callable
        Maps an ``(N, d)`` float array to ``N`` complex values.
    probes : array_like, optional
        Probe points, shape ``(P, d)``. Defaults to ``n_probes`` points drawn
        uniformly from ``[-box, box]^d`` with the given seed.
    cap : float
        Probes at which any requested translate exceeds this magnitude (or is
        not finite) are dropped from the computation that requested it.
    """

    def __init__(
        self,
        f: Callable,
        probes=None,
        *,
        dim: int | None = None,
        seed: int = 0,
        n_probes: int = DEFAULT_PROBES,
        box: float = DEFAULT_PROBE_BOX,
        cap: float = MAGNITUDE_CAP,
    ):
        if probes is None:
            if dim is None:
                raise ValueError("either probes or dim is required")
            rng = np.random.default_rng(seed)
            probes = rng.uniform(-box, box, size=(n_probes, dim))
        probes = np.atleast_2d(np.asarray(probes, dtype=float))
        if len(np.unique(probes, axis=0)) != len(probes):
            raise ValueError("probe points must be pairwise distinct")
        self.f = f
        self.probes = probes
        self.cap = cap

    @property
    def dim(self) -> int:
        return self.probes.shape[1]

    @property
    def n_probes(self) -> int:
        return self.probes.shape[0]

    def translates(self, shifts) -> tuple[np.ndarray, np.ndarray]:
        """Probe-vectors of tau_s f for each shift s.

        Returns the ``(P, T)`` value matrix and the boolean mask of probes on
        which every column is finite and below the magnitude cap.
        """
        shifts = np.atleast_2d(np.asarray(shifts, dtype=float))
        P = self.n_probes
        pts = (self.probes[None, :, :] + shifts[:, None, :]).reshape(-1, self.dim)
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.asarray(self.f(pts), dtype=complex).reshape(len(shifts), P).T
            keep = np.all(np.isfinite(vals) & (np.abs(vals) <= self.cap), axis=1)
        dropped = P - int(keep.sum())
        if dropped:
            log.info("dropped %d of %d probes above magnitude cap", dropped, P)
        return vals, keep


def _normalized_columns(A: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(A, axis=0)
    norms[norms == 0] = 1.0
    return A / norms


@dataclass(frozen=True, eq=False)
class StepOperator:
    generator: np.ndarray
    order: int
    matrix: np.ndarray
    residual: float
    condition_number: float
    dropped_probes: int = 0

    def power_coordinates(self, m: int) -> np.ndarray:
        """Coordinates of tau_h^m f in the basis {tau_h^j f}_{j<n}, i.e. M^m e_0."""
        e0 = np.zeros(self.order, dtype=complex)
        e0[0] = 1.0
        return np.linalg.matrix_power(self.matrix, int(m)) @ e0


def fit_step_operator(
    s: LatticeSampler, h, n: int, tol: float = DEFAULT_RANK_TOL
) -> StepOperator:
    """Companion-form matrix of tau_h on span{f, tau_h f, ..., tau_h^{n-1} f}.

    Raises
    ------
    RankDeficiencyError
        The first ``n`` translates already have rank below ``n``; the order
        is not minimal (``detected_rank`` carries the smaller value).
    RankExcessError
        ``tau_h^n f`` is not in the span of the lower translates at this order.
    SingularOperatorError
        The fitted matrix is numerically singular.
    """
    h = np.asarray(h, dtype=float).reshape(s.dim)
    V, keep = s.translates(np.arange(n + 1)[:, None] * h[None, :])
    V = V[keep]
    if V.shape[0] < 4 * n:
        raise ProbeSetTooSmallError(f"only {V.shape[0]} usable probes for order {n}")
    low = numerical_rank(_normalized_columns(V[:, :n]), tol)
    if low < n:
        raise RankDeficiencyError(f"translates have rank {low} < {n}; order is not minimal", low)
    full = numerical_rank(_normalized_columns(V), tol)
    if full > n:
        raise RankExcessError(f"translate family has rank {full} > {n}", full)

    c, *_ = np.linalg.lstsq(V[:, :n], V[:, n], rcond=None)
    target = np.linalg.norm(V[:, n])
    residual = float(np.linalg.norm(V[:, :n] @ c - V[:, n]) / target) if target else 0.0
    M = np.zeros((n, n), dtype=complex)
    M[1:, :-1] = np.eye(n - 1)
    M[:, -1] = c
    cond = float(np.linalg.cond(M))
    if not np.isfinite(cond) or cond >= 1.0 / tol:
        raise SingularOperatorError(f"step operator is singular (condition {cond:.3e})")
    return StepOperator(h, n, M, residual, cond, s.n_probes - int(keep.sum()))


def minimal_order(s: LatticeSampler, h, n_max: int, tol: float = DEFAULT_RANK_TOL) -> int:
    """Smallest n with tau_h^n f in span{tau_h^k f : k < n}, searched up to n_max."""
    h = np.asarray(h, dtype=float).reshape(s.dim)
    V, keep = s.translates(np.arange(n_max + 1)[:, None] * h[None, :])
    V = _normalized_columns(V[keep])
    for n in range(1, n_max + 1):
        if numerical_rank(V[:, : n + 1], tol) <= n:
            return n
    raise RankExcessError(f"no order up to {n_max} annihilates the translates", n_max + 1)


@dataclass(frozen=True, eq=False)
class WBasis:
    """Orthonormal probe-vector basis of W = span of the mixed translates."""

    dim: int
    q: np.ndarray
    raw: np.ndarray
    mask: np.ndarray
    exponents: tuple[tuple[int, ...], ...]
    ranks: tuple[int, ...]
    tol: float = DEFAULT_RANK_TOL
    notes: dict = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return int(np.prod(self.ranks))

    def basis_on(self, mask: np.ndarray) -> np.ndarray:
        """Orthonormal basis of the same W restricted to a smaller probe mask."""
        if np.array_equal(mask, self.mask):
            return self.q
        A = _normalized_columns(self.raw[mask])
        U, _, _ = np.linalg.svd(A, full_matrices=False)
        return U[:, : self.dim]


def build_w_basis(s: LatticeSampler, gens: GeneratorSet, tol: float = DEFAULT_RANK_TOL) -> WBasis:
    """Probe-vectors of the mixed translates, orthonormalized with rank truncation."""
    if gens.ranks is None:
        raise ValueError("generator ranks are required to build W")
    if gens.dim != s.dim:
        raise ValueError("generator and probe dimensions differ")
    exps = tuple(itertools.product(*(range(n) for n in gens.ranks)))
    bound = len(exps)
    shifts = np.asarray(exps, dtype=float) @ gens.generators
    raw, mask = s.translates(shifts)
    usable = int(mask.sum())
    if usable < 4 * bound:
        raise ProbeSetTooSmallError(
            f"{usable} usable probes cannot resolve a space of dimension up to {bound}"
        )
    A = _normalized_columns(raw[mask])
    U, sv, _ = np.linalg.svd(A, full_matrices=False)
    r = int(np.sum(sv > tol * sv[0])) if sv.size and sv[0] > 0 else 0
    return WBasis(
        r, U[:, :r], raw, mask, exps, gens.ranks, tol,
        {"dropped_probes": s.n_probes - usable},
    )


def membership_residual(s: LatticeSampler, W: WBasis, m, gens: GeneratorSet) -> float:
    """Relative norm of the part of tau_{m.h} f orthogonal to W."""
    m = np.asarray(m, dtype=float).reshape(gens.size)
    if not np.any(m):
        # f itself is one of the spanning vectors of W
        return 0.0
    v, keep = s.translates(gens.combine(m)[None, :])
    mask = W.mask & keep
    v = v[mask, 0]
    norm = np.linalg.norm(v)
    if norm == 0 or W.dim == 0:
        return 0.0 if norm == 0 else 1.0
    Q = W.basis_on(mask)
    return float(np.linalg.norm(v - Q @ (Q.conj().T @ v)) / norm)


def lattice_coordinates(ops: list[StepOperator], m, order=None) -> np.ndarray:
    """Coefficient tensor of tau_{m.h} f over the mixed translates.

    Starts from the coordinates of f (a unit tensor) and applies M_i^{m_i}
    along axis i, in the generator order given by ``order``.
    """
    T = np.zeros(tuple(op.order for op in ops), dtype=complex)
    T[(0,) * len(ops)] = 1.0
    for i in (range(len(ops)) if order is None else order):
        P = np.linalg.matrix_power(ops[i].matrix, int(m[i]))
        T = np.moveaxis(np.tensordot(P, T, axes=([1], [i])), 0, i)
    return T


def translate_via_operators(
    s: LatticeSampler, gens: GeneratorSet, ops: list[StepOperator], m, order=None
) -> np.ndarray:
    """Probe-vector of tau_{m.h} f assembled from the fitted step operators."""
    T = lattice_coordinates(ops, m, order)
    exps = list(itertools.product(*(range(op.order) for op in ops)))
    raw, _ = s.translates(np.asarray(exps, dtype=float) @ gens.generators)
    return raw @ T.reshape(-1)


def montel_report(
    s: LatticeSampler,
    gens: GeneratorSet,
    trials,
    tol: float = DEFAULT_RANK_TOL,
) -> dict:
    """Fit every step operator, build W and test membership for each m in ``trials``."""
    per_gen = []
    for h, n in zip(gens.generators, gens.ranks):
        op = fit_step_operator(s, h, n, tol)
        per_gen.append(
            {
                "generator": h.tolist(),
                "n_i": n,
                "residual": op.residual,
                "condition_number": op.condition_number,
            }
        )
    W = build_w_basis(s, gens, tol)
    records = [
        {"m": [int(v) for v in m], "residual": membership_residual(s, W, m, gens)}
        for m in trials
    ]
    return {
        "dimW": W.dim,
        "dimW_bound": W.bound,
        "generators": per_gen,
        "membership_trials": records,
        "max_membership_residual": max((r["residual"] for r in records), default=0.0),
    }
