"""Translate-Hankel matrices of sampled functions.

The central object is the (n+1) x (n+1) matrix with entries f(x + (i+j) h),
whose determinant vanishes identically for exponential polynomials of
translate dimension at most n.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import DegenerateStepError, InsufficientSamplesError

DEFAULT_RANK_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SampleGrid1D:
    """Uniform samples ``values[k] = f(base + k * step)``, k = 0..K."""

    base: np.ndarray
    step: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        base = np.atleast_1d(np.asarray(self.base, dtype=float))
        step = np.atleast_1d(np.asarray(self.step, dtype=float))
        values = np.asarray(self.values, dtype=complex).ravel()
        if base.shape != step.shape:
            raise ValueError("base and step must have the same dimension")
        if not np.any(step != 0):
            raise DegenerateStepError("step h must be nonzero")
        if values.size < 2:
            raise InsufficientSamplesError("a sample grid needs at least two values")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "step", step)
        object.__setattr__(self, "values", values)

    @property
    def dim(self) -> int:
        return self.base.shape[0]

    @property
    def K(self) -> int:
        return self.values.size - 1

    @property
    def step_length(self) -> float:
        return float(np.linalg.norm(self.step))

    def points(self) -> np.ndarray:
        k = np.arange(self.values.size)[:, None]
        return self.base[None, :] + k * self.step[None, :]


def sample_grid(f: Callable, base, step, count: int) -> SampleGrid1D:
    """Sample ``f`` (vectorized over an ``(N, d)`` array) at ``base + k*step``."""
    base = np.atleast_1d(np.asarray(base, dtype=float))
    step = np.atleast_1d(np.asarray(step, dtype=float))
    if not np.any(step != 0):
        raise DegenerateStepError("step h must be nonzero")
    pts = base[None, :] + np.arange(count)[:, None] * step[None, :]
    return SampleGrid1D(base, step, np.asarray(f(pts), dtype=complex))


@dataclass(frozen=True, eq=False)
class PopoviciuMatrix:
    order: int
    entries: np.ndarray


def _hankel(values: np.ndarray, rows: int, cols: int) -> np.ndarray:
    idx = np.arange(rows)[:, None] + np.arange(cols)[None, :]
    return values[idx]


def build_popoviciu_matrix(g: SampleGrid1D, n: int) -> PopoviciuMatrix:
    """The (n+1)x(n+1) matrix with entry (i, j) = g.values[i + j]."""
    if n < 1:
        raise ValueError("order n must be positive")
    if g.values.size < 2 * n + 1:
        raise InsufficientSamplesError(
            f"order {n} needs {2 * n + 1} samples, got {g.values.size}"
        )
    return PopoviciuMatrix(n, _hankel(g.values, n + 1, n + 1))


def popoviciu_residual(g: SampleGrid1D, n: int) -> float:
    """Scale-free determinant residual |det M| / prod_i ||row_i(M)||.

    Returns 0 when some row vanishes. Values near 0 indicate the determinant
    identity holds at this (x, h, n).
    """
    M = build_popoviciu_matrix(g, n).entries
    norms = np.linalg.norm(M, axis=1)
    if np.any(norms == 0):
        return 0.0
    # normalizing rows first keeps the LU product away from under/overflow
    return float(min(1.0, abs(np.linalg.det(M / norms[:, None]))))


def numerical_rank(A: np.ndarray, tol: float = DEFAULT_RANK_TOL) -> int:
    """Count of singular values above ``tol`` times the largest one."""
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0 or not np.isfinite(s[0]):
        return 0
    return int(np.sum(s > tol * s[0]))


def translate_rank(g: SampleGrid1D, n: int, tol: float = DEFAULT_RANK_TOL) -> int:
    """Numerical rank of the (K-n+1) x (n+1) Hankel window of the samples.

    Estimates dim span{f, tau_h f, ..., tau_h^n f} on the sampled window.
    """
    if n < 1:
        raise ValueError("window n must be positive")
    if g.values.size < 2 * n + 1:
        raise InsufficientSamplesError(
            f"window {n} needs {2 * n + 1} samples, got {g.values.size}"
        )
    return numerical_rank(_hankel(g.values, g.K - n + 1, n + 1), tol)


# --- CSV / sidecar I/O --------------------------------------------------------

def write_grid_csv(g: SampleGrid1D, path, sidecar=None) -> None:
    """Write ``k,re,im`` rows; base and step go to a JSON sidecar."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["k", "re", "im"])
        for k, v in enumerate(g.values):
            w.writerow([k, repr(float(v.real)), repr(float(v.imag))])
    sidecar = Path(sidecar) if sidecar else grid_sidecar_path(path)
    sidecar.write_text(
        json.dumps({"base": g.base.tolist(), "step": g.step.tolist()}) + "\n"
    )


def grid_sidecar_path(path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".grid.json")


def read_grid_csv(path, base=None, step=None, sidecar=None) -> SampleGrid1D:
    """Read a ``k,re,im`` CSV. Missing base/step are taken from the sidecar."""
    path = Path(path)
    rows = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames[:3]] != ["k", "re", "im"]:
            raise ValueError(f"{path}: expected header k,re,im")
        for row in reader:
            rows.append((int(row["k"]), complex(float(row["re"]), float(row["im"]))))
    rows.sort()
    if [k for k, _ in rows] != list(range(len(rows))):
        raise ValueError(f"{path}: sample indices must be 0..K without gaps")
    if base is None or step is None:
        side = Path(sidecar) if sidecar else grid_sidecar_path(path)
        meta = json.loads(side.read_text()) if side.exists() else {}
        base = meta.get("base", [0.0]) if base is None else base
        step = meta.get("step", [1.0]) if step is None else step
    return SampleGrid1D(np.asarray(base, float), np.asarray(step, float), [v for _, v in rows])
