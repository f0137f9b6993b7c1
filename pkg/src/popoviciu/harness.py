"""Experiment routines behind the verification and search commands."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousOrderError, ZeroRootError
from .families import FunctionSpec, resolve_function
from .hankel import SampleGrid1D, popoviciu_residual, sample_grid
from .prony import recover_exp_polynomial


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int = 0
    dim: int = 1
    order: int = 1
    trials: int = 100
    tol: float = 1e-3
    function: str = "exp"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.dim < 1 or self.order < 1:
            raise ValueError("dim and order must be positive")


def random_step(rng: np.random.Generator, dim: int, box: float) -> np.ndarray:
    """Uniform step in [-box, box]^d, redrawn while (numerically) zero."""
    while True:
        h = rng.uniform(-box, box, dim)
        if np.linalg.norm(h) > 1e-6 * box:
            return h


def popoviciu_trials(
    f: FunctionSpec,
    order: int,
    trials: int,
    tol: float,
    rng: np.random.Generator,
    *,
    box_x: float = 2.0,
    box_h: float = 2.0,
) -> dict:
    """Residuals of the order-n determinant identity at random (x, h)."""
    records = []
    for i in range(trials):
        x = rng.uniform(-box_x, box_x, f.dim)
        h = random_step(rng, f.dim, box_h)
        res = popoviciu_residual(sample_grid(f, x, h, 2 * order + 1), order)
        records.append(
            {"trial": i, "x": x.tolist(), "h": h.tolist(), "n": order,
             "residual": res, "pass": bool(res < tol)}
        )
    residuals = [r["residual"] for r in records]
    n_pass = sum(r["pass"] for r in records)
    return {
        "records": records,
        "summary": {
            "trials": trials,
            "passes": n_pass,
            "pass_rate": n_pass / trials,
            "max_residual": max(residuals),
            "min_residual": min(residuals),
        },
    }


def line_restriction(
    f: FunctionSpec,
    x0,
    h0,
    *,
    n_max: int = 8,
    tol: float = 1e-8,
    step: float = 0.25,
    samples: int | None = None,
) -> dict:
    """Fit F(t) = f(x0 + t h0) by exponential polynomials of increasing order."""
    x0 = np.asarray(x0, dtype=float).reshape(f.dim)
    h0 = np.asarray(h0, dtype=float).reshape(f.dim)
    count = samples or 4 * n_max + 1
    t = np.arange(count) * step
    values = f(x0[None, :] + t[:, None] * h0[None, :])
    g = SampleGrid1D([0.0], [step], values)
    attempts = []
    for n in range(1, n_max + 1):
        if 2 * n + 1 > count:
            break
        try:
            rec = recover_exp_polynomial(g, n)
        except (AmbiguousOrderError, ZeroRootError) as exc:
            attempts.append({"n": n, "residual": None, "error": type(exc).__name__})
            continue
        attempts.append({"n": n, "residual": rec.residual, "error": None})
        if rec.residual < tol:
            return {
                "x0": x0.tolist(), "h0": h0.tolist(), "step": step, "samples": count,
                "attempts": attempts, "success": True, "order": n,
                "residual": rec.residual, "poly": rec.poly.to_dict(),
                "roots": [[mu.real, mu.imag, m] for mu, m in rec.roots.roots],
            }
    best = min((a["residual"] for a in attempts if a["residual"] is not None), default=None)
    return {
        "x0": x0.tolist(), "h0": h0.tolist(), "step": step, "samples": count,
        "attempts": attempts, "success": False, "order": None,
        "residual": best, "poly": None, "roots": None,
    }


def search_counterexamples(
    families: list[str],
    candidates: int,
    n_max: int,
    trials: int,
    tol: float,
    rng: np.random.Generator,
    *,
    dim: int = 1,
    line_tol: float = 1e-8,
) -> dict:
    """Flag functions passing a Popoviciu scan whose line restrictions fail recovery.

    Every flagged function would be a candidate counterexample to the claim
    that continuous solutions are exponential polynomials; none are expected.
    """
    rows = []
    for family in families:
        for _ in range(candidates):
            order = int(rng.integers(1, n_max + 1))
            f = resolve_function(family, dim, rng, order)
            rates = [
                popoviciu_trials(f, n, trials, tol, rng)["summary"]["pass_rate"]
                for n in range(1, n_max + 1)
            ]
            passing = [n for n, r in zip(range(1, n_max + 1), rates) if r == 1.0]
            x0 = rng.uniform(-1.0, 1.0, dim)
            h0 = random_step(rng, dim, 1.0)
            line = line_restriction(f, x0, h0, n_max=n_max, tol=line_tol)
            rows.append({
                "family": family,
                "function": f.description,
                "translate_dim": f.translate_dim,
                "pass_rates": rates,
                "passes_popoviciu": bool(passing),
                "min_passing_order": passing[0] if passing else None,
                "line_restriction": {
                    "success": line["success"],
                    "order": line["order"],
                    "residual": line["residual"],
                },
                "flagged": bool(passing) and not line["success"],
            })
    return {
        "candidates": rows,
        "summary": {
            "candidates": len(rows),
            "flags": sum(r["flagged"] for r in rows),
        },
    }
