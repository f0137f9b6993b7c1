"""Built-in test functions for the command-line harness.

Each family resolves to a vectorized callable on ``(N, d)`` arrays together
with a JSON description. Families either belong to the known solution class
(exponential polynomials, bounded trigonometric combinations) or are
plausible non-solutions (gaussian, runge, smoothed absolute value).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .exppoly import ExpPolynomial, canonicalize, random_exp_polynomial, translate_span_dim
from .trig import TrigPolynomial

FAMILIES = ("exp", "exppoly", "gaussian", "runge", "abs-smoothed", "trig", "cos-product")


@dataclass(frozen=True)
class FunctionSpec:
    name: str
    dim: int
    func: Callable
    translate_dim: int | None
    description: dict

    def __call__(self, x):
        return self.func(np.atleast_2d(np.asarray(x, dtype=float)))


def parse_function_arg(text: str) -> tuple[str, dict]:
    """Split ``name:key=val,key=val`` into a name and float parameters."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        params[key.strip()] = float(val)
    return name.strip(), params


def _sq(x: np.ndarray) -> np.ndarray:
    return np.sum(x * x, axis=1)


def random_trig_combination(rng: np.random.Generator, dim: int, n: int) -> ExpPolynomial:
    """Bounded sum of n terms c_j exp(i <lam_j, alpha_j x>) with distinct frequencies."""
    freqs: list[np.ndarray] = []
    while len(freqs) < n:
        lam = rng.uniform(-1.0, 1.0, dim)
        alpha = rng.integers(-2, 3, dim)
        w = lam * alpha
        if all(np.linalg.norm(w - q) > 1e-3 for q in freqs):
            freqs.append(w)
    terms = []
    for w in freqs:
        c = complex(rng.uniform(0.2, 1.0) * np.exp(2j * np.pi * rng.uniform()))
        terms.append((c, (0,) * dim, tuple((1j * w).tolist())))
    return canonicalize(ExpPolynomial(dim, tuple(terms)))


def _from_exppoly(name: str, p: ExpPolynomial, extra: dict | None = None) -> FunctionSpec:
    desc = {"family": name, "exp_polynomial": p.to_dict()}
    desc.update(extra or {})
    return FunctionSpec(name, p.dim, p.__call__, translate_span_dim(p), desc)


def load_function_file(path) -> FunctionSpec:
    data = json.loads(Path(path).read_text())
    if "periods" in data:
        tp = TrigPolynomial.from_dict(data)
        return FunctionSpec(
            "file", tp.dim, tp.__call__, translate_span_dim(tp.to_exp_polynomial()),
            {"family": "file", "path": str(path), "trig_polynomial": data},
        )
    p = ExpPolynomial.from_dict(data)
    return FunctionSpec(
        "file", p.dim, p.__call__, translate_span_dim(p),
        {"family": "file", "path": str(path), "exp_polynomial": data},
    )


def resolve_function(
    text: str, dim: int, rng: np.random.Generator, order: int | None = None
) -> FunctionSpec:
    """Resolve a ``--function`` argument to a :class:`FunctionSpec`.

    Paths to existing ``.json`` files load an ExpPolynomial or TrigPolynomial.
    Random families (exppoly, trig) draw from ``rng``; their size is ``order``
    unless a ``n=`` parameter is given.
    """
    if text.endswith(".json") and Path(text).exists():
        return load_function_file(text)
    name, params = parse_function_arg(text)
    n = int(params.get("n", order or 1))
    if name == "exp":
        rate = params.get("rate", 1.0)
        p = ExpPolynomial(dim, ((1.0, (0,) * dim, (rate,) * dim),))
        return _from_exppoly(name, p)
    if name == "exppoly":
        p = random_exp_polynomial(rng, dim, n, lam_radius=params.get("radius", 1.0))
        return _from_exppoly(name, p)
    if name == "trig":
        return _from_exppoly(name, random_trig_combination(rng, dim, n))
    if name == "gaussian":
        a = params.get("scale", 1.0)
        return FunctionSpec(name, dim, lambda x: np.exp(-a * _sq(x)) + 0j, None,
                            {"family": name, "scale": a})
    if name == "runge":
        return FunctionSpec(name, dim, lambda x: 1.0 / (1.0 + _sq(x)) + 0j, None,
                            {"family": name})
    if name == "abs-smoothed":
        delta = params.get("delta", 0.1)
        return FunctionSpec(name, dim, lambda x: np.sqrt(_sq(x) + delta ** 2) + 0j, None,
                            {"family": name, "delta": delta})
    if name == "cos-product":
        periods = np.full(dim, params.get("period", 1.0))

        def f(x):
            return np.prod(np.cos(2 * np.pi * x / periods), axis=1) + 0j

        return FunctionSpec(name, dim, f, 2 ** dim, {"family": name, "period": float(periods[0])})
    raise ValueError(f"unknown function family {name!r}; choose from {', '.join(FAMILIES)} or a .json file")
