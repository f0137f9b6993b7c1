"""Command-line front end.

Every command writes a JSON report (see ``schemas/report.schema.json``) to
``--out`` or stdout. Exit status is 0 when the command completed and, for
the verification and search commands, the expected-pass predicate held.
"""

from __future__ import annotations

import argparse
import json
import csv
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import PopoviciuError
from .families import FAMILIES, resolve_function
from .harness import (
    ExperimentConfig,
    line_restriction,
    popoviciu_trials,
    random_step,
    search_counterexamples,
)
from .hankel import read_grid_csv
from .kronecker import GeneratorSet, dense_generators
from .montel import LatticeSampler, minimal_order, montel_report
from .prony import recover_exp_polynomial
from .reports import make_report, write_report
from .trig import grid_points, reconstruct_joint, verify_separate_slices

log = logging.getLogger("popoviciu")


def _floats(text: str | None):
    if text is None:
        return None
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str | None):
    if text is None:
        return None
    return [int(v) for v in text.split(",") if v.strip()]


def _shared(p: argparse.ArgumentParser, *, tol: float, trials: int, function: str = "exp"):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=tol)
    p.add_argument("--trials", type=int, default=trials)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--out", default=None, help="report path (stdout when omitted)")
    p.add_argument("--function", default=function, help=f"{'|'.join(FAMILIES)}[:k=v,...] or a .json file")


def _config(args) -> ExperimentConfig:
    return ExperimentConfig(args.seed, args.dim, args.order, args.trials, args.tol, args.function)


def _echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "out")}


# --- commands -----------------------------------------------------------------

def cmd_verify_popoviciu(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    f = resolve_function(cfg.function, cfg.dim, rng, cfg.order)
    out = popoviciu_trials(f, cfg.order, cfg.trials, cfg.tol, rng, box_x=args.box_x, box_h=args.box_h)
    rate = out["summary"]["pass_rate"]
    passed = {"pass": rate == 1.0, "fail": rate <= 0.01, "none": True}[args.expect]
    out["function"] = f.description
    write_report(make_report("verify-popoviciu", _echo(args), cfg.seed, out, passed), args.out)
    return 0 if passed else 1


def cmd_line_restrict(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    f = resolve_function(cfg.function, cfg.dim, rng, cfg.order)
    x0 = _floats(args.x0)
    h0 = _floats(args.h0)
    x0 = rng.uniform(-1.0, 1.0, f.dim) if x0 is None else x0
    h0 = random_step(rng, f.dim, 1.0) if h0 is None else h0
    out = line_restriction(f, x0, h0, n_max=args.n_max, tol=cfg.tol, step=args.step,
                           samples=args.samples)
    out["function"] = f.description
    write_report(make_report("line-restrict", _echo(args), cfg.seed, out, out["success"]), args.out)
    return 0 if out["success"] else 1


def cmd_search_counterexample(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    families = [s.strip() for s in args.family.split(",") if s.strip()]
    out = search_counterexamples(families, args.candidates, args.n_max, cfg.trials, cfg.tol, rng,
                                 dim=cfg.dim, line_tol=args.line_tol)
    passed = out["summary"]["flags"] == 0
    write_report(make_report("search-counterexample", _echo(args), cfg.seed, out, passed), args.out)
    return 0 if passed else 1


def cmd_recover(args) -> int:
    g = read_grid_csv(args.input, base=_floats(args.base), step=_floats(args.step))
    rec = recover_exp_polynomial(g, args.order, tol=args.tol)
    out = {
        "order": args.order,
        "residual": rec.residual,
        "rado": [[z.real, z.imag] for z in rec.rado.a],
        "rado_residual": rec.rado.residual,
        "roots": [[mu.real, mu.imag, m] for mu, m in rec.roots.roots],
        "poly": rec.poly.to_dict(),
    }
    write_report(make_report("recover", _echo(args), None, out, None), args.out)
    return 0


def cmd_dense_gens(args) -> int:
    gens = dense_generators(args.dim, _floats(args.center), args.eps)
    write_report(make_report("dense-gens", _echo(args), None, gens.to_dict(), None), args.out)
    return 0


def cmd_montel_check(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    f = resolve_function(cfg.function, cfg.dim, rng, cfg.order)
    if args.gens:
        gens = GeneratorSet.from_dict(json.loads(Path(args.gens).read_text()))
    else:
        gens = dense_generators(f.dim, None, args.eps)
    sampler = LatticeSampler(f, dim=f.dim, seed=cfg.seed, n_probes=args.probes)
    ranks = _ints(args.ranks)
    if ranks is None:
        ranks = gens.ranks or [minimal_order(sampler, h, args.n_max, cfg.tol) for h in gens.generators]
    gens = gens.with_ranks(ranks)
    trials = rng.integers(-args.m_bound, args.m_bound + 1, size=(cfg.trials, gens.size))
    out = montel_report(sampler, gens, trials.tolist(), cfg.tol)
    out["function"] = f.description
    out["generator_set"] = gens.to_dict()
    write_report(make_report("montel-check", _echo(args), cfg.seed, out, None), args.out)
    return 0


def _grid_sample_oracle(path, dim: int):
    table = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            x = tuple(round(float(row[f"x{k + 1}"]), 9) for k in range(dim))
            table[x] = complex(float(row["re"]), float(row["im"]))

    def f(pts):
        try:
            return np.array([table[tuple(round(float(v), 9) for v in p)] for p in pts])
        except KeyError as exc:
            raise PopoviciuError(f"sample file has no value at {exc.args[0]}") from None

    return f


def cmd_trig_reconstruct(args) -> int:
    cfg = _config(args)
    rng = np.random.default_rng(cfg.seed)
    m = args.degree
    if args.samples:
        periods = _floats(args.periods) or [1.0] * cfg.dim
        f = _grid_sample_oracle(args.samples, len(periods))
        desc = {"family": "samples", "path": str(args.samples)}
        off_grid = False
    else:
        spec = resolve_function(cfg.function, cfg.dim, rng, cfg.order)
        periods = _floats(args.periods)
        if periods is None:
            tp = spec.description.get("trig_polynomial")
            periods = tp["periods"] if tp else [spec.description.get("period", 1.0)] * spec.dim
        f, desc, off_grid = spec, spec.description, True
    if args.dump_grid:
        pts = grid_points(periods, m)
        vals = np.asarray(f(pts), dtype=complex)
        with open(args.dump_grid, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([f"x{k + 1}" for k in range(len(periods))] + ["re", "im"])
            for p, v in zip(pts, vals):
                w.writerow([repr(float(c)) for c in p] + [repr(float(v.real)), repr(float(v.imag))])
    p = reconstruct_joint(f, periods, m)
    deviation = verify_separate_slices(p, f, cfg.trials, rng) if off_grid else None
    out = {"trig_polynomial": p.to_dict(), "slice_deviation": deviation, "function": desc}
    write_report(make_report("trig-reconstruct", _echo(args), cfg.seed, out, None), args.out)
    return 0


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="popoviciu", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-popoviciu", help="scan the Hankel determinant identity at random (x, h)")
    _shared(p, tol=1e-3, trials=100)
    p.add_argument("--box-x", type=float, default=2.0)
    p.add_argument("--box-h", type=float, default=2.0)
    p.add_argument("--expect", choices=["pass", "fail", "none"], default="none")
    p.set_defaults(handler=cmd_verify_popoviciu)

    p = sub.add_parser("line-restrict", help="fit f(x0 + t h0) by an exponential polynomial")
    _shared(p, tol=1e-8, trials=1)
    p.add_argument("--x0")
    p.add_argument("--h0")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--step", type=float, default=0.25)
    p.add_argument("--samples", type=int, default=None)
    p.set_defaults(handler=cmd_line_restrict)

    p = sub.add_parser("search-counterexample", help="look for Popoviciu solutions that are not exponential polynomials")
    _shared(p, tol=1e-3, trials=20)
    p.add_argument("--family", default="exppoly")
    p.add_argument("--candidates", type=int, default=5)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--line-tol", type=float, default=1e-8)
    p.set_defaults(handler=cmd_search_counterexample)

    p = sub.add_parser("recover", help="Prony recovery from a k,re,im sample CSV")
    _shared(p, tol=1e-6, trials=1)
    p.add_argument("--input", required=True)
    p.add_argument("--base")
    p.add_argument("--step")
    p.set_defaults(handler=cmd_recover)

    p = sub.add_parser("dense-gens", help="generators of a dense subgroup inside a ball")
    _shared(p, tol=1e-3, trials=1)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--center")
    p.set_defaults(handler=cmd_dense_gens)

    p = sub.add_parser("montel-check", help="step operators, W and lattice-translate membership")
    _shared(p, tol=1e-10, trials=50, function="exppoly")
    p.add_argument("--gens", help="GeneratorSet JSON file")
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--ranks")
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--m-bound", type=int, default=20)
    p.add_argument("--probes", type=int, default=200)
    p.set_defaults(handler=cmd_montel_check)

    p = sub.add_parser("trig-reconstruct", help="joint trigonometric polynomial from grid samples")
    _shared(p, tol=1e-9, trials=20, function="cos-product")
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--periods")
    p.add_argument("--samples", help="grid sample CSV with columns x1..xd,re,im")
    p.add_argument("--dump-grid", help="write the sampled grid to this CSV")
    p.set_defaults(handler=cmd_trig_reconstruct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    verbose = args.verbose
    del args.verbose
    try:
        return args.handler(args)
    except (PopoviciuError, ValueError, OSError) as exc:
        if verbose:
            raise
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
