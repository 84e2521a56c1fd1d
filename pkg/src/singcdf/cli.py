"""Command-line interface: ``singcdf eval|curve|classify|verify|approx|figure``.

Set ``SINGCDF_THREADS`` to evaluate grid points in that many worker
processes; results are collected in grid order, so output is identical for
any thread count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import approx, figures, verify
from .cdf import DEFAULT_TOL, CdfValue, classify, eval_cdf
from .digits import as_fraction, fraction_grid
from .errors import NoConvergence, ValidationError
from .models import BernoulliSpec, MarkovSpec, MixtureSpec, Model, RenewalSpec
from .plotting import render_curves
from .specfile import load_spec
from .zoo import BETA_GRID, SWEEP

EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_NO_CONVERGENCE = 3

CLI_TOL = 1e-12


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SINGCDF_THREADS", "1")))
    except ValueError:
        return 1


def _eval_one(args) -> CdfValue:
    model, x, tol = args
    return eval_cdf(model, x, tol)


def evaluate_points(model: Model, xs: Sequence[Fraction], tol: float) -> list[CdfValue]:
    n = _threads()
    jobs = [(model, x, tol) for x in xs]
    if n == 1 or len(xs) < 64:
        return [_eval_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_eval_one, jobs, chunksize=max(1, len(jobs) // (4 * n))))


def curve_grid(q: int, points: int) -> list[Fraction]:
    """Smallest full grid of base-q fractions (endpoints included) with at least ``points`` points."""
    if points < 2:
        raise ValueError("a curve needs at least 2 points")
    order = 0
    while q**order + 1 < points:
        order += 1
    return fraction_grid(q, order, include_endpoints=True)


def fmt17(v) -> str:
    return f"{float(v):.17g}"


def write_csv(path: Path, xs, values: Sequence[CdfValue]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "F", "bound"])
        for x, v in zip(xs, values):
            w.writerow([fmt17(x), fmt17(v.value), fmt17(v.truncation_bound)])


def format_eval(v: CdfValue, tol: float) -> str:
    """``F(x)=<v> ±<b> atom=<a>``; ``b`` is the certified bound, floored at ``tol``."""
    b = max(v.truncation_bound, tol)
    digits = max(0, math.ceil(-math.log10(b)))
    mid = round(v.midpoint, digits)
    text = f"{mid:.{digits}f}".rstrip("0").rstrip(".") if digits else f"{mid:.0f}"
    if text in ("", "-0"):
        text = "0"
    return f"F(x)={text} ±{b:.3g} atom={v.atom_mass_at_x:.17g}"


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

SWEEPS = ("riesz-nagy", "ising", "nb2", "beta-poisson", "beta-ising")


def sweep_models(name: str) -> list[tuple[str, Model]]:
    if name == "riesz-nagy":
        return [(f"pi={float(p):.1f}", BernoulliSpec.riesz_nagy(p).validate()) for p in SWEEP]
    if name == "ising":
        return [(f"pi={float(p):.1f}", MarkovSpec.ising(p).validate()) for p in SWEEP]
    if name == "nb2":
        return [(f"pi={float(p):.1f}", RenewalSpec.nb2(p).validate()) for p in SWEEP]
    if name == "beta-poisson":
        return [(f"b0={a}-b1={b}", MixtureSpec("dirichlet-bernoulli", (a, b)).validate())
                for a, b in BETA_GRID]
    if name == "beta-ising":
        return [(f"b0={a}-b1={b}", MixtureSpec("beta-ising", (a, b)).validate())
                for a, b in BETA_GRID]
    raise ValidationError(f"unknown sweep {name!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    model = load_spec(args.spec)
    try:
        x = as_fraction(args.x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse x={args.x!r} as a rational") from None
    if not 0 <= x <= 1:
        raise ValidationError(f"x={x} outside [0, 1]")
    v = eval_cdf(model, x, args.tol)
    print(format_eval(v, args.tol))
    return 0


def cmd_curve(args) -> int:
    if args.sweep:
        curves = sweep_models(args.sweep)
    elif args.spec:
        curves = [(Path(s).stem, load_spec(s)) for s in args.spec]
    else:
        raise ValidationError("give spec files or --sweep")
    q = {m.q for _, m in curves}
    if len(q) != 1:
        raise ValidationError("all curves must share the base")
    xs = curve_grid(q.pop(), args.points)
    results = [(label, evaluate_points(m, xs, args.tol)) for label, m in curves]
    out = Path(args.out)
    fmt = args.format or ("svg" if out.suffix == ".svg" else "csv")
    if fmt == "svg":
        render_curves([(l, [float(x) for x in xs], [v.value for v in vals])
                       for l, vals in results], out, args.title or "")
        print(out)
    elif len(results) == 1:
        write_csv(out, xs, results[0][1])
        print(out)
    else:
        for label, vals in results:
            path = out.with_name(f"{out.stem}_{label}{out.suffix or '.csv'}")
            write_csv(path, xs, vals)
            print(path)
    return 0


def cmd_classify(args) -> int:
    c = classify(load_spec(args.spec))
    print(json.dumps(c.as_dict(), indent=2))
    return 0


def cmd_verify(args) -> int:
    model = load_spec(args.spec, validate=False)
    suites = ("stationarity", "ks", "singularity") if args.suite == "all" else (args.suite,)
    reports = []
    validated = None
    try:
        validated = model.validate()
        reports.append(verify.VerificationReport("validate", 0.0, 0.0, True, ()))
    except ValidationError as exc:
        resid = float(getattr(exc, "max_residual", float("nan")))
        witness = getattr(exc, "witness", None)
        reports.append(verify.VerificationReport(
            "validate", resid, 1e-10, False, (str(exc) if witness is None else f"context {witness}",),
            {"error": type(exc).__name__, "message": str(exc)}))
    for s in suites:
        if s == "stationarity":
            reports.append(verify.check_functional_equation(model, args.order, args.tol))
        elif s == "ks":
            if validated is None:
                continue
            reports.append(verify.ks_distance(validated, args.samples, args.seed))
        elif s == "singularity":
            if validated is None:
                continue
            reports.append(verify.singularity_check(validated, seed=args.seed))
    ok = all(r.passed for r in reports)
    print(json.dumps({"passed": ok, "reports": [r.as_dict() for r in reports]}, indent=2))
    return 0 if ok else EXIT_FAIL


def cmd_approx(args) -> int:
    model = load_spec(args.spec)
    ms = [int(v) for v in args.m.split(",")]
    out = []
    for m in ms:
        r = approx.sup_gap(model, m, max(args.grid_order, m))
        out.append({"m": r.m, "sup_gap": r.sup_gap, "exact_match_depth": r.exact_match_depth,
                    "validity_bound": r.validity_bound, "grid_order": r.grid_order,
                    "worst_x": str(r.worst_x)})
    print(json.dumps(out, indent=2))
    return 0


def cmd_figure(args) -> int:
    names = figures.PANELS if args.panel == "all" else (args.panel,)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    ok = True
    for name in names:
        p = figures.panel(name)
        xs = curve_grid(2, args.points)
        rows, curves = [], []
        for label, model in p.curves:
            vals = evaluate_points(model, xs, DEFAULT_TOL)
            curves.append((label, [float(x) for x in xs], [v.value for v in vals]))
            rows.extend((label, x, v) for x, v in zip(xs, vals))
        svg = render_curves(curves, outdir / f"panel_{name}.svg", p.title)
        with open(outdir / f"panel_{name}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["curve", "x", "F", "bound"])
            for label, x, v in rows:
                w.writerow([label, fmt17(x), fmt17(v.value), fmt17(v.truncation_bound)])
        print(svg)
        for chk in figures.check_orderings(p):
            ok &= chk.passed
            print(f"{'PASS' if chk.passed else 'FAIL'} panel {name} x={chk.x}: "
                  f"{chk.upper} > {chk.lower} (margin {chk.margin:.3g})")
    return 0 if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="singcdf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate F at one point")
    p.add_argument("spec")
    p.add_argument("--x", required=True, help='rational "p/q" or decimal string')
    p.add_argument("--tol", type=float, default=CLI_TOL)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("curve", help="evaluate F on a base-q grid, write CSV or SVG")
    p.add_argument("spec", nargs="*")
    p.add_argument("--sweep", choices=SWEEPS)
    p.add_argument("--points", type=int, default=257)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "svg"))
    p.add_argument("--title")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("classify", help="pure-type verdict and atoms as JSON")
    p.add_argument("spec")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="run verification suites, exit 1 on failure")
    p.add_argument("spec")
    p.add_argument("--suite", choices=("stationarity", "ks", "singularity", "all"), default="all")
    p.add_argument("--order", type=int, default=6)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("approx", help="Markov-approximation sup-gap study")
    p.add_argument("spec")
    p.add_argument("--m", default="1,2,4,8")
    p.add_argument("--grid-order", type=int, default=10)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("figure", help="reproduce a figure panel as SVG + CSV")
    p.add_argument("panel", choices=figures.PANELS + ("all",))
    p.add_argument("--out", default="figures")
    p.add_argument("--points", type=int, default=257)
    p.set_defaults(func=cmd_figure)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"invalid spec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        print(f"invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
