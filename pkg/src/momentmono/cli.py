"""``momentmono`` command-line interface.

Exit codes: 0 success, 2 input error, 3 non-identifiable sample,
4 solver failure, 5 verification violation.
"""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import sys
import time
from dataclasses import asdict

import numpy as np

from .distributions import (
    Family,
    GammaParams,
    LogNormalParams,
    OrderPair,
    WeibullParams,
    log_moment,
    pdf,
    root_moment,
    sample,
)
from .errors import BracketError, ConvergenceError, DomainError, NonIdentifiableError
from .estimation import BisectionConfig, EstimateResult, fit_from_data
from .verification import DEFAULT_ORDER_PAIRS, NONNEGATIVITY_TOL, all_pairs, run_all

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NON_IDENTIFIABLE = 3
EXIT_SOLVER = 4
EXIT_VIOLATION = 5

_PARAM_FLAGS = {
    Family.WEIBULL: (("k", "k"), ("lambda", "lam")),
    Family.GAMMA: (("alpha", "alpha"), ("beta", "beta")),
    Family.LOGNORMAL: (("mu", "mu"), ("sigma", "sigma")),
}
_CLASSES = {Family.WEIBULL: WeibullParams, Family.GAMMA: GammaParams, Family.LOGNORMAL: LogNormalParams}


class InputError(Exception):
    pass


def _finite_or_none(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


def _sanitize(obj):
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        obj = obj.item()
    return _finite_or_none(obj)


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return "" if x is None else str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _params_dict(params) -> dict:
    family = Family(
        {WeibullParams: "weibull", GammaParams: "gamma", LogNormalParams: "lognormal"}[type(params)]
    )
    return {flag: getattr(params, attr) for flag, attr in _PARAM_FLAGS[family]}


def _param_sets(args, family: Family, single: bool):
    values = []
    for flag, attr in _PARAM_FLAGS[family]:
        v = getattr(args, attr)
        if v is None:
            raise InputError(f"--{flag} is required for family {family.value}")
        if single and len(v) != 1:
            raise InputError(f"--{flag} takes a single value for '{args.command}'")
        values.append(v)
    return [_CLASSES[family](*combo) for combo in itertools.product(*values)]


def _open_output(path):
    if path in (None, "-"):
        return sys.stdout, False
    try:
        return open(path, "w", encoding="utf-8", newline="\n"), True
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _emit(args, inputs: dict, results, csv_header, csv_rows, violations=(), start=0.0):
    out, close = _open_output(getattr(args, "output", None))
    try:
        if args.format == "json":
            doc = {
                "command": args.command,
                "inputs": inputs,
                "results": results,
                "violations": list(violations),
                "elapsed_ms": (time.perf_counter() - start) * 1e3,
            }
            json.dump(_sanitize(doc), out, indent=2, allow_nan=False)
            out.write("\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(csv_header)
            for row in csv_rows:
                w.writerow([_fmt(v) for v in row])
    finally:
        if close:
            out.close()


def read_samples(path: str) -> list[float]:
    """Parse a newline-delimited sample file; ``#`` lines and blanks are skipped."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    data = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        try:
            x = float(s)
        except ValueError:
            raise InputError(f"{path}: line {lineno}: cannot parse {s!r} as a number") from None
        if not (math.isfinite(x) and x > 0.0):
            raise InputError(f"{path}: line {lineno}: sample {s!r} is not positive and finite")
        data.append(x)
    if not data:
        raise InputError(f"{path}: no samples")
    return data


def cmd_moments(args, start):
    family = Family(args.family)
    if not 1 <= args.max_order <= 50:
        raise InputError("--max-order must be in 1..50")
    params = _param_sets(args, family, single=True)[0]
    rows = []
    for i in range(1, args.max_order + 1):
        lm = log_moment(params, i)
        overflow = lm > math.log(sys.float_info.max)
        m = None if overflow else math.exp(lm)
        try:
            r = root_moment(params, i)
        except OverflowError:
            r, overflow = None, True
        rows.append({"order": i, "moment": m, "root_moment": r, "overflow": overflow})
    inputs = {"family": family.value, "params": _params_dict(params), "max_order": args.max_order}
    _emit(args, inputs, {"rows": rows}, ["order", "moment", "root_moment", "overflow"],
          [[r["order"], r["moment"], r["root_moment"], r["overflow"]] for r in rows], start=start)
    return EXIT_OK


def _bisection_config(args) -> BisectionConfig:
    lo, hi = BisectionConfig().initial_bracket
    if args.bracket:
        try:
            lo, hi = (float(v) for v in args.bracket.split(","))
        except ValueError:
            raise InputError(f"--bracket must look like 'lo,hi', got {args.bracket!r}") from None
    return BisectionConfig(args.abs_tol, args.residual_tol, args.max_iterations, (lo, hi))


def _result_dict(res: EstimateResult) -> dict:
    lo, hi = res.bracket_used
    return {
        "params": _params_dict(res.params),
        "residual": res.residual,
        "iterations": res.iterations,
        "bracket_used": None if math.isnan(lo) else [lo, hi],
    }


def cmd_fit(args, start):
    family = Family(args.family)
    orders = OrderPair.parse(args.orders)
    cfg = _bisection_config(args)
    if not args.input:
        raise InputError("--input is required")
    data = read_samples(args.input)
    res = fit_from_data(data, family, orders, cfg)
    results = _result_dict(res)
    results["count"] = len(data)
    inputs = {"family": family.value, "orders": [orders.n, orders.m], "input": args.input,
              "bisection": asdict(cfg)}
    names = list(results["params"])
    bracket = results["bracket_used"] or [None, None]
    _emit(args, inputs, results,
          ["family", *names, "residual", "iterations", "bracket_lo", "bracket_hi", "count"],
          [[family.value, *results["params"].values(), res.residual, res.iterations, *bracket,
            len(data)]], start=start)
    return EXIT_OK


def cmd_sample(args, start):
    family = Family(args.family)
    params = _param_sets(args, family, single=True)[0]
    if args.count < 1:
        raise InputError("--count must be at least 1")
    if not 0 <= args.seed < 2**64:
        raise InputError("--seed must be an unsigned 64-bit integer")
    xs = sample(params, args.count, args.seed)
    out, close = _open_output(args.output)
    try:
        out.write("".join(f"{x!r}\n" for x in xs.tolist()))
    finally:
        if close:
            out.close()
    return EXIT_OK


def cmd_verify(args, start):
    if not args.tolerance < 1.0:
        raise InputError("--tolerance must be below 1")
    if args.shape_points < 1:
        raise InputError("--shape-points must be positive")
    pairs = DEFAULT_ORDER_PAIRS
    if args.max_order is not None:
        if args.max_order < 2:
            raise InputError("--max-order must be at least 2")
        pairs = all_pairs(range(1, args.max_order + 1)) + DEFAULT_ORDER_PAIRS[-3:]
    reports = run_all(args.tolerance, args.shape_points, pairs)
    total = sum(r.total_checks for r in reports)
    violations = [
        {"check_name": v.check_name, "family": v.family, "point": dict(v.point),
         "observed": v.observed, "threshold": v.threshold}
        for r in reports for v in r.violations
    ]
    checks = [
        {"check_name": r.check_name, "family": r.family, "total_checks": r.total_checks,
         "violations": len(r.violations), "worst_margin": r.worst_margin, "passed": r.passed,
         "elapsed_ms": r.elapsed * 1e3}
        for r in reports
    ]
    results = {"total_checks": total, "passed": not violations, "checks": checks}
    inputs = {"tolerance": args.tolerance, "shape_points": args.shape_points,
              "order_pairs": [[o.n, o.m] for o in pairs]}
    _emit(args, inputs, results,
          ["check_name", "family", "total_checks", "violations", "worst_margin", "passed"],
          [[c["check_name"], c["family"], c["total_checks"], c["violations"], c["worst_margin"],
            c["passed"]] for c in checks], violations, start=start)
    return EXIT_OK if not violations else EXIT_VIOLATION


def cmd_pdf_data(args, start):
    family = Family(args.family)
    if not args.x_min < args.x_max:
        raise InputError("--x-min must be below --x-max")
    if args.points < 2:
        raise InputError("--points must be at least 2")
    sets = _param_sets(args, family, single=False)
    xs = np.linspace(args.x_min, args.x_max, args.points).tolist()
    labels = [",".join(f"{k}={v:g}" for k, v in _params_dict(p).items()) for p in sets]
    columns = [[pdf(p, x) for x in xs] for p in sets]
    results = {
        "x": xs,
        "series": [{"params": _params_dict(p), "label": lab, "pdf": col}
                   for p, lab, col in zip(sets, labels, columns)],
    }
    inputs = {"family": family.value, "x_min": args.x_min, "x_max": args.x_max,
              "points": args.points}
    _emit(args, inputs, results, ["x", *labels],
          [[x, *(col[j] for col in columns)] for j, x in enumerate(xs)], start=start)
    return EXIT_OK


def _u64(text: str) -> int:
    return int(text, 0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="output path (default: stdout)")

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", choices=[f.value for f in Family], required=True)
    for flag, dest in (("k", "k"), ("lambda", "lam"), ("alpha", "alpha"), ("beta", "beta"),
                       ("mu", "mu"), ("sigma", "sigma")):
        fam.add_argument(f"--{flag}", dest=dest, type=float, nargs="+", metavar="X")

    parser = argparse.ArgumentParser(
        prog="momentmono",
        description="Moments, moment-ratio checks and shape/scale fits for "
        "Weibull, Gamma and Log-normal distributions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", parents=[common, fam], help="raw and root moments")
    p.add_argument("--max-order", type=int, default=6)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("fit", parents=[common], help="fit shape and scale from a sample file")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--input", required=True, help="newline-delimited samples ('-' for stdin)")
    p.add_argument("--orders", default="2,1", help="moment orders n,m with n > m > 0")
    p.add_argument("--abs-tol", type=float, default=BisectionConfig.abs_tol)
    p.add_argument("--residual-tol", type=float, default=BisectionConfig.residual_tol)
    p.add_argument("--max-iterations", type=int, default=BisectionConfig.max_iterations)
    p.add_argument("--bracket", help="initial shape bracket lo,hi")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", parents=[fam], help="write seeded samples, one per line")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=_u64, default=0)
    p.add_argument("--output", help="output path (default: stdout)")
    p.set_defaults(func=cmd_sample, format="json")

    p = sub.add_parser("verify", parents=[common], help="run the monotonicity sweeps")
    p.add_argument("--tolerance", type=float, default=NONNEGATIVITY_TOL,
                   help="require ln R >= -TOL (negative values demand a positive gap)")
    p.add_argument("--shape-points", type=int, default=50)
    p.add_argument("--max-order", type=int, help="integer orders 1..N for the order pairs")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("pdf-data", parents=[common, fam],
                       help="density values on a grid; several values per flag give a product")
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=cmd_pdf_data)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        return args.func(args, start)
    except (InputError, DomainError) as exc:
        print(f"momentmono: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonIdentifiableError as exc:
        print(f"momentmono: non-identifiable: {exc}", file=sys.stderr)
        return EXIT_NON_IDENTIFIABLE
    except (BracketError, ConvergenceError) as exc:
        print(f"momentmono: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
