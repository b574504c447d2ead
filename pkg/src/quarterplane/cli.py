"""Command-line front end.

    quarterplane solve --eq heat --data step --grid default --out run/
    quarterplane counterexample --eq kdv --n 2 --out witness/
    quarterplane verify --eq heat --data exp-compat --candidate utm --out report.json

Exit codes: 0 success (for ``verify``: every clause passed), 1 a
verification clause or witness certification failed, 2 usage error,
3 numerical failure (quadrature did not converge).

The default tolerance comes from ``--tol``, else the ``QUARTERPLANE_TOL``
environment variable, else 1e-10.  ``--config FILE`` reads a JSON object
whose keys are the long option names (dashes or underscores); explicit
command-line flags win.
"""

import argparse
import csv
import json
import math
import os
import platform
import sys
from importlib import metadata

import numpy as np

from . import heat, kdv, nonuniq, oracle
from .catalog import BUILTIN_DATA, builtin_data
from .contour import DEFAULT_TOL, DecayError, QuadratureError
from .expr import ExpressionError, from_expressions, parse
from .transforms import check_decay_declaration
from .verify import CandidateSolution, VerifyConfig, check_compatibility, run_battery

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
ENV_TOL = "QUARTERPLANE_TOL"
DEFAULT_GRID = "0.05:20:20,0.05:10:20"


class UsageError(Exception):
    pass


def _fmt(v):
    return "%.17g" % v


def _versions():
    out = {"python": platform.python_version()}
    for pkg in ("quarterplane", "numpy", "scipy", "mpmath"):
        try:
            out[pkg] = metadata.version(pkg)
        except metadata.PackageNotFoundError:
            out[pkg] = "unknown"
    return out


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) if isinstance(v, float) else v for v in r])


# ---------------------------------------------------------------------------
# argument helpers


def _resolve_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get(ENV_TOL)
    if env:
        try:
            return float(env)
        except ValueError:
            raise UsageError(f"{ENV_TOL}={env!r} is not a number") from None
    return DEFAULT_TOL


def _data_from_args(args):
    exprs = (args.u0, args.g0, args.f)
    if args.data and any(e is not None for e in exprs):
        raise UsageError("give either --data or --u0/--g0/--f, not both")
    if args.data:
        if args.data not in BUILTIN_DATA:
            raise UsageError(f"unknown datum {args.data!r}; built-ins: "
                             f"{', '.join(sorted(BUILTIN_DATA))}")
        return builtin_data(args.data)
    u0, g0, f = (e if e is not None else "0" for e in exprs)
    try:
        return from_expressions(u0, g0, f, decay_rate=args.decay_rate,
                                decay_constant=args.decay_constant)
    except ExpressionError as exc:
        raise UsageError(f"bad data expression: {exc}") from None


def _parse_grid(spec):
    """'X0:X1:NX,T0:T1:NT' (log-spaced) or 'default'."""
    spec = DEFAULT_GRID if spec == "default" else spec
    try:
        xs, ts = (p.split(":") for p in spec.split(","))
        x0, x1, nx = float(xs[0]), float(xs[1]), int(xs[2])
        t0, t1, nt = float(ts[0]), float(ts[1]), int(ts[2])
    except (ValueError, IndexError):
        raise UsageError(f"bad grid {spec!r}; expected X0:X1:NX,T0:T1:NT") from None
    if min(x0, x1, t0, t1) <= 0 or nx < 1 or nt < 1:
        raise UsageError("grid bounds must be positive and counts >= 1")
    return np.geomspace(x0, x1, nx), np.geomspace(t0, t1, nt)


def _parse_points(spec):
    pts = []
    for item in spec.split(";"):
        try:
            x, t = (float(v) for v in item.split(","))
        except ValueError:
            raise UsageError(f"bad point {item!r}; expected x,t") from None
        pts.append((x, t))
    return pts


def _exact_solution(name, equation):
    """Known exact solution for a built-in datum, else None."""
    if name == "zero":
        return lambda x, t: 0.0
    if name == "step":
        return ((lambda x, t: float(oracle.erfc_solution(x, t))) if equation == "heat"
                else oracle.airy_kdv_v)
    if name == "exp-compat":
        return lambda x, t: math.exp(t - x)
    return None


def _solver(equation, args):
    if equation == "heat":
        return lambda data, x, t, tol: heat.solve_heat(data, x, t, tol, angle=args.angle,
                                                       full_output=True)
    return lambda data, x, t, tol: kdv.solve_kdv(data, x, t, tol, contour=args.contour,
                                                 full_output=True)


def _data_record(data):
    return {"name": data.name, "expressions": dict(data.meta),
            "decay_rate": data.decay_rate, "decay_constant": data.decay_constant}


def _contour_record(args):
    if args.eq == "heat":
        return {"gamma_ray_angle": args.angle}
    return {"mode": args.contour}


def _compat_record(data, equation):
    flags = check_compatibility(data, equation)
    rec = [{"name": f.name, "passed": f.passed, "residual": f.residual} for f in flags]
    warn = None
    if not all(f.passed for f in flags):
        failed = ", ".join(f.name for f in flags if not f.passed)
        warn = f"data violate the corner compatibility condition(s): {failed}"
    return rec, warn


# ---------------------------------------------------------------------------
# commands


def cmd_solve(args):
    data = _data_from_args(args)
    tol = _resolve_tol(args)
    if args.points:
        pts = _parse_points(args.points)
    else:
        xs, ts = _parse_grid(args.grid)
        pts = [(float(x), float(t)) for t in ts for x in xs]
    solve = _solver(args.eq, args)
    exact = _exact_solution(data.name, args.eq) if args.data else None
    rows = []
    for x, t in pts:
        value, cval = solve(data, x, t, tol)
        err = abs(value - exact(x, t)) if exact else max(tol, abs(cval.imag))
        rows.append((x, t, float(value), float(err)))
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "solution.csv")
    _write_csv(csv_path, ("x", "t", "value", "abs_error"), rows)
    compat, warn = _compat_record(data, args.eq)
    manifest = {
        "command": "solve",
        "equation": args.eq,
        "data": _data_record(data),
        "builtin": args.data,
        "tol": tol,
        "contour": _contour_record(args),
        "points": args.points,
        "grid": None if args.points else (DEFAULT_GRID if args.grid == "default" else args.grid),
        "abs_error": ("|value - exact solution|" if exact
                      else "max(tol, |imaginary part of the contour sum|)"),
        "compatibility": compat,
        "warnings": [w for w in (warn,) if w],
        "decay_declaration_ok": bool(check_decay_declaration(data, tol)),
        "outputs": ["solution.csv"],
        "versions": _versions(),
    }
    _write_json(os.path.join(args.out, "manifest.json"), manifest)
    if warn and not args.quiet:
        print(f"warning: {warn}", file=sys.stderr)
    if not args.quiet:
        print(f"wrote {len(rows)} points to {csv_path}")
    return EXIT_OK


def cmd_counterexample(args):
    if args.n < 1:
        raise UsageError("--n must be >= 1 (n = 0 is the step solution, not a witness)")
    if args.n > nonuniq.CAPS[args.eq]:
        raise UsageError(f"--n exceeds the cap {nonuniq.CAPS[args.eq]} for {args.eq}")
    os.makedirs(args.out, exist_ok=True)
    try:
        w = nonuniq.generate(args.eq, args.n)
    except nonuniq.CertificationError as exc:
        _write_json(os.path.join(args.out, "certificate.json"), exc.report.to_dict())
        print(f"certification failed: clause {exc.clause!r}", file=sys.stderr)
        return EXIT_FAIL
    xs, ts = _parse_grid(args.grid)
    rows = [(float(x), float(t), float(w(float(x), float(t)))) for t in ts for x in xs]
    _write_csv(os.path.join(args.out, "witness.csv"), ("x", "t", "value"), rows)
    text, info = nonuniq.explain(w)
    _write_json(os.path.join(args.out, "certificate.json"), w.certificate.to_dict())
    _write_json(os.path.join(args.out, "explain.json"), info)
    with open(os.path.join(args.out, "explain.txt"), "w") as fh:
        fh.write(text + "\n")
    _write_json(os.path.join(args.out, "manifest.json"), {
        "command": "counterexample", "equation": args.eq, "n": args.n,
        "grid": DEFAULT_GRID if args.grid == "default" else args.grid,
        "outputs": ["witness.csv", "certificate.json", "explain.json", "explain.txt"],
        "versions": _versions()})
    if not args.quiet:
        print(text)
    return EXIT_OK


def _candidate(args, data, tol):
    spec = args.candidate
    if spec == "utm":
        solve = _solver(args.eq, args)
        return (CandidateSolution(lambda x, t: solve(data, x, t, tol)[0], args.eq, data,
                                  f"utm:{data.name}"),
                VerifyConfig(l2_x_quadrature=16))
    if spec.startswith("witness:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"bad candidate {spec!r}; expected witness:N") from None
        if not 1 <= n <= nonuniq.CAPS[args.eq]:
            raise UsageError(f"witness order must be in 1..{nonuniq.CAPS[args.eq]}")
        fn, vec = nonuniq.witness_evaluator(args.eq, n)
        return (CandidateSolution(fn, args.eq, data, f"witness:{n}", vec),
                nonuniq.ProbeConfig().verify_config())
    expr_text = spec.split(":", 1)[1] if spec.startswith("expr:") else spec
    try:
        e = parse(expr_text, ("x", "t"))
    except ExpressionError as exc:
        raise UsageError(f"bad candidate expression: {exc}") from None
    return CandidateSolution(e, args.eq, data, f"expr:{expr_text}", True), VerifyConfig()


def cmd_verify(args):
    data = _data_from_args(args)
    tol = _resolve_tol(args)
    cand, cfg = _candidate(args, data, tol)
    report = run_battery(cand, cfg)
    out = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out + "\n")
    if not args.quiet:
        for k, v in sorted(report.clauses.items()):
            print(f"{k:14s} {'PASS' if v else 'FAIL'}")
    return EXIT_OK if report.all_pass else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser


def _add_data_args(p):
    g = p.add_argument_group("data")
    g.add_argument("--data", help=f"built-in datum: {', '.join(sorted(BUILTIN_DATA))}")
    g.add_argument("--u0", help="initial datum, expression in x")
    g.add_argument("--g0", help="boundary datum, expression in t")
    g.add_argument("--f", help="forcing, expression in x and t")
    g.add_argument("--decay-rate", type=float, default=1.0,
                   help="declared delta with |u0|, |f| <= C exp(-delta x)")
    g.add_argument("--decay-constant", type=float, default=1.0, help="declared C")


def _add_common(p):
    p.add_argument("--eq", choices=("heat", "kdv"), required=True)
    p.add_argument("--tol", type=float, default=None,
                   help=f"absolute tolerance (default: ${ENV_TOL} or {DEFAULT_TOL:g})")
    p.add_argument("--angle", type=float, default=heat.DEFAULT_ANGLE,
                   help="heat: angle of the rotated gamma rays")
    p.add_argument("--contour", choices=("deformed", "literal"), default="deformed",
                   help="kdv: contour mode")
    p.add_argument("--quiet", action="store_true")
    p.add_argument("--config", help="JSON file with default option values")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="quarterplane",
        description="Quarter-plane heat and linear KdV solutions, non-uniqueness "
                    "witnesses and hypothesis diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="evaluate the solution for given data")
    _add_common(p)
    _add_data_args(p)
    p.add_argument("--grid", default="default",
                   help=f"X0:X1:NX,T0:T1:NT log-spaced, or 'default' ({DEFAULT_GRID})")
    p.add_argument("--points", help="explicit points 'x,t;x,t;...' instead of a grid")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("counterexample", help="generate and certify a witness u_n")
    _add_common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", default="0.01:10:40,0.05:5:30",
                   help="field grid for witness.csv, X0:X1:NX,T0:T1:NT")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", help="run the hypothesis battery on a candidate")
    _add_common(p)
    _add_data_args(p)
    p.add_argument("--candidate", default="utm",
                   help="utm | witness:N | expression in x and t (optionally 'expr:...')")
    p.add_argument("--out", help="report JSON path")
    p.set_defaults(func=cmd_verify)
    return parser


def _apply_config(parser, argv):
    """Parse ``argv`` with defaults taken from --config; explicit flags still win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return parser.parse_args(argv)
    try:
        with open(known.config) as fh:
            cfg = json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {known.config!r}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    defaults = {k.replace("-", "_"): v for k, v in cfg.items()}
    subs = parser._subparsers._group_actions[0].choices.values()
    known_dests = {a.dest for sp in subs for a in sp._actions}
    bad = sorted(k for k in defaults if k not in known_dests or k in ("config", "help"))
    if bad:
        raise UsageError(f"unknown config key(s): {', '.join(bad)}")
    for sp in subs:
        mine = {k: v for k, v in defaults.items() if k in {a.dest for a in sp._actions}}
        sp.set_defaults(**mine)
        for action in sp._actions:
            if action.dest in mine:
                action.required = False
    return parser.parse_args(argv)


def main(argv=None):
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, DecayError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
