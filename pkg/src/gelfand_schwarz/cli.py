"""``gelfand-schwarz`` command line.

Exit codes: 0 success, 1 tolerance violation, 2 input/validation error,
3 algebraic failure (a polynomial not expressible in the generators).
"""

import argparse
import json
import sys
import time
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .catalog import BUILTIN_NAMES, builtin_pair
from .exceptions import (ExpressibilityError, GelfandError, SpecialAssumptionError,
                         SupportWarning, TruncationError)
from .invariants import check_special_assumption
from .io import atomic_write, coefficient_rows, dumps_json, load_pair, rows_to_csv, write_manifest
from .spherical import (build_coefficient_table, build_h_series, eval_h_series, eval_spherical_direct,
                        verify_eigenfunction, verify_symmetry)
from .transform import BoxQuadrature, bump, verify_schwarz

EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_ALGEBRA = 0, 1, 2, 3
SUITES = ("eigen", "symmetry", "special", "schwarz")
DEMO_XI = {"trivial": (1.2, -0.9), "z2-r2": (1.2, 0.9), "so2": (1.2, 0.9), "so3": (1.0, 0.8, 0.6)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def build_parser():
    p = _Parser(prog="gelfand-schwarz", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--max-degree", "-M", type=int, default=None, help="series depth M")
    common.add_argument("--quad-radius", type=float, default=None, help="box half-width R")
    common.add_argument("--quad-nodes", type=int, default=None, help="Gauss-Legendre nodes per axis")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", type=Path, default=None, help="output directory (default: stdout only)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    s = sub.add_parser("pair-check", parents=[common], help="validate a pair and test the special assumption")
    s.add_argument("--spec", required=True, help="built-in name or JSON spec path")

    s = sub.add_parser("coeffs", parents=[common], help="dump the b/a coefficient tables")
    s.add_argument("--spec", required=True)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--spec", required=True)
    s.add_argument("--suite", choices=SUITES, required=True)
    s.add_argument("--function", choices=("bump",), default="bump", help="test function for the schwarz suite")
    s.add_argument("--support-radius", type=float, default=1.0)
    s.add_argument("--points", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("demo", parents=[common], help="write tutorial tables for a built-in pair")
    s.add_argument("name", choices=BUILTIN_NAMES)
    return p


# ----------------------------------------------------------------------------
# helpers

def _param(args, defaults, key, fallback=None):
    v = getattr(args, key, None)
    if v is not None:
        return v
    return defaults.get(key, fallback)


class _Run:
    """Collects emitted artifacts and writes the manifest."""

    def __init__(self, args, command):
        self.args, self.command, self.files = args, command, []
        self.t0 = time.perf_counter()

    def emit(self, stem, payload_json, rows=None, columns=None):
        fmt = self.args.format
        text = rows_to_csv(rows, columns) if fmt == "csv" and rows is not None else dumps_json(payload_json)
        ext = "csv" if fmt == "csv" and rows is not None else "json"
        if self.args.out is None:
            sys.stdout.write(text)
            return
        self.files.append(atomic_write(self.args.out / f"{stem}.{ext}", text))

    def emit_csv(self, stem, rows, columns):
        text = rows_to_csv(rows, columns)
        if self.args.out is None:
            sys.stdout.write(text)
            return
        self.files.append(atomic_write(self.args.out / f"{stem}.csv", text))

    def finish(self, inputs, params):
        if self.args.out is not None:
            write_manifest(self.args.out, self.command, inputs, params, self.files,
                           time.perf_counter() - self.t0, __version__)


def _summary(pair):
    return {"name": pair.name or "custom", "n": pair.n, "ell": pair.ell, "degrees": list(pair.degrees),
            "group": pair.group.kind, "order": pair.group.order if pair.group.is_finite else None}


# ----------------------------------------------------------------------------
# commands

def cmd_pair_check(args):
    pair, defaults = load_pair(args.spec)
    M = _param(args, defaults, "max_degree")
    verdict = check_special_assumption(pair, M)
    info = _summary(pair)
    print(f"pair {info['name']}: n={pair.n} ell={pair.ell} degrees={list(pair.degrees)} group={pair.group.kind}")
    print(f"special assumption: {verdict.describe()}")
    run = _Run(args, "pair-check")
    if args.out is not None:
        report = {**info, "M": M, "special_assumption": {
            "holds": verdict.holds,
            "counterexample": None if verdict.holds else {
                "J": list(verdict.counterexample[0]), "J_prime": list(verdict.counterexample[1]),
                "value": str(verdict.counterexample[2])}}}
        run.files.append(atomic_write(args.out / "pair_check.json", dumps_json(report)))
    run.finish({"spec": args.spec}, {"max_degree": M})
    return EXIT_OK


def cmd_coeffs(args):
    pair, defaults = load_pair(args.spec)
    M = _param(args, defaults, "max_degree")
    table = build_coefficient_table(pair, M)
    rows = coefficient_rows(table)
    run = _Run(args, "coeffs")
    payload = {"pair": pair.name or "custom", "M": M, "degrees": list(pair.degrees),
               "rows": [{k: r[k] for k in ("kind", "m", "index", "q")} for r in rows]}
    run.emit("coeffs", payload, rows, ["kind", "m", "index", "q"])
    run.finish({"spec": args.spec}, {"max_degree": M})
    if args.out is not None:
        print(f"wrote {len(rows)} coefficient rows to {args.out}")
    return EXIT_OK


def _suite_eigen(pair, M, tol):
    table = build_coefficient_table(pair, M)
    residuals = [verify_eigenfunction(table, None, j) for j in range(1, pair.ell + 1)]
    rows = [{"generator": j, "degree": d, "residual": str(r)}
            for j, (d, r) in enumerate(zip(pair.degrees, residuals), 1)]
    worst = rows[max(range(len(rows)), key=lambda k: abs(residuals[k]))]
    ok = all(abs(r) <= tol for r in residuals)
    return ok, {"suite": "eigen", "M": M, "rows": rows, "worst": worst}, rows, ["generator", "degree", "residual"]


def _suite_symmetry(pair, tol, seed, count=100):
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(count):
        xi, x = rng.uniform(-2, 2, size=(2, pair.n))
        rows.append({"xi": xi.tolist(), "x": x.tolist(), "defect": float(verify_symmetry(pair, xi, x))})
    limit = 0.0 if pair.group.is_finite else tol
    worst = max(rows, key=lambda r: r["defect"])
    ok = worst["defect"] <= limit
    return ok, {"suite": "symmetry", "tol": limit, "max_defect": worst["defect"], "worst": worst,
                "rows": rows}, rows, ["xi", "x", "defect"]


def _suite_special(pair, M):
    v = check_special_assumption(pair, M)
    payload = {"suite": "special", "M": M, "holds": v.holds, "verdict": v.describe()}
    if not v.holds:
        payload["counterexample"] = {"J": list(v.counterexample[0]), "J_prime": list(v.counterexample[1]),
                                     "value": str(v.counterexample[2])}
    print(f"special assumption: {v.describe()}")
    return True, payload, [payload], ["M", "holds", "verdict"]


def _ball_points(n, count, radius, seed):
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1)[:, None]
    return d * radius * rng.uniform(size=(count, 1)) ** (1.0 / n)


def _suite_schwarz(pair, M, R, nodes, tol, args):
    quad = BoxQuadrature(R, nodes, pair.n)
    fhat = bump(pair.n, args.support_radius, pair.group)
    table = build_coefficient_table(pair, M)
    X = _ball_points(pair.n, args.points, 3.0, args.seed)
    rep = verify_schwarz(pair, table, fhat, quad, X)
    payload = rep.to_json_dict()
    worst = max(rep.points, key=lambda r: r["err"]) if rep.points else None
    payload["worst"] = worst
    ok = rep.max_abs_error <= tol
    rows = [{"x": r["x"], "f_re": r["f"][0], "f_im": r["f"][1], "h_re": r["h_rho"][0],
             "h_im": r["h_rho"][1], "err": r["err"]} for r in rep.points]
    return ok, payload, rows, ["x", "f_re", "f_im", "h_re", "h_im", "err"]


def cmd_verify(args):
    pair, defaults = load_pair(args.spec)
    M = _param(args, defaults, "max_degree")
    R = _param(args, defaults, "quad_radius")
    nodes = _param(args, defaults, "quad_nodes")
    suite = args.suite
    if suite == "eigen":
        ok, payload, rows, cols = _suite_eigen(pair, M, 0)
        tol = 0
    elif suite == "symmetry":
        tol = args.tol if args.tol is not None else 1e-10
        ok, payload, rows, cols = _suite_symmetry(pair, tol, args.seed)
    elif suite == "special":
        tol = None
        ok, payload, rows, cols = _suite_special(pair, M)
    else:
        tol = _param(args, defaults, "tol")
        ok, payload, rows, cols = _suite_schwarz(pair, M, R, nodes, tol, args)
    payload["passed"] = ok
    run = _Run(args, f"verify --suite {suite}")
    run.emit(f"verify_{suite}", payload, rows, cols)
    run.finish({"spec": args.spec}, {"suite": suite, "max_degree": M, "quad_radius": R,
                                     "quad_nodes": nodes, "tol": tol, "seed": args.seed})
    status = "PASS" if ok else "FAIL"
    print(f"{suite}: {status}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_TOL


def cmd_demo(args):
    pair = builtin_pair(args.name)
    M = args.max_degree if args.max_degree is not None else 30
    table = build_coefficient_table(pair, M)
    xi = DEMO_XI[args.name]
    h = build_h_series(table, xi)
    run = _Run(args, f"demo {args.name}")
    terms = [{"J": list(J), "re": complex(c).real, "im": complex(c).imag} for J, c in h.terms.items()]
    run.emit_csv("h_terms", terms, ["J", "re", "im"])
    u = np.ones(pair.n) / np.sqrt(pair.n)
    grid = []
    for s in np.linspace(-2.0, 2.0, 41):
        x = s * u
        phi = eval_spherical_direct(pair, xi, x)
        hv = eval_h_series(h, pair.rho(list(x)))
        grid.append({"s": float(s), "x": x.tolist(), "phi_re": phi.real, "phi_im": phi.imag,
                     "h_re": hv.real, "h_im": hv.imag, "abs_diff": abs(phi - hv)})
    run.emit_csv("grid", grid, ["s", "x", "phi_re", "phi_im", "h_re", "h_im", "abs_diff"])
    run.finish({"demo": args.name}, {"max_degree": M, "xi": list(xi)})
    worst = max(r["abs_diff"] for r in grid)
    print(f"demo {args.name}: M={M} xi={list(xi)} max |phi - h o rho| = {worst:.3e}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"pair-check": cmd_pair_check, "coeffs": cmd_coeffs, "verify": cmd_verify, "demo": cmd_demo}


def _diagnostic(exc, code):
    info = {"error": type(exc).__name__, "message": str(exc), "exit": code}
    for attr in ("degree", "index", "counterexample"):
        v = getattr(exc, attr, None)
        if v is not None:
            info[attr] = [list(x) if isinstance(x, tuple) else str(x) for x in v] if attr == "counterexample" \
                else (list(v) if isinstance(v, tuple) else v)
    print(json.dumps(info), file=sys.stderr)
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    warnings.simplefilter("default", SupportWarning)
    try:
        return COMMANDS[args.command](args)
    except ExpressibilityError as exc:
        return _diagnostic(exc, EXIT_ALGEBRA)
    except SpecialAssumptionError as exc:
        return _diagnostic(exc, EXIT_ALGEBRA)
    except TruncationError as exc:
        return _diagnostic(exc, EXIT_TOL)
    except (GelfandError, ValueError, KeyError, OSError) as exc:
        return _diagnostic(exc, EXIT_INPUT)


if __name__ == "__main__":
    sys.exit(main())
