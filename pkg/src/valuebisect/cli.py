"""Command-line front end.

Subcommands: ``max``, ``min``, ``root``, ``predict`` and ``bench``.

Exit codes: 0 success, 1 invalid input, 2 iteration limit reached before
the tolerance, 3 oracle indeterminate under ``--on-unknown abort``,
4 expression or domain evaluation error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time

from . import _backend
from .errors import BracketError, EvaluationError, OracleIndeterminate, ParseError, ValueBisectError
from .expr import Var, evaluate, walk
from .extremum import (
    MAX_ITER_MESSAGE,
    ExtremumReport,
    SolverConfig,
    convergence_diagnostic,
    iterations_needed,
    maximize,
    minimize,
)
from .interval import Interval
from .oracle import OracleConfig, ValueBracket, dyadic_bracket, endpoint_bracket
from .parser import parse
from .rootfind import bisect_root, solve_level

EXIT_OK, EXIT_INPUT, EXIT_MAX_ITER, EXIT_INDETERMINATE, EXIT_EVAL = 0, 1, 2, 3, 4

BENCH_CORPUS = (
    ("piecewise(x<=-1: x+5; x<0: 4; else: 3)", -4.0, 1.0),
    ("exp(x)-4*x", 0.0, 1.0),
    ("-(x-0.5)^2+1", 0.0, 1.0),
    ("sin(x)", 0.0, math.pi),
    ("abs(x-0.3)", 0.0, 1.0),
)

# options whose values may legitimately start with "-"
_VALUE_OPTIONS = {
    "-f": "--fn", "--fn": "--fn", "-a": "--a", "--a": "--a", "-b": "--b", "--b": "--b",
    "--m0": "--m0", "--u0": "--u0", "--level": "--level", "--width": "--width",
}


class InputError(ValueBisectError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_INPUT)


def _real(text: str) -> float:
    """A real number, or a constant expression such as ``pi/2``."""
    try:
        return float(text)
    except ValueError:
        pass
    try:
        node = parse(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r} ({exc})") from None
    if any(isinstance(n, Var) for n in walk(node)):
        raise argparse.ArgumentTypeError(f"not a constant: {text!r}")
    return evaluate(node, 0.0)


def _fmt(v) -> str:
    if v is None:
        return "-"
    return f"{v:.10g}"


def _normalise_argv(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            else:
                out.append(f"{_VALUE_OPTIONS[tok]}={nxt}")
        else:
            out.append(tok)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--kernel", choices=["compiled", "python"], help="evaluation kernel (default: best available)")

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument("-f", "--fn", required=True, help="function of x, e.g. 'exp(x)-4*x'")
    solve.add_argument("-a", "--a", type=_real, required=True, help="lower end of the domain")
    solve.add_argument("-b", "--b", type=_real, required=True, help="upper end of the domain")
    solve.add_argument("--tol", type=_real, default=1e-7, help="tolerance (default 1e-7)")
    solve.add_argument("--max-iter", type=int, default=200, help="iteration limit (default 200)")

    p = _Parser(prog="valuebisect", description="Global extrema by bisection on the value axis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, helptext in (("max", "approximate the global maximum"), ("min", "approximate the global minimum")):
        sp = sub.add_parser(name, parents=[common, solve], help=helptext)
        sp.add_argument("--m0", type=_real, help="attained value (lower end of the starting bracket)")
        sp.add_argument("--u0", type=_real, help="upper bound (upper end of the starting bracket)")
        sp.add_argument("--oracle", choices=["grid", "certified", "hybrid"], default="hybrid")
        sp.add_argument("--grid-points", type=int, default=1025)
        sp.add_argument("--max-depth", type=int, default=40)
        sp.add_argument("--on-unknown", choices=["treat-unreachable", "abort"], default="treat-unreachable")
        sp.add_argument("--tangency", action="store_true", help="stop early when the level is tangent to f")
        sp.add_argument("--deriv-tol", type=_real, default=1e-6)
        sp.add_argument("--trace", action="store_true", help="print the per-iteration table")

    sp = sub.add_parser("root", parents=[common, solve], help="bisection root finder")
    sp.add_argument("--level", type=_real, help="solve f(x) = LEVEL instead of f(x) = 0")

    sp = sub.add_parser("predict", parents=[common], help="iterations needed for a tolerance")
    sp.add_argument("--width", type=_real, help="initial bracket width u0 - m0")
    sp.add_argument("--m0", type=_real)
    sp.add_argument("--u0", type=_real)
    sp.add_argument("--tol", type=_real, default=1e-7)

    sp = sub.add_parser("bench", parents=[common], help="run the built-in corpus on every kernel")
    sp.add_argument("--tol", type=_real, default=1e-7)
    sp.add_argument("--max-iter", type=int, default=200)
    sp.add_argument("--repeat", type=int, default=3, help="timing repetitions per kernel")
    return p


def _validate_solve(args):
    if not args.b > args.a:
        raise InputError("b must be bigger than a")
    if not args.tol > 0:
        raise InputError("--tol must be a positive number (the maximum error)")
    if args.max_iter < 1:
        raise InputError("--max-iter must be a positive number of iterations")


def _report_json(cmd, args, rep: ExtremumReport) -> dict:
    return {
        "command": cmd,
        "expression": args.fn,
        "domain": [args.a, args.b],
        "bracket0": [rep.bracket0.m, rep.bracket0.u],
        "bracket": [rep.bracket.m, rep.bracket.u],
        "estimate": rep.estimate,
        "error_bound": rep.error_bound,
        "iterations": rep.iterations,
        "converged": rep.converged,
        "exact_max_detected": rep.exact_max_detected,
        "witness": rep.witness,
        "message": rep.message,
        "kernel": _backend.kernel().NAME,
        "history": [
            {
                "n": r.n,
                "c": r.c,
                "verdict": r.verdict.kind.value,
                "certified": r.verdict.certified,
                "m": r.bracket_after.m,
                "u": r.bracket_after.u,
            }
            for r in rep.history
        ],
    }


def _print_report_text(cmd, rep: ExtremumReport, trace: bool):
    word = "maximum" if cmd == "max" else "minimum"
    print(f"{word} estimate : {_fmt(rep.estimate)}")
    print(f"error bound      : {_fmt(rep.error_bound)}")
    print(f"iterations       : {rep.iterations}")
    print(f"converged        : {'yes' if rep.converged else 'no'}")
    print(f"exact {word[:3]} found  : {'yes' if rep.exact_max_detected else 'no'}")
    print(f"witness x        : {_fmt(rep.witness)}")
    print(f"bracket          : [{_fmt(rep.bracket.m)}, {_fmt(rep.bracket.u)}]")
    if trace:
        print()
        print(f"{'n':>4}  {'c':>18}  {'verdict':<12}  {'m':>18}  {'u':>18}")
        for r in rep.history:
            tag = r.verdict.kind.value + ("" if r.verdict.certified else "?")
            print(f"{r.n:>4}  {_fmt(r.c):>18}  {tag:<12}  {_fmt(r.bracket_after.m):>18}  {_fmt(r.bracket_after.u):>18}")


def _cmd_extremum(args) -> int:
    _validate_solve(args)
    if (args.m0 is None) != (args.u0 is None):
        raise InputError("--m0 and --u0 must be given together")
    bracket = None
    if args.m0 is not None:
        if not args.u0 > args.m0:
            raise InputError("--u0 must be bigger than --m0")
        bracket = ValueBracket(args.m0, args.u0)
    if args.grid_points < 2:
        raise InputError("--grid-points must be at least 2")
    if args.max_depth < 1:
        raise InputError("--max-depth must be positive")
    f = parse(args.fn)
    cfg = SolverConfig(
        tol=args.tol,
        max_iter=args.max_iter,
        oracle=OracleConfig(
            grid_points=args.grid_points,
            max_depth=args.max_depth,
            unknown_policy=args.on_unknown,
            kind=args.oracle,
        ),
        tangency_check=args.tangency,
        deriv_tol=args.deriv_tol,
    )
    solver = maximize if args.command == "max" else minimize
    try:
        rep = solver(f, Interval(args.a, args.b), bracket, cfg)
    except BracketError as exc:
        which = "m0" if args.command == "max" else "u0"
        raise InputError(f"enter a number {which} such that f(x)={which} has a solution in [a,b] ({exc})") from None
    if args.json:
        print(json.dumps(_report_json(args.command, args, rep), indent=2))
    else:
        _print_report_text(args.command, rep, args.trace)
    if not rep.converged:
        print(MAX_ITER_MESSAGE, file=sys.stderr)
        return EXIT_MAX_ITER
    return EXIT_OK


def _cmd_root(args) -> int:
    _validate_solve(args)
    f = parse(args.fn)
    if args.level is None:
        res = bisect_root(f, args.a, args.b, args.tol, args.max_iter)
    else:
        res = solve_level(f, args.level, args.a, args.b, args.tol, args.max_iter)
    if args.json:
        print(json.dumps({"root": res.root, "iterations": res.iterations, "residual": res.residual, "bound": res.bound}))
    else:
        print(f"root       : {_fmt(res.root)}")
        print(f"iterations : {res.iterations}")
        print(f"residual   : {_fmt(res.residual)}")
        print(f"bound      : {_fmt(res.bound)}")
    if res.bound > args.tol and res.residual != 0.0:
        print(MAX_ITER_MESSAGE, file=sys.stderr)
        return EXIT_MAX_ITER
    return EXIT_OK


def _cmd_predict(args) -> int:
    if args.width is not None:
        if args.m0 is not None or args.u0 is not None:
            raise InputError("give either --width or --m0/--u0, not both")
        width = args.width
    elif args.m0 is not None and args.u0 is not None:
        width = args.u0 - args.m0
    else:
        raise InputError("--width (or both --m0 and --u0) is required")
    if not width >= 0:
        raise InputError("--width must not be negative")
    if not args.tol > 0:
        raise InputError("--tol must be a positive number (the maximum error)")
    n = iterations_needed(ValueBracket(0.0, width), args.tol)
    if args.json:
        print(json.dumps({"width": width, "tol": args.tol, "iterations_needed": n}))
    else:
        print(n)
    return EXIT_OK


def _bench_one(expr_text, a, b, cfg):
    f = parse(expr_text)
    domain = Interval(a, b)
    rep = maximize(f, domain, dyadic_bracket(endpoint_bracket(f, domain)), cfg)
    try:
        order, ratio = convergence_diagnostic(rep.history)
    except ValueBisectError:
        order = ratio = math.nan
    return rep, order, ratio


def _cmd_bench(args) -> int:
    if not args.tol > 0:
        raise InputError("--tol must be a positive number (the maximum error)")
    if args.max_iter < 1 or args.repeat < 1:
        raise InputError("--max-iter and --repeat must be positive")
    cfg = SolverConfig(tol=args.tol, max_iter=args.max_iter)
    kernels = [args.kernel] if args.kernel else _backend.available()[::-1]
    rows = []
    for expr_text, a, b in BENCH_CORPUS:
        row = {"expression": expr_text, "domain": [a, b], "seconds": {}}
        estimates = set()
        for name in kernels:
            with _backend.using(name):
                best = math.inf
                for _ in range(args.repeat):
                    t0 = time.perf_counter()
                    rep, order, ratio = _bench_one(expr_text, a, b, cfg)
                    best = min(best, time.perf_counter() - t0)
            row["seconds"][name] = best
            estimates.add(rep.estimate)
        row.update(
            estimate=rep.estimate,
            iterations=rep.iterations,
            final_width=rep.bracket.u - rep.bracket.m,
            ratio_estimate=ratio,
            order_estimate=order,
            converged=rep.converged,
            kernels_agree=len(estimates) == 1,
        )
        rows.append(row)
    if args.json:
        print(json.dumps(rows, indent=2))
        return EXIT_OK
    head = f"{'function':<42} {'estimate':>16} {'iter':>5} {'width':>11} {'ratio':>8} {'order':>8}"
    for name in kernels:
        head += f" {name + ' ms':>12}"
    print(head)
    for row in rows:
        line = (
            f"{row['expression']:<42} {_fmt(row['estimate']):>16} {row['iterations']:>5} "
            f"{row['final_width']:>11.3g} {row['ratio_estimate']:>8.4g} {row['order_estimate']:>8.4g}"
        )
        for name in kernels:
            line += f" {1e3 * row['seconds'][name]:>12.3f}"
        if not row["kernels_agree"]:
            line += "  KERNELS DISAGREE"
        print(line)
    if len(kernels) == 2:
        total = {k: sum(r["seconds"][k] for r in rows) for k in kernels}
        print(f"speedup compiled/python: {total['python'] / total['compiled']:.1f}x")
    return EXIT_OK


_COMMANDS = {"max": _cmd_extremum, "min": _cmd_extremum, "root": _cmd_root, "predict": _cmd_predict, "bench": _cmd_bench}


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv``, run the command and return its exit code."""
    args = build_parser().parse_args(_normalise_argv(list(sys.argv[1:] if argv is None else argv)))
    try:
        with _backend.using(args.kernel or _backend.kernel().NAME):
            return _COMMANDS[args.command](args)
    except (InputError, ParseError, BracketError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OracleIndeterminate as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_INDETERMINATE
    except EvaluationError as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return EXIT_EVAL


def main():
    sys.exit(run())
