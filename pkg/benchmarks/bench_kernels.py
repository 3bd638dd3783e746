"""Compare the compiled and pure-Python kernels on the hot paths.

Times point evaluation, interval evaluation, the grid oracle, branch and
bound, and whole solver runs over the built-in function corpus, checks the
two kernels return identical results, and prints the speedup per row.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import sys
import time

from valuebisect import Interval, SolverConfig, _backend, dyadic_bracket, endpoint_bracket, maximize, parse
from valuebisect.cli import BENCH_CORPUS
from valuebisect.tape import compile_expr


def best_of(fn, repeat):
    best, result = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def workloads():
    for text, a, b in BENCH_CORPUS:
        f = parse(text)
        tape = compile_expr(f)
        domain = Interval(a, b)
        bracket = dyadic_bracket(endpoint_bracket(f, domain))
        xs = [a + (b - a) * i / 999 for i in range(1000)]
        boxes = [(a + (b - a) * i / 200, a + (b - a) * (i + 1) / 200) for i in range(200)]
        top = bracket.u - 1e-6 * bracket.width
        yield text, "point x1000", lambda k, t=tape, xs=xs: [k.eval_point(t, x) for x in xs]
        yield text, "interval x200", lambda k, t=tape, bx=boxes: [k.eval_interval(t, lo, hi) for lo, hi in bx]
        yield text, "grid 1025", lambda k, t=tape: k.grid_max(t, a, b, 1025)
        yield text, "bnb near max", lambda k, t=tape, c=top: k.bnb(t, a, b, c, 40, 1e-12 * (b - a), 10**6)
        yield text, "maximize 1e-9", lambda k, f=f, d=domain, br=bracket: maximize(
            f, d, br, SolverConfig(tol=1e-9)
        ).estimate


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if "compiled" not in _backend.available():
        print("compiled kernel not built; nothing to compare", file=sys.stderr)
        return 1

    print(f"{'function':<40} {'workload':<15} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    totals = {"python": 0.0, "compiled": 0.0}
    mismatches = 0
    for text, name, work in workloads():
        times, results = {}, {}
        for kname in ("python", "compiled"):
            with _backend.using(kname):
                times[kname], results[kname] = best_of(lambda: work(_backend.kernel()), args.repeat)
            totals[kname] += times[kname]
        agree = repr(results["python"]) == repr(results["compiled"])
        mismatches += not agree
        print(
            f"{text[:40]:<40} {name:<15} {1e3 * times['python']:>10.3f} {1e3 * times['compiled']:>12.3f} "
            f"{times['python'] / times['compiled']:>7.1f}x" + ("" if agree else "  MISMATCH")
        )
    print(f"\noverall speedup: {totals['python'] / totals['compiled']:.1f}x, mismatches: {mismatches}")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
