"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly as ``python3 tests/test_acceptance.py``.
"""
import json
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from valuebisect import (
    Interval,
    SolverConfig,
    ValueBracket,
    Verdict,
    bisect_root,
    convergence_diagnostic,
    decide_reachable_certified,
    dyadic_bracket,
    endpoint_bracket,
    evaluate,
    iterations_needed,
    kernel_name,
    maximize,
    minimize,
    negate,
    parse,
    witness_slack,
)
from valuebisect.cli import BENCH_CORPUS

RESULTS: list[str] = []
SEED = 20240611


def report(number: int, ok: bool, detail: str):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def polynomial_expr(coeffs):
    """sum(coeffs[k] * x**k) in Horner form, as text."""
    text = repr(float(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        text = f"({text})*x+({float(c)!r})"
    return parse(text)


def cli(*argv):
    return subprocess.run([sys.executable, "-m", "valuebisect", *argv], capture_output=True, text=True, check=False)


PARABOLA = parse("-(x-0.5)^2+1")
UNIT = Interval(0.0, 1.0)


def parabola_run():
    return maximize(PARABOLA, UNIT, ValueBracket(0.75, 2.0), SolverConfig(tol=1e-6))


def test_criterion_01_piecewise_example():
    xs = np.linspace(-4.0, 1.0, 10**6)
    dense = float(np.max(np.where(xs <= -1.0, xs + 5.0, np.where(xs < 0.0, 4.0, 3.0))))
    f = parse("piecewise(x<=-1: x+5; x<0: 4; else: 3)")
    t0 = time.perf_counter()
    rep = maximize(f, Interval(-4.0, 1.0), None, SolverConfig(tol=1e-4))
    elapsed = time.perf_counter() - t0
    ok = abs(rep.estimate - dense) <= 1e-4 and abs(rep.estimate - 4.0) <= 1e-4 and elapsed < 1.0
    report(1, ok, f"estimate {rep.estimate!r} vs dense grid max {dense!r}, {elapsed * 1e3:.1f} ms ({kernel_name()})")


def test_criterion_02_interior_max_iteration_count():
    rep = parabola_run()
    # smallest n with 2**-(n+1) * 1.25 <= 1e-6, in exact rational arithmetic
    n = 0
    while Fraction(5, 4) / 2 ** (n + 1) > Fraction(1, 10**6):
        n += 1
    predicted = iterations_needed(ValueBracket(0.75, 2.0), 1e-6)
    ok = abs(rep.estimate - 1.0) <= 1e-6 and rep.iterations == predicted == n
    report(2, ok, f"estimate {rep.estimate!r}, iterations {rep.iterations}, predicted {predicted}, exact {n}")


def test_criterion_03_bound_law():
    rep = parabola_run()
    worst_width, worst_error = 0.0, -math.inf
    for rec in rep.history:
        k = rec.n
        m, u = rec.bracket_after
        expected = math.ldexp(1.25, -k)
        worst_width = max(worst_width, abs((u - m) - expected) / math.ulp(expected))
        # rec.c is the k-th probe c_{k-1}; its error bound is 2**-k * 1.25
        worst_error = max(worst_error, abs(1.0 - rec.c) - math.ldexp(1.25, -k))
    ok = worst_width <= 2 and worst_error <= 0
    report(3, ok, f"{len(rep.history)} steps, width off by <= {worst_width:g} ulp, max(|1-c|-bound) = {worst_error:.3g}")


def test_criterion_04_linear_convergence():
    runs = {"parabola (0.75, 2)": parabola_run()}
    for text, a, b in BENCH_CORPUS:
        f, domain = parse(text), Interval(a, b)
        runs[text] = maximize(f, domain, dyadic_bracket(endpoint_bracket(f, domain)), SolverConfig(tol=1e-9))
    runs["min exp(x)-4*x"] = minimize(parse("exp(x)-4*x"), UNIT, ValueBracket(-3.0, 1.0), SolverConfig(tol=1e-9))
    worst_ratio = worst_order = 0.0
    for rep in runs.values():
        assert len(rep.history) >= 10
        order, ratio = convergence_diagnostic(rep.history)
        worst_ratio = max(worst_ratio, abs(ratio - 0.5))
        worst_order = max(worst_order, abs(order - 1.0))
    ok = worst_ratio <= 1e-12 and worst_order <= 1e-6
    report(4, ok, f"{len(runs)} runs, max |ratio-0.5| = {worst_ratio:.3g}, max |order-1| = {worst_order:.3g}")


def test_criterion_05_root_bisection():
    f = parse("exp(x)-4*x")
    reference = bisect_root(f, 0.0, 1.0, 1e-14).root
    res = bisect_root(f, 0.0, 1.0, 1e-7)
    steps_ok = all(abs(reference - c) <= math.ldexp(1.0, -(n + 1)) for n, c in enumerate(res.midpoints))
    ok = abs(res.root - reference) <= 1e-7 and steps_ok and len(res.midpoints) == res.iterations + 1
    report(5, ok, f"root {res.root!r} vs reference {reference!r}, bound held at all {len(res.midpoints)} steps")


def test_criterion_06_minimization_duality():
    rng = np.random.default_rng(SEED)
    domain = Interval(-2.0, 2.0)
    mismatches = 0
    for _ in range(100):
        f = polynomial_expr(rng.uniform(-3.0, 3.0, 4))
        if minimize(f, domain).estimate != -maximize(negate(f), domain).estimate:
            mismatches += 1
    report(6, mismatches == 0, f"100 random cubics, {mismatches} bit mismatches")


def test_criterion_07_certified_oracle_soundness():
    rng = np.random.default_rng(SEED + 7)
    domain = Interval(-2.0, 2.0)
    xs = np.linspace(-2.0, 2.0, 10**5)
    counts = {v: 0 for v in Verdict}
    violations = 0
    for _ in range(100):
        coeffs = rng.uniform(-3.0, 3.0, int(rng.integers(2, 7)))
        f = polynomial_expr(coeffs)
        values = np.polyval(coeffs[::-1], xs)
        top, spread = values.max(), values.max() - values.min()
        c = float(rng.uniform(top - 0.2 * spread, top + 0.2 * spread))
        verdict = decide_reachable_certified(f, domain, c)
        counts[verdict.kind] += 1
        if verdict.kind is Verdict.UNREACHABLE and values.max() > c:
            violations += 1
        if verdict.reachable and evaluate(f, verdict.witness) < c - witness_slack(c):
            violations += 1
    detail = ", ".join(f"{k.value} {n}" for k, n in counts.items())
    report(7, violations == 0 and counts[Verdict.UNREACHABLE] > 0, f"{detail}; {violations} violations")


def test_criterion_08_tangency_stop():
    cfg = SolverConfig(tol=1e-12, tangency_check=True)
    smooth = maximize(PARABOLA, UNIT, ValueBracket(0.75, 2.0), cfg)
    corner = maximize(parse("abs(x-0.3)"), UNIT, ValueBracket(0.3, 1.0), cfg)
    ok = (
        smooth.exact_max_detected
        and abs(smooth.estimate - 1.0) <= cfg.deriv_tol
        and not corner.exact_max_detected
        and corner.converged
        and not any(r.verdict.reachable and r.c > 0.7 for r in corner.history)
    )
    report(8, ok, f"parabola stopped at {smooth.estimate!r} after {smooth.iterations} steps; "
                  f"|x-0.3| converged by tolerance after {corner.iterations} steps")


def test_criterion_09_iteration_predictor():
    a = iterations_needed(ValueBracket(0.0, 1.0), 1e-7)
    b = iterations_needed(ValueBracket(0.0, 1.25), 2.0)
    report(9, a == 23 and b == 0, f"(1, 1e-7) -> {a}, (1.25, 2) -> {b}")


def test_criterion_10_cli_contract():
    ok_run = cli("max", "-f", "piecewise(x<=-1: x+5; x<0: 4; else: 3)", "-a", "-4", "-b", "1", "--tol", "1e-4", "--json")
    bad = cli("max", "-f", "x", "-a", "1", "-b", "0")
    exhausted = cli("max", "-f", "-(x-0.5)^2+1", "-a", "0", "-b", "1", "--m0", "0.75", "--u0", "2",
                    "--max-iter", "3", "--tol", "1e-12")
    broken = cli("max", "-f", "log(x)", "-a", "-2", "-b", "-1")
    doc = json.loads(ok_run.stdout)
    m, u = doc["bracket"]
    codes = (ok_run.returncode, bad.returncode, exhausted.returncode, broken.returncode)
    ok = codes == (0, 1, 2, 4) and doc["estimate"] == (m + u) / 2 and "b must be bigger than a" in bad.stderr
    report(10, ok, f"exit codes {codes}, json estimate == (m+u)/2: {doc['estimate'] == (m + u) / 2}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
