import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valuebisect import (
    BracketError,
    DiagnosticUnavailable,
    Interval,
    IterationRecord,
    OracleConfig,
    OracleIndeterminate,
    OracleVerdict,
    SolverConfig,
    ValueBracket,
    Verdict,
    convergence_diagnostic,
    error_bound,
    evaluate,
    iterations_needed,
    maximize,
    minimize,
    negate,
    parse,
    tangency_stop,
    witness_slack,
)
from valuebisect.extremum import MAX_ITER_MESSAGE

from conftest import PIECEWISE_TEXT
from strategies import cubic_coeffs, polynomial

UNIT = Interval(0.0, 1.0)


def synthetic_history(half_widths):
    out = []
    for n, w in enumerate(half_widths, start=1):
        out.append(IterationRecord(n, 0.0, OracleVerdict(Verdict.UNREACHABLE), ValueBracket(0.0, 2.0 * w)))
    return out


def dense_max(f, lo, hi, n=100001):
    return max(v for v in (evaluate(f, x) for x in np.linspace(lo, hi, n)) if math.isfinite(v))


# -- error bound and iteration count ---------------------------------------------


@pytest.mark.parametrize("width, n, expected", [(1.25, 0, 0.625), (2.0, 3, 0.125), (1.0, 22, 2.0**-23)])
def test_error_bound(width, n, expected):
    assert error_bound(ValueBracket(0.0, width), n) == expected


def test_error_bound_rejects_negative_n():
    with pytest.raises(ValueError):
        error_bound(ValueBracket(0.0, 1.0), -1)


@pytest.mark.parametrize(
    "width, eps, expected",
    [(1.0, 1e-7, 23), (1.0, 0.25, 1), (1.25, 2.0, 0), (1.25, 1e-6, 20), (0.0, 1e-9, 0), (1.0, 0.5, 0), (1.0, 0.4999, 1)],
)
def test_iterations_needed(width, eps, expected):
    assert iterations_needed(ValueBracket(0.0, width), eps) == expected


@given(st.floats(1e-6, 1e6), st.floats(1e-12, 1e3))
def test_iterations_needed_is_smallest(width, eps):
    b = ValueBracket(0.0, width)
    n = iterations_needed(b, eps)
    assert error_bound(b, n) <= eps
    assert n == 0 or error_bound(b, n - 1) > eps


# -- convergence diagnostic -----------------------------------------------------


def test_diagnostic_on_halving_widths():
    order, ratio = convergence_diagnostic(synthetic_history([1.0, 0.5, 0.25, 0.125]))
    assert order == pytest.approx(1.0, abs=1e-12) and ratio == 0.5


def test_diagnostic_on_tenfold_widths():
    order, ratio = convergence_diagnostic(synthetic_history([1.0, 0.1, 0.01]))
    assert order == pytest.approx(1.0, abs=1e-9) and ratio == pytest.approx(0.1, rel=1e-12)


def test_diagnostic_needs_three_records():
    with pytest.raises(DiagnosticUnavailable):
        convergence_diagnostic(synthetic_history([1.0, 0.5]))


def test_diagnostic_rejects_zero_width():
    with pytest.raises(DiagnosticUnavailable):
        convergence_diagnostic(synthetic_history([1.0, 0.5, 0.0]))


def test_diagnostic_on_a_run(kernel, parabola):
    rep = maximize(parabola, UNIT, ValueBracket(0.75, 2.0), SolverConfig(tol=1e-6))
    order, ratio = convergence_diagnostic(rep.history)
    assert abs(ratio - 0.5) <= 1e-12 and abs(order - 1.0) <= 1e-6


# -- tangency -------------------------------------------------------------------


def test_tangency_at_vertex(parabola):
    assert tangency_stop(parabola, 1.0, 0.5, UNIT)


def test_tangency_rejects_crossing(parabola):
    assert not tangency_stop(parabola, 0.75, 0.0, UNIT)
    assert not tangency_stop(parabola, 0.75, 0.01, UNIT)


def test_tangency_rejects_boundary():
    assert not tangency_stop(parse("x"), 1.0, 1.0, UNIT)


def test_tangency_rejects_shallow_slope():
    assert not tangency_stop(parse("x^3+x*1e-3"), 0.0, 0.0, Interval(-1.0, 1.0))


def test_tangency_rejects_a_minimum():
    # zero central difference, but both neighbours clear c + deriv_tol
    assert not tangency_stop(parse("1e12*x^2"), 0.0, 0.0, Interval(-1.0, 1.0))


# -- maximize -------------------------------------------------------------------


def test_solver_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(tol=0.0)
    with pytest.raises(ValueError):
        SolverConfig(max_iter=0)


def test_parabola_with_explicit_bracket(kernel, parabola):
    rep = maximize(parabola, UNIT, ValueBracket(0.75, 2.0), SolverConfig(tol=1e-6))
    assert abs(rep.estimate - 1.0) <= 1e-6
    assert rep.converged and rep.iterations == 20 and rep.message == "converged"
    assert rep.bracket0 == ValueBracket(0.75, 2.0)


def test_piecewise_auto_bracket(kernel):
    rep = maximize(parse(PIECEWISE_TEXT), Interval(-4.0, 1.0), None, SolverConfig(tol=1e-4))
    assert abs(rep.estimate - 4.0) <= 1e-4 and rep.converged


def test_piecewise_from_endpoints(kernel):
    f = parse(PIECEWISE_TEXT)
    rep = maximize(f, Interval(-4.0, 1.0), ValueBracket(1.0, 5.0), SolverConfig(tol=1e-9))
    assert abs(rep.estimate - 4.0) <= 1e-9
    assert all(evaluate(f, r.verdict.witness) >= r.c for r in rep.history if r.verdict.reachable)


def test_sin_with_bracket(kernel):
    rep = maximize(parse("sin(x)"), Interval(0.0, math.pi), ValueBracket(0.0, 2.0), SolverConfig(tol=1e-8))
    assert abs(rep.estimate - 1.0) <= 1e-8


def test_tight_start_takes_no_oracle_calls(kernel, parabola):
    rep = maximize(parabola, UNIT)
    assert rep.iterations == 0 and rep.history == () and rep.converged
    assert rep.witness == 0.5


def test_max_iter_exhaustion_returns_report(kernel, parabola):
    rep = maximize(parabola, UNIT, ValueBracket(0.75, 2.0), SolverConfig(tol=1e-12, max_iter=3))
    assert not rep.converged and rep.iterations == 3
    assert rep.message == MAX_ITER_MESSAGE


def test_bracket_not_attained(kernel, parabola):
    with pytest.raises(BracketError):
        maximize(parabola, UNIT, ValueBracket(1.5, 2.0))


def test_empty_domain_rejected(parabola):
    with pytest.raises(BracketError, match="b must be bigger than a"):
        maximize(parabola, Interval(1.0, 1.0))


def test_abort_policy_raises_with_level(kernel):
    cfg = SolverConfig(oracle=OracleConfig(kind="certified", max_depth=1, unknown_policy="abort"))
    with pytest.raises(OracleIndeterminate) as info:
        maximize(parse("x-x"), UNIT, ValueBracket(0.0, 1.0), cfg)
    assert info.value.level == 0.5


def test_treat_unreachable_shrinks_upper_end(kernel):
    cfg = SolverConfig(tol=1e-3, oracle=OracleConfig(kind="certified", max_depth=1))
    rep = maximize(parse("x-x"), UNIT, ValueBracket(0.0, 1.0), cfg)
    assert rep.converged and rep.bracket.m == 0.0
    assert all(r.verdict.kind is not Verdict.REACHABLE for r in rep.history)


def test_grid_oracle_run(kernel):
    cfg = SolverConfig(tol=1e-6, oracle=OracleConfig(kind="grid"))
    rep = maximize(parse("sin(x)"), Interval(0.0, math.pi), ValueBracket(0.0, 2.0), cfg)
    assert abs(rep.estimate - 1.0) <= 1e-6


def test_tangency_stop_on_parabola(kernel, parabola):
    cfg = SolverConfig(tol=1e-12, tangency_check=True)
    rep = maximize(parabola, UNIT, ValueBracket(0.75, 2.0), cfg)
    assert rep.exact_max_detected and rep.converged
    assert abs(rep.estimate - 1.0) <= cfg.deriv_tol
    assert rep.error_bound == 0.0 and rep.bracket.m == rep.bracket.u
    assert rep.iterations < iterations_needed(rep.bracket0, 1e-12)


def test_tangency_never_fires_on_a_corner(kernel):
    cfg = SolverConfig(tol=1e-9, tangency_check=True)
    rep = maximize(parse("abs(x-0.3)"), UNIT, ValueBracket(0.3, 1.0), cfg)
    assert not rep.exact_max_detected and rep.converged
    assert abs(rep.estimate - 0.7) <= 1e-9


# -- minimize -------------------------------------------------------------------


def test_minimize_square(kernel):
    rep = minimize(parse("(x-0.5)^2"), UNIT, None, SolverConfig(tol=1e-6))
    assert abs(rep.estimate) <= 1e-6 and rep.sense == "min"
    assert rep.bracket.m <= rep.estimate <= rep.bracket.u


def test_minimize_exp_minus_linear_is_at_the_boundary(kernel):
    f = parse("exp(x)-4*x")
    reference = dense_max(negate(f), 0.0, 1.0)
    assert reference == pytest.approx(4.0 - math.e, abs=1e-15)
    rep = minimize(f, UNIT, None, SolverConfig(tol=1e-6))
    assert abs(rep.estimate - (math.e - 4.0)) <= 1e-6


def test_minimize_bracket_upper_end_must_be_attained(kernel):
    f = parse("(x-0.5)^2")
    rep = minimize(f, UNIT, ValueBracket(-1.0, 0.25), SolverConfig(tol=1e-7))
    assert abs(rep.estimate) <= 1e-7
    with pytest.raises(BracketError):
        minimize(f, UNIT, ValueBracket(-1.0, -0.5))


def test_minimize_history_is_flipped(kernel):
    f = parse("(x-0.5)^2")
    lo = minimize(f, UNIT, ValueBracket(-1.0, 0.25), SolverConfig(tol=1e-3))
    hi = maximize(negate(f), UNIT, ValueBracket(-0.25, 1.0), SolverConfig(tol=1e-3))
    assert [r.c for r in lo.history] == [-r.c for r in hi.history]
    assert all(r.bracket_after.m <= r.bracket_after.u for r in lo.history)


# -- properties -----------------------------------------------------------------


@settings(max_examples=40)
@given(cubic_coeffs, st.sampled_from([1e-3, 1e-6, 1e-9]))
def test_run_invariants(kernel, coeffs, tol):
    f = polynomial(coeffs)
    domain = Interval(-2.0, 2.0)
    rep = maximize(f, domain, None, SolverConfig(tol=tol))
    b0 = rep.bracket0
    m, u = b0
    scale = max(abs(m), abs(u))
    for k, rec in enumerate(rep.history):
        assert rec.n == k + 1
        assert rec.c == ValueBracket(m, u).midpoint
        after = rec.bracket_after
        # exactly one endpoint moves, to the previous midpoint
        assert (after.m == rec.c and after.u == u) or (after.u == rec.c and after.m == m)
        assert after.m >= m and after.u <= u
        # midpoints round at the scale of the endpoints, not of the width
        assert abs((after.u - after.m) - math.ldexp(b0.width, -rec.n)) <= 2 * math.ulp(scale)
        if rec.verdict.reachable:
            assert evaluate(f, rec.verdict.witness) >= rec.c - witness_slack(rec.c)
        m, u = after
    assert rep.estimate == rep.bracket.midpoint
    assert rep.error_bound == 0.5 * (rep.bracket.u - rep.bracket.m)
    assert rep.converged == (rep.error_bound <= tol)
    assert rep.bracket.m <= rep.estimate <= rep.bracket.u
    # a certified oracle answered every query, so the run stops on schedule
    if all(r.verdict.certified for r in rep.history):
        assert rep.iterations == iterations_needed(b0, tol)
    dense = dense_max(f, -2.0, 2.0, 4001)
    assert dense <= rep.bracket.u
    assert rep.estimate - rep.error_bound - witness_slack(rep.estimate) <= max(dense, rep.bracket.m)


@settings(max_examples=60)
@given(cubic_coeffs)
def test_negation_duality_is_bit_exact(kernel, coeffs):
    f = polynomial(coeffs)
    domain = Interval(-2.0, 2.0)
    cfg = SolverConfig(tol=1e-8)
    assert minimize(f, domain, None, cfg).estimate == -maximize(negate(f), domain, None, cfg).estimate
