"""Global maximum (and minimum) by bisection on the value axis.

The solver keeps a bracket ``(m, u)`` of function values with m attained
and u an upper bound, so the maximum M satisfies ``m <= M <= u``. Each step
probes the midpoint level c: if the oracle finds f reaching c somewhere on
the domain, c becomes the new m, otherwise the new u. The bracket width
halves every step, so after n steps ``|M - c_n| <= 2**-(n+1) * (u0 - m0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

from .errors import BracketError, DiagnosticUnavailable, OracleIndeterminate
from .expr import Expr, evaluate, negate
from .interval import Interval
from .oracle import (
    OracleConfig,
    OracleKind,
    OracleVerdict,
    UnknownPolicy,
    ValueBracket,
    Verdict,
    decide_reachable,
    dyadic_bracket,
    grid_maximum,
    upper_bound,
)

MAX_ITER_MESSAGE = "Maximum iterations reached without the desired tolerance. Input a bigger N_MAX"


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-7
    max_iter: int = 200
    oracle: OracleConfig = field(default_factory=OracleConfig)
    tangency_check: bool = False
    deriv_tol: float = 1e-6

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tolerance must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")


@dataclass(frozen=True)
class IterationRecord:
    n: int
    c: float
    verdict: OracleVerdict
    bracket_after: ValueBracket


@dataclass(frozen=True)
class ExtremumReport:
    estimate: float
    bracket: ValueBracket
    bracket0: ValueBracket
    iterations: int
    error_bound: float
    converged: bool
    exact_max_detected: bool
    witness: float | None
    history: tuple[IterationRecord, ...]
    sense: str = "max"

    @property
    def message(self) -> str:
        if self.exact_max_detected:
            return "exact extremum detected by the tangency test"
        if self.converged:
            return "converged"
        return MAX_ITER_MESSAGE


class Diagnostic(NamedTuple):
    order_estimate: float
    ratio_estimate: float


def error_bound(bracket0: ValueBracket, n: int) -> float:
    """Upper bound ``2**-(n+1) * (u0 - m0)`` on the error after n steps."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.ldexp(bracket0.u - bracket0.m, -(n + 1))


def iterations_needed(bracket0: ValueBracket, eps: float) -> int:
    """Smallest n >= 0 with ``2**-(n+1) * (u0 - m0) <= eps``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    w = bracket0.u - bracket0.m
    if w <= 0:
        return 0
    n = max(0, math.ceil(math.log2(w) - math.log2(eps) - 1))
    # log2 is inexact; settle the boundary with exact scaling
    while math.ldexp(w, -(n + 1)) > eps:
        n += 1
    while n > 0 and math.ldexp(w, -n) <= eps:
        n -= 1
    return n


def _rates(half_widths: Sequence[float]) -> Diagnostic:
    if len(half_widths) < 3:
        raise DiagnosticUnavailable("need at least 3 iterations to estimate the rate")
    if any(not (w > 0 and math.isfinite(w)) for w in half_widths):
        raise DiagnosticUnavailable("history contains a degenerate (zero-width) bracket")
    ratios = [b / a for a, b in zip(half_widths, half_widths[1:])]
    xs = [math.log(w) for w in half_widths[:-1]]
    ys = [math.log(w) for w in half_widths[1:]]
    mx, my = math.fsum(xs) / len(xs), math.fsum(ys) / len(ys)
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    if sxx == 0:
        raise DiagnosticUnavailable("bracket width never changed")
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return Diagnostic(sxy / sxx, math.fsum(ratios) / len(ratios))


def convergence_diagnostic(history: Sequence[IterationRecord]) -> Diagnostic:
    """Order and mean contraction ratio of the bracket half-widths.

    The order is the least-squares slope of ``log w[n+1]`` against
    ``log w[n]``; for this method it is 1 with ratio 1/2.
    """
    return _rates([0.5 * (r.bracket_after.u - r.bracket_after.m) for r in history])


def tangency_stop(f: Expr, c: float, witness: float, domain: Interval, deriv_tol: float = 1e-6) -> bool:
    """Whether the line y = c touches f from above at an interior witness.

    Uses a central difference with step ``sqrt(eps) * max(1, |w|)``; also
    requires both neighbours to stay below ``c + deriv_tol`` so that a level
    crossing with a flat spot is not mistaken for a peak.
    """
    if not (domain.lo < witness < domain.hi):
        return False
    h = math.sqrt(2.0**-52) * max(1.0, abs(witness))
    if witness - h < domain.lo or witness + h > domain.hi:
        return False
    fp, fm = evaluate(f, witness + h), evaluate(f, witness - h)
    if not (math.isfinite(fp) and math.isfinite(fm)):
        return False
    slope = (fp - fm) / (2.0 * h)
    return abs(slope) <= deriv_tol and fp <= c + deriv_tol and fm <= c + deriv_tol


def _check_domain(domain: Interval):
    if not (domain.lo < domain.hi):
        raise BracketError(f"b must be bigger than a (got a={domain.lo}, b={domain.hi})")


def _validated_start(f: Expr, domain: Interval, bracket: ValueBracket, ocfg: OracleConfig) -> float | None:
    # the lower end must be attained; checked with the hybrid oracle whatever kind the run uses
    verdict = decide_reachable(f, domain, bracket.m, replace(ocfg, kind=OracleKind.HYBRID))
    if verdict.reachable:
        return verdict.witness
    if verdict.kind is Verdict.UNKNOWN and ocfg.unknown_policy is UnknownPolicy.ABORT:
        raise OracleIndeterminate(bracket.m)
    raise BracketError(f"m0={bracket.m!r} is not attained by f on [{domain.lo}, {domain.hi}]")


def maximize(
    f: Expr,
    domain: Interval,
    bracket: ValueBracket | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> ExtremumReport:
    """Approximate ``max f`` on ``domain`` to within ``cfg.tol``.

    Without ``bracket`` the start is (best grid sample, interval upper
    bound), widened onto a power-of-two grid when it is not already within
    tolerance so that every step halves the width exactly. A supplied
    bracket is used as given and must have an attained lower end. Running
    out of iterations is not an error: the report comes back with
    ``converged=False``.
    """
    _check_domain(domain)
    ocfg = cfg.oracle
    if bracket is None:
        m0, witness = grid_maximum(f, domain, ocfg)
        bracket = ValueBracket(m0, upper_bound(f, domain))
        if 0.5 * bracket.width > cfg.tol:
            bracket = dyadic_bracket(bracket)
    else:
        witness = _validated_start(f, domain, bracket, ocfg)
    bracket0 = bracket
    m, u = bracket
    history: list[IterationRecord] = []
    exact = False
    n = 0
    while 0.5 * (u - m) > cfg.tol and n < cfg.max_iter:
        c = ValueBracket(m, u).midpoint
        if not (m < c < u):
            break  # bracket is down to adjacent floats
        n += 1
        verdict = decide_reachable(f, domain, c, ocfg)
        if verdict.reachable:
            m, witness = c, verdict.witness
        elif verdict.kind is Verdict.UNKNOWN and ocfg.unknown_policy is UnknownPolicy.ABORT:
            raise OracleIndeterminate(c)
        else:
            u = c
        history.append(IterationRecord(n, c, verdict, ValueBracket(m, u)))
        if verdict.reachable and cfg.tangency_check and tangency_stop(f, c, witness, domain, cfg.deriv_tol):
            exact = True
            break

    if exact:
        top = max(c, min(evaluate(f, witness), u))
        final = ValueBracket(top, top)
    else:
        final = ValueBracket(m, u)
    half = 0.5 * (final.u - final.m)
    return ExtremumReport(
        estimate=final.midpoint,
        bracket=final,
        bracket0=bracket0,
        iterations=n,
        error_bound=half,
        converged=half <= cfg.tol,
        exact_max_detected=exact,
        witness=witness,
        history=tuple(history),
    )


def _flip(b: ValueBracket) -> ValueBracket:
    return ValueBracket(-b.u, -b.m)


def minimize(
    f: Expr,
    domain: Interval,
    bracket: ValueBracket | None = None,
    cfg: SolverConfig = SolverConfig(),
) -> ExtremumReport:
    """Minimum of f as minus the maximum of -f.

    A supplied ``bracket`` encloses the minimum, ``m <= min f <= u``, and
    here it is the upper end ``u`` that must be attained. Estimate, brackets
    and history levels are sign-flipped back, so the estimate is exactly
    ``-maximize(negate(f)).estimate``.
    """
    r = maximize(negate(f), domain, None if bracket is None else _flip(bracket), cfg)
    history = tuple(replace(rec, c=-rec.c, bracket_after=_flip(rec.bracket_after)) for rec in r.history)
    return ExtremumReport(
        estimate=-r.estimate,
        bracket=_flip(r.bracket),
        bracket0=_flip(r.bracket0),
        iterations=r.iterations,
        error_bound=r.error_bound,
        converged=r.converged,
        exact_max_detected=r.exact_max_detected,
        witness=r.witness,
        history=history,
        sense="min",
    )
