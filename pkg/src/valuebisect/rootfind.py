"""Classical bisection for f(x) = 0, and for f(x) = c via a shifted residual."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, EvaluationError
from .expr import Binary, Const, Expr, evaluate

DEFAULT_MAX_ITER = 200


@dataclass(frozen=True)
class RootResult:
    root: float
    iterations: int
    residual: float
    bound: float
    # midpoint c_n after each halving; c_0 is the midpoint of the start interval
    midpoints: tuple[float, ...] = ()

    @property
    def converged_exactly(self) -> bool:
        return self.residual == 0.0


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def bisect_root(f: Expr, a: float, b: float, tol: float, max_iter: int = DEFAULT_MAX_ITER) -> RootResult:
    """Halve ``[a, b]`` keeping a sign change until ``(b - a) / 2 <= tol``.

    The root estimate is the final midpoint and ``bound`` is
    ``2**-(n+1) * (b0 - a0)``. Signs are compared directly rather than via
    ``f(a) * f(c)`` so tiny or huge values cannot underflow or overflow the test.
    """
    if not a < b:
        raise BracketError(f"b must be bigger than a (got a={a}, b={b})")
    if not tol > 0:
        raise ValueError("tolerance must be positive")
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    fa, fb = evaluate(f, a), evaluate(f, b)
    for x, v in ((a, fa), (b, fb)):
        if not math.isfinite(v):
            raise EvaluationError(f"f({x!r}) is not finite", x)
    if fa == 0.0:
        return RootResult(a, 0, 0.0, 0.0)
    if fb == 0.0:
        return RootResult(b, 0, 0.0, 0.0)
    sa = _sign(fa)
    if sa == _sign(fb):
        raise BracketError(f"f(a) and f(b) have the same sign ({fa!r}, {fb!r})")

    width0 = b - a
    n = 0
    mids = [0.5 * (a + b)]
    while 0.5 * (b - a) > tol and n < max_iter:
        c = 0.5 * (a + b)
        if not (a < c < b):
            break
        fc = evaluate(f, c)
        if not math.isfinite(fc):
            raise EvaluationError(f"f({c!r}) is not finite", c)
        n += 1
        if fc == 0.0:
            mids.append(c)
            return RootResult(c, n, 0.0, 0.0, tuple(mids))
        if _sign(fc) == sa:
            a = c
        else:
            b = c
        mids.append(0.5 * (a + b))
    root = 0.5 * (a + b)
    return RootResult(root, n, evaluate(f, root), math.ldexp(width0, -(n + 1)), tuple(mids))


def solve_level(
    f: Expr, c: float, lo_point: float, hi_point: float, tol: float, max_iter: int = DEFAULT_MAX_ITER
) -> RootResult:
    """Find x between two points that straddle the level c, i.e. f(x) = c.

    The points may come in either order; f must be at most c at one and at
    least c at the other, so a point sitting exactly on the level is
    returned as is. ``residual`` is reported as ``f(root) - c``.
    """
    f_lo, f_hi = evaluate(f, lo_point), evaluate(f, hi_point)
    if not ((f_lo <= c <= f_hi) or (f_hi <= c <= f_lo)):
        raise BracketError(f"level {c!r} is not straddled by f({lo_point!r})={f_lo!r} and f({hi_point!r})={f_hi!r}")
    a, b = sorted((lo_point, hi_point))
    return bisect_root(Binary("sub", f, Const(float(c))), a, b, tol, max_iter)
