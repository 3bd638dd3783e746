"""Interval versions of the primitives, on bare ``(lo, hi)`` float pairs.

Every function returns ``(lo, hi, partial)``. ``partial`` is set when the
function is undefined on part of the input box. The empty enclosure is
``(inf, -inf)``; it means "no defined value on this box". Endpoints of
rounded operations are pushed outward by one ulp.
"""
import math

from . import _scalar

INF = math.inf
EMPTY = (INF, -INF)
WHOLE = (-INF, INF)

# beyond this magnitude the trig enclosures give up and return the full range
TRIG_LIMIT = 1e8

_PI = math.pi
_TWO_PI = 2.0 * math.pi
_HALF_PI = 0.5 * math.pi


def down(v: float) -> float:
    return math.nextafter(v, -INF)


def up(v: float) -> float:
    return math.nextafter(v, INF)


def is_empty(lo: float, hi: float) -> bool:
    return lo > hi


def _finish(lo, hi, partial=False):
    if lo != lo or hi != hi:
        return -INF, INF, partial
    return down(lo), up(hi), partial


def _finish4(v):
    if any(t != t for t in v):
        return -INF, INF, False
    return _finish(min(v), max(v))


def neg(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    return -ahi, -alo, False


def abs_(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    if alo >= 0.0:
        return alo, ahi, False
    if ahi <= 0.0:
        return -ahi, -alo, False
    return 0.0, max(-alo, ahi), False


def add(alo, ahi, blo, bhi):
    if alo > ahi or blo > bhi:
        return INF, -INF, False
    return _finish(alo + blo, ahi + bhi)


def sub(alo, ahi, blo, bhi):
    if alo > ahi or blo > bhi:
        return INF, -INF, False
    return _finish(alo - bhi, ahi - blo)


def _mulp(a, b):
    # 0 * inf counts as 0: the infinite end is never attained
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


def mul(alo, ahi, blo, bhi):
    if alo > ahi or blo > bhi:
        return INF, -INF, False
    return _finish4((_mulp(alo, blo), _mulp(alo, bhi), _mulp(ahi, blo), _mulp(ahi, bhi)))


def div(alo, ahi, blo, bhi):
    if alo > ahi or blo > bhi:
        return INF, -INF, False
    if blo <= 0.0 <= bhi:
        return -INF, INF, True
    return _finish4((alo / blo, alo / bhi, ahi / blo, ahi / bhi))


def _is_integer(y):
    return math.isfinite(y) and y == math.floor(y)


def _is_even(n):
    return math.fmod(n, 2.0) == 0.0


def pow_(alo, ahi, blo, bhi):
    if alo > ahi or blo > bhi:
        return INF, -INF, False
    pw = _scalar.pow_
    if blo == bhi and _is_integer(blo):
        n = blo
        if n == 0.0:
            return 1.0, 1.0, False
        if n < 0.0 and alo <= 0.0 <= ahi:
            return -INF, INF, True
        v1, v2 = pw(alo, n), pw(ahi, n)
        if n > 0.0 and _is_even(n) and alo < 0.0 < ahi:
            return 0.0, up(max(v1, v2)), False
        lo, hi, _ = _finish(min(v1, v2), max(v1, v2))
        if _is_even(n):
            lo = max(lo, 0.0)
        return lo, hi, False
    if blo == bhi:
        y = blo
        if ahi < 0.0:
            return INF, -INF, True
        partial = alo < 0.0
        xlo = max(alo, 0.0)
        if y > 0.0:
            lo, hi, _ = _finish(pw(xlo, y), pw(ahi, y))
            return max(lo, 0.0), hi, partial
        if xlo == 0.0:
            if ahi == 0.0:
                return INF, -INF, True
            return max(down(pw(ahi, y)), 0.0), INF, True
        lo, hi, _ = _finish(pw(ahi, y), pw(xlo, y))
        return max(lo, 0.0), hi, partial
    partial = False
    if alo < 0.0:
        if math.floor(bhi) >= blo:
            # some integer exponent makes negative bases defined
            return -INF, INF, True
        if ahi < 0.0:
            return INF, -INF, True
        alo, partial = 0.0, True
    if alo == 0.0 and blo <= 0.0:
        return -INF, INF, True
    lo, hi, _ = _finish4((pw(alo, blo), pw(alo, bhi), pw(ahi, blo), pw(ahi, bhi)))
    return max(lo, 0.0), hi, partial


def _hits(lo, hi, offset, period):
    """Whether some offset + k*period lies in [lo, hi], with slack for rounding."""
    s = 1e-12 * max(1.0, abs(lo), abs(hi))
    k = math.ceil((lo - s - offset) / period)
    for kk in (k - 1, k):
        t = offset + kk * period
        if lo - s <= t <= hi + s:
            return True
    return False


def _trig(alo, ahi, fn, max_at, min_at):
    if alo > ahi:
        return INF, -INF, False
    if ahi - alo >= _TWO_PI or max(abs(alo), abs(ahi)) > TRIG_LIMIT:
        return -1.0, 1.0, False
    v1, v2 = fn(alo), fn(ahi)
    lo, hi = max(down(min(v1, v2)), -1.0), min(up(max(v1, v2)), 1.0)
    if _hits(alo, ahi, max_at, _TWO_PI):
        hi = 1.0
    if _hits(alo, ahi, min_at, _TWO_PI):
        lo = -1.0
    return lo, hi, False


def sin(alo, ahi):
    return _trig(alo, ahi, math.sin, _HALF_PI, -_HALF_PI)


def cos(alo, ahi):
    return _trig(alo, ahi, math.cos, 0.0, _PI)


def tan(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    if ahi - alo >= _PI or max(abs(alo), abs(ahi)) > TRIG_LIMIT or _hits(alo, ahi, _HALF_PI, _PI):
        return -INF, INF, False
    return _finish(math.tan(alo), math.tan(ahi))


def exp(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    lo, hi, _ = _finish(_scalar.exp(alo), _scalar.exp(ahi))
    return max(lo, 0.0), hi, False


def log(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    if ahi <= 0.0:
        return INF, -INF, True
    if alo <= 0.0:
        return -INF, up(math.log(ahi)), True
    return _finish(math.log(alo), math.log(ahi))


def sqrt(alo, ahi):
    if alo > ahi:
        return INF, -INF, False
    if ahi < 0.0:
        return INF, -INF, True
    if alo < 0.0:
        return 0.0, up(math.sqrt(ahi)), True
    lo, hi, _ = _finish(math.sqrt(alo), math.sqrt(ahi))
    return max(lo, 0.0), hi, False


UNARY = {"neg": neg, "sin": sin, "cos": cos, "tan": tan, "exp": exp, "log": log, "sqrt": sqrt, "abs": abs_}
BINARY = {"add": add, "sub": sub, "mul": mul, "div": div, "pow": pow_}


def restrict(dlo, dhi, clo, lc, chi, hc):
    """Closure of ``[dlo, dhi]`` intersected with a condition set; may be empty."""
    lo, hi = max(dlo, clo), min(dhi, chi)
    if lo > hi:
        return INF, -INF
    if lo == hi and ((lo == clo and not lc) or (hi == chi and not hc)):
        return INF, -INF
    return lo, hi


def _infimum_uncovered(dlo, dhi, conds):
    p, incl = dlo, True
    while True:
        if p > dhi or (p == dhi and not incl):
            return None
        best = None
        for clo, lc, chi, hc in conds:
            if clo > chi or (clo == chi and not (lc and hc)):
                continue
            if incl:
                covers = (clo < p or (clo == p and lc)) and (p < chi or (p == chi and hc))
            else:
                covers = clo <= p < chi
            if covers and (best is None or (chi, hc) > best):
                best = (chi, hc)
        if best is None:
            return p
        p, incl = best[0], not best[1]


def residual(dlo, dhi, conds):
    """Hull of the part of ``[dlo, dhi]`` outside every condition set."""
    lo = _infimum_uncovered(dlo, dhi, conds)
    if lo is None:
        return INF, -INF
    mirrored = [(-chi, hc, -clo, lc) for clo, lc, chi, hc in conds]
    hi = -_infimum_uncovered(-dhi, -dlo, mirrored)
    return lo, hi


def mid(lo: float, hi: float) -> float:
    s = lo + hi
    if math.isinf(s):
        return 0.5 * lo + 0.5 * hi
    return 0.5 * s


def grid_point(a: float, b: float, n: int, i: int) -> float:
    """The i-th of n equally spaced points from a to b, endpoints exact."""
    if i == n - 1:
        return b
    return min(a + i * ((b - a) / (n - 1)), b)
