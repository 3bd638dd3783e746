"""Pure-Python tape interpreter; the fallback when the compiled kernel is absent.

Must stay semantically identical to ``_ckernel.pyx``.
"""
import math

from . import _intervalops as iv
from . import _scalar
from .tape import (
    ABS, ADD, BR_END, CONST, COS, DIV, ELSE_END, EXP, LOG, MUL, NEG, POW,
    PW_BRANCH, PW_ELSE, PW_END, SIN, SQRT, SUB, TAN, VAR,
)

NAME = "python"

INF = math.inf

REACHABLE, UNREACHABLE, UNKNOWN = 1, 0, -1

_P_UNARY = {
    NEG: _scalar.neg, SIN: _scalar.sin, COS: _scalar.cos, TAN: _scalar.tan,
    EXP: _scalar.exp, LOG: _scalar.log, SQRT: _scalar.sqrt, ABS: _scalar.abs_,
}
_P_BINARY = {ADD: _scalar.add, SUB: _scalar.sub, MUL: _scalar.mul, DIV: _scalar.div, POW: _scalar.pow_}

_I_UNARY = {
    NEG: iv.neg, SIN: iv.sin, COS: iv.cos, TAN: iv.tan,
    EXP: iv.exp, LOG: iv.log, SQRT: iv.sqrt, ABS: iv.abs_,
}
_I_BINARY = {ADD: iv.add, SUB: iv.sub, MUL: iv.mul, DIV: iv.div, POW: iv.pow_}


def _cond_holds(tape, k, x):
    lo, hi = tape.conds[2 * k], tape.conds[2 * k + 1]
    lc, hc = tape.cflags[2 * k], tape.cflags[2 * k + 1]
    return (x > lo or (lc and x == lo)) and (x < hi or (hc and x == hi))


def eval_point(tape, x):
    code, consts = tape.code, tape.consts
    stack = []
    ip = 0
    end = len(code) // 3
    while ip < end:
        op, a, b = code[3 * ip], code[3 * ip + 1], code[3 * ip + 2]
        ip += 1
        if op == CONST:
            stack.append(consts[a])
        elif op == VAR:
            stack.append(x)
        elif op in _P_UNARY:
            stack.append(_P_UNARY[op](stack.pop()))
        elif op in _P_BINARY:
            r = stack.pop()
            stack.append(_P_BINARY[op](stack.pop(), r))
        elif op == PW_BRANCH:
            if not _cond_holds(tape, a, x):
                ip = b
        elif op == BR_END:
            ip = a
        # PW_ELSE, ELSE_END, PW_END are no-ops on the point path
    return stack[-1]


def _conds_range(tape, first, stop):
    return [
        (tape.conds[2 * k], tape.cflags[2 * k], tape.conds[2 * k + 1], tape.cflags[2 * k + 1])
        for k in range(first, stop)
    ]


def _conds_of(tape, pw):
    first, n = tape.pws[2 * pw], tape.pws[2 * pw + 1]
    return _conds_range(tape, first, first + n)


def _first_cond(tape, k):
    """Index of the first condition of the piecewise that owns condition k."""
    pws = tape.pws
    for j in range(0, len(pws), 2):
        if pws[j] <= k < pws[j] + pws[j + 1]:
            return pws[j]
    return k


def eval_interval(tape, lo, hi):
    code, consts = tape.code, tape.consts
    stack = []
    doms = [(lo, hi)]
    partial = False
    ip = 0
    end = len(code) // 3
    while ip < end:
        op, a, b = code[3 * ip], code[3 * ip + 1], code[3 * ip + 2]
        ip += 1
        if op == CONST:
            v = consts[a]
            stack.append((v, v))
        elif op == VAR:
            stack.append(doms[-1])
        elif op in _I_UNARY:
            xl, xh = stack.pop()
            rl, rh, p = _I_UNARY[op](xl, xh)
            partial = partial or p
            stack.append((rl, rh))
        elif op in _I_BINARY:
            yl, yh = stack.pop()
            xl, xh = stack.pop()
            rl, rh, p = _I_BINARY[op](xl, xh, yl, yh)
            partial = partial or p
            stack.append((rl, rh))
        elif op == PW_BRANCH:
            dl, dh = doms[-1]
            rl, rh = iv.restrict(
                dl, dh, tape.conds[2 * a], tape.cflags[2 * a], tape.conds[2 * a + 1], tape.cflags[2 * a + 1]
            )
            if rl <= rh:
                # points claimed by an earlier branch never reach this one
                rl, rh = iv.residual(rl, rh, _conds_range(tape, _first_cond(tape, a), a))
            if rl > rh:
                stack.append(iv.EMPTY)
                ip = b
            else:
                doms.append((rl, rh))
        elif op == PW_ELSE:
            dl, dh = doms[-1]
            rl, rh = iv.residual(dl, dh, _conds_of(tape, a))
            if rl > rh:
                stack.append(iv.EMPTY)
                ip = b
            else:
                doms.append((rl, rh))
        elif op == BR_END or op == ELSE_END:
            doms.pop()
        elif op == PW_END:
            rl, rh = INF, -INF
            for _ in range(a):
                xl, xh = stack.pop()
                if xl <= xh:
                    rl, rh = min(rl, xl), max(rh, xh)
            stack.append((rl, rh))
    rl, rh = stack[-1]
    return rl, rh, partial


def grid_max(tape, a, b, n):
    """(max value, leftmost argmax, number of finite samples) over the grid."""
    best, best_x, count = -INF, a, 0
    for i in range(n):
        x = iv.grid_point(a, b, n, i)
        v = eval_point(tape, x)
        if math.isfinite(v):
            count += 1
            if v > best:
                best, best_x = v, x
    return best, best_x, count


def grid_first(tape, a, b, n, c):
    """(status, x): leftmost grid point with f >= c; status -1 if no finite sample."""
    finite = 0
    for i in range(n):
        x = iv.grid_point(a, b, n, i)
        v = eval_point(tape, x)
        if math.isfinite(v):
            finite += 1
            if v >= c:
                return REACHABLE, x
    return (UNREACHABLE if finite else UNKNOWN), math.nan


def bnb(tape, a, b, c, max_depth, min_width, max_boxes):
    """Left-first branch and bound for "exists x in [a, b] with f(x) >= c".

    Returns (status, witness, boxes processed).
    """
    stack = [(a, b, 0)]
    unresolved = False
    boxes = 0
    while stack:
        lo, hi, depth = stack.pop()
        boxes += 1
        if boxes > max_boxes:
            return UNKNOWN, math.nan, boxes
        flo, fhi, _ = eval_interval(tape, lo, hi)
        if flo > fhi or fhi < c:
            continue
        m = iv.mid(lo, hi)
        if eval_point(tape, m) >= c:
            return REACHABLE, m, boxes
        if depth >= max_depth or hi - lo <= min_width or m <= lo or m >= hi:
            unresolved = True
            continue
        stack.append((m, hi, depth + 1))
        stack.append((lo, m, depth + 1))
    return (UNKNOWN if unresolved else UNREACHABLE), math.nan, boxes
