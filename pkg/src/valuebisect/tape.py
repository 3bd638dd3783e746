"""Flatten an expression tree into a postfix instruction tape.

Both kernels (compiled and pure Python) interpret the same tape, so the tree
only has to be walked once per expression. Instructions are ``(op, a, b)``
triples in a flat ``array('i')``.

Piecewise nodes compile to::

    PW_BRANCH cond skip   body_1  BR_END exit
    ...
    PW_ELSE   pw   skip   default ELSE_END
    PW_END    nres

Point evaluation runs only the first branch whose condition holds and jumps
to ``exit``. Interval evaluation runs every branch on the part of the input
box its condition allows (skipping empty parts) and takes the hull.
"""
from __future__ import annotations

import functools
from array import array
from dataclasses import dataclass

from .expr import Binary, Const, Expr, Piecewise, Unary, Var

CONST, VAR = 0, 1
NEG, SIN, COS, TAN, EXP, LOG, SQRT, ABS = 2, 3, 4, 5, 6, 7, 8, 9
ADD, SUB, MUL, DIV, POW = 10, 11, 12, 13, 14
PW_BRANCH, BR_END, PW_ELSE, ELSE_END, PW_END = 20, 21, 22, 23, 24

UNARY_CODES = {"neg": NEG, "sin": SIN, "cos": COS, "tan": TAN, "exp": EXP, "log": LOG, "sqrt": SQRT, "abs": ABS}
BINARY_CODES = {"add": ADD, "sub": SUB, "mul": MUL, "div": DIV, "pow": POW}


@dataclass(frozen=True, eq=False)
class Tape:
    code: array  # 'i', 3 per instruction
    consts: array  # 'd'
    conds: array  # 'd', (lo, hi) per condition
    cflags: array  # 'i', (lo_closed, hi_closed) per condition
    pws: array  # 'i', (first condition, number of conditions) per piecewise
    stack_size: int
    dom_size: int

    @property
    def n_instructions(self) -> int:
        return len(self.code) // 3


class _Compiler:
    def __init__(self):
        self.code = array("i")
        self.consts = array("d")
        self.conds = array("d")
        self.cflags = array("i")
        self.pws = array("i")

    def emit(self, op: int, a: int = 0, b: int = 0) -> int:
        self.code.extend((op, a, b))
        return len(self.code) // 3 - 1

    def patch(self, at: int, slot: int, value: int):
        self.code[3 * at + slot] = value

    def here(self) -> int:
        return len(self.code) // 3

    def compile(self, node: Expr) -> tuple[int, int]:
        """Emit ``node``; return (value stack need, domain stack nesting)."""
        if isinstance(node, Const):
            self.consts.append(node.value)
            self.emit(CONST, len(self.consts) - 1)
            return 1, 0
        if isinstance(node, Var):
            self.emit(VAR)
            return 1, 0
        if isinstance(node, Unary):
            need = self.compile(node.child)
            self.emit(UNARY_CODES[node.op])
            return need
        if isinstance(node, Binary):
            ls, ld = self.compile(node.left)
            rs, rd = self.compile(node.right)
            self.emit(BINARY_CODES[node.op])
            return max(ls, rs + 1), max(ld, rd)
        if isinstance(node, Piecewise):
            return self._piecewise(node)
        raise TypeError(f"not an expression node: {node!r}")

    def _piecewise(self, node: Piecewise) -> tuple[int, int]:
        first = len(self.conds) // 2
        for cond, _ in node.branches:
            lo, lo_closed, hi, hi_closed = cond.as_interval()
            self.conds.extend((lo, hi))
            self.cflags.extend((int(lo_closed), int(hi_closed)))
        pw = len(self.pws) // 2
        self.pws.extend((first, len(node.branches)))

        stack = dom = 0
        exits = []
        for k, (_, body) in enumerate(node.branches):
            at = self.emit(PW_BRANCH, first + k)
            s, d = self.compile(body)
            exits.append(self.emit(BR_END))
            self.patch(at, 2, self.here())
            stack, dom = max(stack, k + s), max(dom, d)
        nb = len(node.branches)
        at = self.emit(PW_ELSE, pw)
        s, d = self.compile(node.default)
        self.emit(ELSE_END)
        self.patch(at, 2, self.here())
        stack, dom = max(stack, nb + s), max(dom, d)
        self.emit(PW_END, nb + 1)
        for e in exits:
            self.patch(e, 1, self.here())
        return max(stack, nb + 1), dom + 1


@functools.lru_cache(maxsize=256)
def compile_expr(f: Expr) -> Tape:
    c = _Compiler()
    stack, dom = c.compile(f)
    return Tape(c.code, c.consts, c.conds, c.cflags, c.pws, stack, dom + 1)
