# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tape interpreter. Mirrors _pykernel.py / _intervalops.py / _scalar.py exactly."""
from libc.math cimport (
    sin, cos, tan, exp, log, sqrt, fabs, pow, floor, fmod, ceil, nextafter,
    isfinite, isinf, isnan, INFINITY, NAN, M_PI,
)
from libc.stdlib cimport malloc, free

NAME = "compiled"

cdef enum:
    C_CONST = 0
    C_VAR = 1
    C_NEG = 2
    C_SIN = 3
    C_COS = 4
    C_TAN = 5
    C_EXP = 6
    C_LOG = 7
    C_SQRT = 8
    C_ABS = 9
    C_ADD = 10
    C_SUB = 11
    C_MUL = 12
    C_DIV = 13
    C_POW = 14
    C_PW_BRANCH = 20
    C_BR_END = 21
    C_PW_ELSE = 22
    C_ELSE_END = 23
    C_PW_END = 24

cdef double TRIG_LIMIT = 1e8
cdef double TWO_PI = 2.0 * M_PI
cdef double HALF_PI = 0.5 * M_PI


cdef struct TapeView:
    const int* code
    int n
    const double* consts
    const double* conds
    const int* cflags
    const int* pws
    int npw
    int stack_size
    int dom_size


cdef struct Work:
    double* s
    double* slo
    double* shi
    double* dlo
    double* dhi


# ---- scalar primitives -------------------------------------------------------

cdef inline bint is_integer(double y) noexcept nogil:
    return isfinite(y) and y == floor(y)


cdef inline double s_div(double x, double y) noexcept nogil:
    if y == 0.0 or isnan(y):
        return NAN
    return x / y


cdef inline double s_pow(double x, double y) noexcept nogil:
    if isnan(x) or isnan(y):
        return NAN
    if x < 0.0 and not is_integer(y):
        return NAN
    if x == 0.0 and y < 0.0:
        return NAN
    return pow(x, y)


cdef inline double s_trig(int op, double x) noexcept nogil:
    if isinf(x):
        return NAN
    if op == C_SIN:
        return sin(x)
    if op == C_COS:
        return cos(x)
    return tan(x)


cdef inline double s_log(double x) noexcept nogil:
    if not x > 0.0:
        return NAN
    return log(x)


cdef inline double s_sqrt(double x) noexcept nogil:
    if x < 0.0 or isnan(x):
        return NAN
    return sqrt(x)


cdef inline bint cond_holds(TapeView* t, int k, double x) noexcept nogil:
    cdef double lo = t.conds[2 * k], hi = t.conds[2 * k + 1]
    cdef int lc = t.cflags[2 * k], hc = t.cflags[2 * k + 1]
    return (x > lo or (lc and x == lo)) and (x < hi or (hc and x == hi))


cdef double point(TapeView* t, double* s, double x) noexcept nogil:
    cdef int ip = 0, sp = 0, op, a, b
    cdef double r
    while ip < t.n:
        op = t.code[3 * ip]
        a = t.code[3 * ip + 1]
        b = t.code[3 * ip + 2]
        ip += 1
        if op == C_CONST:
            s[sp] = t.consts[a]
            sp += 1
        elif op == C_VAR:
            s[sp] = x
            sp += 1
        elif op == C_NEG:
            s[sp - 1] = -s[sp - 1]
        elif op == C_SIN or op == C_COS or op == C_TAN:
            s[sp - 1] = s_trig(op, s[sp - 1])
        elif op == C_EXP:
            s[sp - 1] = exp(s[sp - 1])
        elif op == C_LOG:
            s[sp - 1] = s_log(s[sp - 1])
        elif op == C_SQRT:
            s[sp - 1] = s_sqrt(s[sp - 1])
        elif op == C_ABS:
            s[sp - 1] = fabs(s[sp - 1])
        elif op >= C_ADD and op <= C_POW:
            sp -= 1
            r = s[sp]
            if op == C_ADD:
                s[sp - 1] = s[sp - 1] + r
            elif op == C_SUB:
                s[sp - 1] = s[sp - 1] - r
            elif op == C_MUL:
                s[sp - 1] = s[sp - 1] * r
            elif op == C_DIV:
                s[sp - 1] = s_div(s[sp - 1], r)
            else:
                s[sp - 1] = s_pow(s[sp - 1], r)
        elif op == C_PW_BRANCH:
            if not cond_holds(t, a, x):
                ip = b
        elif op == C_BR_END:
            ip = a
    return s[sp - 1]


# ---- interval primitives -----------------------------------------------------

cdef inline double down(double v) noexcept nogil:
    return nextafter(v, -INFINITY)


cdef inline double up(double v) noexcept nogil:
    return nextafter(v, INFINITY)


cdef inline double pmin(double a, double b) noexcept nogil:
    # same tie/NaN behaviour as Python's min(a, b)
    return b if b < a else a


cdef inline double pmax(double a, double b) noexcept nogil:
    return b if b > a else a


cdef inline double min4(double* v) noexcept nogil:
    return pmin(pmin(pmin(v[0], v[1]), v[2]), v[3])


cdef inline double max4(double* v) noexcept nogil:
    return pmax(pmax(pmax(v[0], v[1]), v[2]), v[3])


cdef inline void set_empty(double* lo, double* hi) noexcept nogil:
    lo[0] = INFINITY
    hi[0] = -INFINITY


cdef inline void set_whole(double* lo, double* hi) noexcept nogil:
    lo[0] = -INFINITY
    hi[0] = INFINITY


cdef inline void finish(double l, double h, double* lo, double* hi) noexcept nogil:
    if isnan(l) or isnan(h):
        set_whole(lo, hi)
    else:
        lo[0] = down(l)
        hi[0] = up(h)


cdef inline void finish4(double* v, double* lo, double* hi) noexcept nogil:
    if isnan(v[0]) or isnan(v[1]) or isnan(v[2]) or isnan(v[3]):
        set_whole(lo, hi)
    else:
        finish(min4(v), max4(v), lo, hi)


cdef inline double mulp(double a, double b) noexcept nogil:
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


cdef inline bint hits(double lo, double hi, double offset, double period) noexcept nogil:
    cdef double s = 1e-12 * pmax(pmax(1.0, fabs(lo)), fabs(hi))
    cdef double k = ceil((lo - s - offset) / period)
    cdef double t
    t = offset + (k - 1.0) * period
    if lo - s <= t and t <= hi + s:
        return True
    t = offset + k * period
    return lo - s <= t and t <= hi + s


cdef int i_unary(int op, double alo, double ahi, double* lo, double* hi) noexcept nogil:
    """Returns the partial flag."""
    cdef double v1, v2, max_at, min_at
    if alo > ahi:
        set_empty(lo, hi)
        return 0
    if op == C_NEG:
        lo[0] = -ahi
        hi[0] = -alo
        return 0
    if op == C_ABS:
        if alo >= 0.0:
            lo[0] = alo
            hi[0] = ahi
        elif ahi <= 0.0:
            lo[0] = -ahi
            hi[0] = -alo
        else:
            lo[0] = 0.0
            hi[0] = pmax(-alo, ahi)
        return 0
    if op == C_SIN or op == C_COS:
        if ahi - alo >= TWO_PI or pmax(fabs(alo), fabs(ahi)) > TRIG_LIMIT:
            lo[0] = -1.0
            hi[0] = 1.0
            return 0
        if op == C_SIN:
            v1 = sin(alo)
            v2 = sin(ahi)
            max_at = HALF_PI
            min_at = -HALF_PI
        else:
            v1 = cos(alo)
            v2 = cos(ahi)
            max_at = 0.0
            min_at = M_PI
        lo[0] = pmax(down(pmin(v1, v2)), -1.0)
        hi[0] = pmin(up(pmax(v1, v2)), 1.0)
        if hits(alo, ahi, max_at, TWO_PI):
            hi[0] = 1.0
        if hits(alo, ahi, min_at, TWO_PI):
            lo[0] = -1.0
        return 0
    if op == C_TAN:
        if ahi - alo >= M_PI or pmax(fabs(alo), fabs(ahi)) > TRIG_LIMIT or hits(alo, ahi, HALF_PI, M_PI):
            set_whole(lo, hi)
            return 0
        finish(tan(alo), tan(ahi), lo, hi)
        return 0
    if op == C_EXP:
        finish(exp(alo), exp(ahi), lo, hi)
        lo[0] = pmax(lo[0], 0.0)
        return 0
    if op == C_LOG:
        if ahi <= 0.0:
            set_empty(lo, hi)
            return 1
        if alo <= 0.0:
            lo[0] = -INFINITY
            hi[0] = up(log(ahi))
            return 1
        finish(log(alo), log(ahi), lo, hi)
        return 0
    # C_SQRT
    if ahi < 0.0:
        set_empty(lo, hi)
        return 1
    if alo < 0.0:
        lo[0] = 0.0
        hi[0] = up(sqrt(ahi))
        return 1
    finish(sqrt(alo), sqrt(ahi), lo, hi)
    lo[0] = pmax(lo[0], 0.0)
    return 0


cdef int i_pow(double alo, double ahi, double blo, double bhi, double* lo, double* hi) noexcept nogil:
    cdef double n, v1, v2, y, xlo
    cdef double v[4]
    cdef int partial = 0
    cdef bint even
    if blo == bhi and is_integer(blo):
        n = blo
        if n == 0.0:
            lo[0] = 1.0
            hi[0] = 1.0
            return 0
        if n < 0.0 and alo <= 0.0 and 0.0 <= ahi:
            set_whole(lo, hi)
            return 1
        v1 = s_pow(alo, n)
        v2 = s_pow(ahi, n)
        even = fmod(n, 2.0) == 0.0
        if n > 0.0 and even and alo < 0.0 and 0.0 < ahi:
            lo[0] = 0.0
            hi[0] = up(pmax(v1, v2))
            return 0
        finish(pmin(v1, v2), pmax(v1, v2), lo, hi)
        if even:
            lo[0] = pmax(lo[0], 0.0)
        return 0
    if blo == bhi:
        y = blo
        if ahi < 0.0:
            set_empty(lo, hi)
            return 1
        partial = alo < 0.0
        xlo = pmax(alo, 0.0)
        if y > 0.0:
            finish(s_pow(xlo, y), s_pow(ahi, y), lo, hi)
            lo[0] = pmax(lo[0], 0.0)
            return partial
        if xlo == 0.0:
            if ahi == 0.0:
                set_empty(lo, hi)
                return 1
            lo[0] = pmax(down(s_pow(ahi, y)), 0.0)
            hi[0] = INFINITY
            return 1
        finish(s_pow(ahi, y), s_pow(xlo, y), lo, hi)
        lo[0] = pmax(lo[0], 0.0)
        return partial
    if alo < 0.0:
        if floor(bhi) >= blo:
            set_whole(lo, hi)
            return 1
        if ahi < 0.0:
            set_empty(lo, hi)
            return 1
        alo = 0.0
        partial = 1
    if alo == 0.0 and blo <= 0.0:
        set_whole(lo, hi)
        return 1
    v[0] = s_pow(alo, blo)
    v[1] = s_pow(alo, bhi)
    v[2] = s_pow(ahi, blo)
    v[3] = s_pow(ahi, bhi)
    finish4(v, lo, hi)
    lo[0] = pmax(lo[0], 0.0)
    return partial


cdef int i_binary(int op, double alo, double ahi, double blo, double bhi, double* lo, double* hi) noexcept nogil:
    cdef double v[4]
    if alo > ahi or blo > bhi:
        set_empty(lo, hi)
        return 0
    if op == C_ADD:
        finish(alo + blo, ahi + bhi, lo, hi)
        return 0
    if op == C_SUB:
        finish(alo - bhi, ahi - blo, lo, hi)
        return 0
    if op == C_MUL:
        v[0] = mulp(alo, blo)
        v[1] = mulp(alo, bhi)
        v[2] = mulp(ahi, blo)
        v[3] = mulp(ahi, bhi)
        finish4(v, lo, hi)
        return 0
    if op == C_DIV:
        if blo <= 0.0 and 0.0 <= bhi:
            set_whole(lo, hi)
            return 1
        v[0] = alo / blo
        v[1] = alo / bhi
        v[2] = ahi / blo
        v[3] = ahi / bhi
        finish4(v, lo, hi)
        return 0
    return i_pow(alo, ahi, blo, bhi, lo, hi)


cdef inline void restrict(TapeView* t, int k, double dlo, double dhi, double* lo, double* hi) noexcept nogil:
    cdef double clo = t.conds[2 * k], chi = t.conds[2 * k + 1]
    cdef int lc = t.cflags[2 * k], hc = t.cflags[2 * k + 1]
    cdef double l = pmax(dlo, clo), h = pmin(dhi, chi)
    if l > h or (l == h and ((l == clo and not lc) or (h == chi and not hc))):
        set_empty(lo, hi)
    else:
        lo[0] = l
        hi[0] = h


cdef bint infimum_uncovered(TapeView* t, int first, int n, double dlo, double dhi, bint mirror, double* out) noexcept nogil:
    cdef int k
    cdef double p = dlo, clo, chi, best_hi = 0.0
    cdef int lc, hc, best_hc = 0
    cdef bint incl = True, covers, have
    while True:
        if p > dhi or (p == dhi and not incl):
            return False
        have = False
        for k in range(first, first + n):
            if mirror:
                clo = -t.conds[2 * k + 1]
                chi = -t.conds[2 * k]
                lc = t.cflags[2 * k + 1]
                hc = t.cflags[2 * k]
            else:
                clo = t.conds[2 * k]
                chi = t.conds[2 * k + 1]
                lc = t.cflags[2 * k]
                hc = t.cflags[2 * k + 1]
            if clo > chi or (clo == chi and not (lc and hc)):
                continue
            if incl:
                covers = (clo < p or (clo == p and lc)) and (p < chi or (p == chi and hc))
            else:
                covers = clo <= p and p < chi
            if covers and (not have or chi > best_hi or (chi == best_hi and hc > best_hc)):
                have = True
                best_hi = chi
                best_hc = hc
        if not have:
            out[0] = p
            return True
        p = best_hi
        incl = not best_hc


cdef inline int first_cond(TapeView* t, int k) noexcept nogil:
    cdef int j
    for j in range(t.npw):
        if t.pws[2 * j] <= k < t.pws[2 * j] + t.pws[2 * j + 1]:
            return t.pws[2 * j]
    return k


cdef inline void residual(TapeView* t, int first, int n, double dlo, double dhi, double* lo, double* hi) noexcept nogil:
    cdef double l, h
    if not infimum_uncovered(t, first, n, dlo, dhi, False, &l):
        set_empty(lo, hi)
        return
    infimum_uncovered(t, first, n, -dhi, -dlo, True, &h)
    lo[0] = l
    hi[0] = -h


cdef int interval(TapeView* t, Work* w, double xlo, double xhi, double* lo, double* hi) noexcept nogil:
    """Enclosure of f over [xlo, xhi]; returns the partial flag."""
    cdef int ip = 0, sp = 0, dp = 1, op, a, b, partial = 0, j
    cdef double rl, rh, l, h
    cdef double* slo = w.slo
    cdef double* shi = w.shi
    w.dlo[0] = xlo
    w.dhi[0] = xhi
    while ip < t.n:
        op = t.code[3 * ip]
        a = t.code[3 * ip + 1]
        b = t.code[3 * ip + 2]
        ip += 1
        if op == C_CONST:
            slo[sp] = t.consts[a]
            shi[sp] = t.consts[a]
            sp += 1
        elif op == C_VAR:
            slo[sp] = w.dlo[dp - 1]
            shi[sp] = w.dhi[dp - 1]
            sp += 1
        elif op >= C_NEG and op <= C_ABS:
            if i_unary(op, slo[sp - 1], shi[sp - 1], &rl, &rh):
                partial = 1
            slo[sp - 1] = rl
            shi[sp - 1] = rh
        elif op >= C_ADD and op <= C_POW:
            sp -= 1
            if i_binary(op, slo[sp - 1], shi[sp - 1], slo[sp], shi[sp], &rl, &rh):
                partial = 1
            slo[sp - 1] = rl
            shi[sp - 1] = rh
        elif op == C_PW_BRANCH or op == C_PW_ELSE:
            if op == C_PW_BRANCH:
                restrict(t, a, w.dlo[dp - 1], w.dhi[dp - 1], &rl, &rh)
                if rl <= rh:
                    # points claimed by an earlier branch never reach this one
                    j = first_cond(t, a)
                    residual(t, j, a - j, rl, rh, &rl, &rh)
            else:
                residual(t, t.pws[2 * a], t.pws[2 * a + 1], w.dlo[dp - 1], w.dhi[dp - 1], &rl, &rh)
            if rl > rh:
                slo[sp] = INFINITY
                shi[sp] = -INFINITY
                sp += 1
                ip = b
            else:
                w.dlo[dp] = rl
                w.dhi[dp] = rh
                dp += 1
        elif op == C_BR_END or op == C_ELSE_END:
            dp -= 1
        elif op == C_PW_END:
            l = INFINITY
            h = -INFINITY
            for j in range(a):
                sp -= 1
                if slo[sp] <= shi[sp]:
                    l = pmin(l, slo[sp])
                    h = pmax(h, shi[sp])
            slo[sp] = l
            shi[sp] = h
            sp += 1
    lo[0] = slo[sp - 1]
    hi[0] = shi[sp - 1]
    return partial


# ---- driver loops ------------------------------------------------------------

cdef inline double mid(double lo, double hi) noexcept nogil:
    cdef double s = lo + hi
    if isinf(s):
        return 0.5 * lo + 0.5 * hi
    return 0.5 * s


cdef inline double grid_point(double a, double b, long n, long i) noexcept nogil:
    if i == n - 1:
        return b
    return pmin(a + i * ((b - a) / (n - 1)), b)


cdef class _Bound:
    """Keeps the tape buffers alive and owns the scratch stacks."""
    cdef TapeView t
    cdef Work w
    cdef object keep

    def __cinit__(self, tape):
        cdef const int[::1] code = tape.code
        cdef const double[::1] consts
        cdef const double[::1] conds
        cdef const int[::1] cflags
        cdef const int[::1] pws
        cdef int ss = tape.stack_size + 1, ds = tape.dom_size + 1
        # empty arrays cannot be viewed; pad with a dummy element
        consts = tape.consts if len(tape.consts) else _pad_d
        conds = tape.conds if len(tape.conds) else _pad_d
        cflags = tape.cflags if len(tape.cflags) else _pad_i
        pws = tape.pws if len(tape.pws) else _pad_i
        self.keep = (code, consts, conds, cflags, pws)
        self.t.code = &code[0]
        self.t.n = <int>(code.shape[0] // 3)
        self.t.consts = &consts[0]
        self.t.conds = &conds[0]
        self.t.cflags = &cflags[0]
        self.t.pws = &pws[0]
        self.t.npw = len(tape.pws) // 2
        self.t.stack_size = ss
        self.t.dom_size = ds
        self.w.s = <double*>malloc(ss * sizeof(double))
        self.w.slo = <double*>malloc(ss * sizeof(double))
        self.w.shi = <double*>malloc(ss * sizeof(double))
        self.w.dlo = <double*>malloc(ds * sizeof(double))
        self.w.dhi = <double*>malloc(ds * sizeof(double))
        if not (self.w.s and self.w.slo and self.w.shi and self.w.dlo and self.w.dhi):
            raise MemoryError()

    def __dealloc__(self):
        free(self.w.s)
        free(self.w.slo)
        free(self.w.shi)
        free(self.w.dlo)
        free(self.w.dhi)


from array import array as _array
_pad_d = _array("d", [0.0])
_pad_i = _array("i", [0])


cdef _Bound _bind(tape):
    cached = getattr(tape, "_ckernel_bound", None)
    if cached is None:
        cached = _Bound(tape)
        object.__setattr__(tape, "_ckernel_bound", cached)
    return <_Bound>cached


def eval_point(tape, double x):
    cdef _Bound bd = _bind(tape)
    return point(&bd.t, bd.w.s, x)


def eval_interval(tape, double lo, double hi):
    cdef _Bound bd = _bind(tape)
    cdef double rl, rh
    cdef int partial = interval(&bd.t, &bd.w, lo, hi, &rl, &rh)
    return rl, rh, bool(partial)


def grid_max(tape, double a, double b, long n):
    cdef _Bound bd = _bind(tape)
    cdef double best = -INFINITY, best_x = a, x, v
    cdef long i, count = 0
    with nogil:
        for i in range(n):
            x = grid_point(a, b, n, i)
            v = point(&bd.t, bd.w.s, x)
            if isfinite(v):
                count += 1
                if v > best:
                    best = v
                    best_x = x
    return best, best_x, count


def grid_first(tape, double a, double b, long n, double c):
    cdef _Bound bd = _bind(tape)
    cdef double x, v
    cdef long i, finite = 0
    cdef int status = 0
    with nogil:
        for i in range(n):
            x = grid_point(a, b, n, i)
            v = point(&bd.t, bd.w.s, x)
            if isfinite(v):
                finite += 1
                if v >= c:
                    status = 1
                    break
    if status == 1:
        return 1, x
    return (0 if finite else -1), NAN


def bnb(tape, double a, double b, double c, int max_depth, double min_width, long max_boxes):
    cdef _Bound bd = _bind(tape)
    cdef int cap = max_depth + 4
    cdef double* blo = <double*>malloc(cap * sizeof(double))
    cdef double* bhi = <double*>malloc(cap * sizeof(double))
    cdef int* bdepth = <int*>malloc(cap * sizeof(int))
    cdef int top = 0, depth, status = 0
    cdef bint unresolved = False
    cdef long boxes = 0
    cdef double lo, hi, flo, fhi, m, witness = NAN
    if not (blo and bhi and bdepth):
        free(blo)
        free(bhi)
        free(bdepth)
        raise MemoryError()
    blo[0] = a
    bhi[0] = b
    bdepth[0] = 0
    top = 1
    with nogil:
        while top > 0:
            top -= 1
            lo = blo[top]
            hi = bhi[top]
            depth = bdepth[top]
            boxes += 1
            if boxes > max_boxes:
                status = -1
                break
            interval(&bd.t, &bd.w, lo, hi, &flo, &fhi)
            if flo > fhi or fhi < c:
                continue
            m = mid(lo, hi)
            if point(&bd.t, bd.w.s, m) >= c:
                status = 1
                witness = m
                break
            if depth >= max_depth or hi - lo <= min_width or m <= lo or m >= hi:
                unresolved = True
                continue
            blo[top] = m
            bhi[top] = hi
            bdepth[top] = depth + 1
            blo[top + 1] = lo
            bhi[top + 1] = m
            bdepth[top + 1] = depth + 1
            top += 2
    free(blo)
    free(bhi)
    free(bdepth)
    if status == 0 and unresolved:
        status = -1
    return status, witness, boxes
