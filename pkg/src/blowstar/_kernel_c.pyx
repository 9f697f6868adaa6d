# cython: language_level=3
# cython: boundscheck=False
# cython: wraparound=False
"""Compiled twin of blowstar._kernel_py.

Same interface, same semantics; loops are typed and the leading-monomial
scan compares exponent tuples directly instead of allocating key tuples.
Coefficients stay exact (Python Fractions).
"""

from fractions import Fraction

BACKEND = "compiled"

_ZERO = Fraction(0)


cpdef tuple mono_mul(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    out = [0] * n
    for i in range(n):
        out[i] = <object> a[i] + <object> b[i]
    return tuple(out)


cpdef bint mono_divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    for i in range(n):
        if <long> a[i] > <long> b[i]:
            return False
    return True


cpdef mono_div(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long d
    out = [0] * n
    for i in range(n):
        d = <long> a[i] - <long> b[i]
        if d < 0:
            return None
        out[i] = d
    return tuple(out)


cpdef tuple mono_lcm(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long x, y
    out = [0] * n
    for i in range(n):
        x = <long> a[i]
        y = <long> b[i]
        out[i] = x if x >= y else y
    return tuple(out)


cpdef long mono_deg(tuple a):
    cdef Py_ssize_t i
    cdef long s = 0
    for i in range(len(a)):
        s += <long> a[i]
    return s


cdef int _cmp_lex(tuple a, tuple b):
    cdef Py_ssize_t i
    cdef long x, y
    for i in range(len(a)):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            return 1 if x > y else -1
    return 0


cdef int _cmp_grevlex(tuple a, tuple b):
    cdef Py_ssize_t i, n = len(a)
    cdef long da = 0, db = 0, x, y
    for i in range(n):
        da += <long> a[i]
        db += <long> b[i]
    if da != db:
        return 1 if da > db else -1
    for i in range(n - 1, -1, -1):
        x = <long> a[i]
        y = <long> b[i]
        if x != y:
            # smaller exponent in the last differing slot wins
            return 1 if x < y else -1
    return 0


cdef int _cmp_sub_grevlex(tuple a, tuple b, tuple idx):
    cdef Py_ssize_t k, n = len(idx)
    cdef long da = 0, db = 0, x, y
    for k in range(n):
        da += <long> a[<Py_ssize_t> idx[k]]
        db += <long> b[<Py_ssize_t> idx[k]]
    if da != db:
        return 1 if da > db else -1
    for k in range(n - 1, -1, -1):
        x = <long> a[<Py_ssize_t> idx[k]]
        y = <long> b[<Py_ssize_t> idx[k]]
        if x != y:
            return 1 if x < y else -1
    return 0


cdef int _cmp_sub_lex(tuple a, tuple b, tuple idx):
    cdef Py_ssize_t k
    cdef long x, y
    for k in range(len(idx)):
        x = <long> a[<Py_ssize_t> idx[k]]
        y = <long> b[<Py_ssize_t> idx[k]]
        if x != y:
            return 1 if x > y else -1
    return 0


cdef tuple _block_indices(tuple mask):
    elim = []
    rest = []
    cdef Py_ssize_t i
    for i in range(len(mask)):
        if mask[i]:
            elim.append(i)
        else:
            rest.append(i)
    return tuple(elim), tuple(rest)


cdef int _cmp(tuple a, tuple b, object spec):
    cdef int r
    kind = spec[0]
    if kind == "grevlex":
        return _cmp_grevlex(a, b)
    if kind == "lex":
        return _cmp_lex(a, b)
    # block
    elim, rest = _block_indices(spec[1])
    r = _cmp_sub_grevlex(a, b, elim)
    if r != 0:
        return r
    if spec[2] == "lex":
        return _cmp_sub_lex(a, b, rest)
    return _cmp_sub_grevlex(a, b, rest)


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def order_key(spec):
    """Key callable; identical output to the pure twin (used for sorting)."""
    kind = spec[0]
    if kind == "lex":
        return lambda e: e
    if kind == "grevlex":
        return _grevlex_key
    if kind == "block":
        mask, inner = spec[1], spec[2]
        elim = tuple(i for i, m in enumerate(mask) if m)
        rest = tuple(i for i, m in enumerate(mask) if not m)
        if inner == "lex":
            def inner_key(sub):
                return sub
        else:
            inner_key = _grevlex_key

        def key(e):
            sub = tuple(e[i] for i in elim)
            return (_grevlex_key(sub), inner_key(tuple(e[i] for i in rest)))

        return key
    raise ValueError(f"unknown order spec {spec!r}")


cdef tuple _max_mono(dict terms, object spec):
    cdef tuple best = None
    for m in terms:
        if best is None or _cmp(<tuple> m, best, spec) > 0:
            best = <tuple> m
    return best


def make_entry(dict terms, spec):
    lm = _max_mono(terms, spec)
    return (terms, lm, terms[lm])


def spoly(a, b, spec):
    at, alm, alc = a
    bt, blm, blc = b
    l = mono_lcm(<tuple> alm, <tuple> blm)
    qa = mono_div(l, <tuple> alm)
    qb = mono_div(l, <tuple> blm)
    cdef dict out = {}
    for m, c in (<dict> at).items():
        out[mono_mul(<tuple> m, <tuple> qa)] = c / alc
    for m, c in (<dict> bt).items():
        mm = mono_mul(<tuple> m, <tuple> qb)
        nv = out.get(mm, _ZERO) - c / blc
        if nv:
            out[mm] = nv
        else:
            out.pop(mm, None)
    return out


def normal_form(terms, basis, spec, track=False):
    cdef dict work = dict(terms)
    cdef dict rem = {}
    cdef list quo = [dict() for _ in basis] if track else None
    cdef Py_ssize_t bi, nb = len(basis)
    cdef bint reduced
    while work:
        m = _max_mono(work, spec)
        c = work.pop(m)
        reduced = False
        for bi in range(nb):
            bt, blm, blc = basis[bi]
            q = mono_div(<tuple> m, <tuple> blm)
            if q is None:
                continue
            fac = c / blc
            for bm, bc in (<dict> bt).items():
                if bm == blm:
                    continue
                mm = mono_mul(<tuple> bm, <tuple> q)
                nv = work.get(mm, _ZERO) - fac * bc
                if nv:
                    work[mm] = nv
                else:
                    work.pop(mm, None)
            if track:
                (<dict> quo[bi])[q] = (<dict> quo[bi]).get(q, _ZERO) + fac
            reduced = True
            break
        if not reduced:
            rem[m] = c
    if track:
        return rem, quo
    return rem
