"""Pure-Python polynomial reduction kernel.

This module holds the hot loops of the Groebner engine: monomial
arithmetic, monomial-order keys, s-polynomials and division-based normal
forms.  A compiled twin (``blowstar._kernel_c``) implements the identical
interface; ``blowstar.kernel`` picks one at import time.  Keep the two in
lock-step.

Data conventions:

* a monomial is a tuple of non-negative ints, one slot per variable;
* a polynomial is a dict mapping monomials to nonzero ``Fraction``s
  (the zero polynomial is the empty dict);
* a basis entry is a triple ``(terms, lead_mono, lead_coeff)``;
* an order spec is ``("lex",)``, ``("grevlex",)`` or
  ``("block", mask, inner)`` where ``mask`` is a 0/1 tuple marking the
  eliminated positions and ``inner`` is ``"lex"`` or ``"grevlex"``.
"""

from fractions import Fraction

BACKEND = "pure"

_ZERO = Fraction(0)


def mono_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a, b):
    """True when monomial a divides b."""
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def mono_div(a, b):
    """Quotient a/b as a monomial, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        d = x - y
        if d < 0:
            return None
        out.append(d)
    return tuple(out)


def mono_lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


def mono_deg(a):
    return sum(a)


def _grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def order_key(spec):
    """Return a callable mapping a monomial to a sortable key (max = leading)."""
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


def make_entry(terms, spec):
    """Build a basis entry (terms, lead monomial, lead coefficient)."""
    lm = max(terms, key=order_key(spec))
    return (terms, lm, terms[lm])


def spoly(a, b, spec):
    """S-polynomial of two basis entries (leading terms cancel exactly)."""
    at, alm, alc = a
    bt, blm, blc = b
    l = mono_lcm(alm, blm)
    qa = mono_div(l, alm)
    qb = mono_div(l, blm)
    out = {}
    for m, c in at.items():
        out[mono_mul(m, qa)] = c / alc
    for m, c in bt.items():
        mm = mono_mul(m, qb)
        nv = out.get(mm, _ZERO) - c / blc
        if nv:
            out[mm] = nv
        else:
            out.pop(mm, None)
    return out


def normal_form(terms, basis, spec, track=False):
    """Fully reduce ``terms`` by the basis entries.

    Every term divisible by some leading monomial is rewritten, top term
    first, so the result contains no term divisible by any basis lead.
    With ``track=True`` also returns the division quotients, one term dict
    per basis entry, satisfying  f = sum(q_i * g_i) + remainder  exactly.
    """
    key = order_key(spec)
    work = dict(terms)
    rem = {}
    quo = [dict() for _ in basis] if track else None
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for bi in range(len(basis)):
            bt, blm, blc = basis[bi]
            q = mono_div(m, blm)
            if q is None:
                continue
            fac = c / blc
            for bm, bc in bt.items():
                if bm == blm:
                    continue
                mm = mono_mul(bm, q)
                nv = work.get(mm, _ZERO) - fac * bc
                if nv:
                    work[mm] = nv
                else:
                    work.pop(mm, None)
            if track:
                quo[bi][q] = quo[bi].get(q, _ZERO) + fac
            break
        else:
            rem[m] = c
    if track:
        return rem, quo
    return rem
