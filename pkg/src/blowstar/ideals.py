"""Groebner bases and the ideal calculus over Q[x...] and its quotients.

The engine is Buchberger's algorithm with the Gebauer-Moeller chain
criteria and the coprime-leading-term criterion; pairs are selected by the
normal strategy (smallest lcm under the ambient order, ties broken by
input index), so runs are deterministic for a fixed generator sequence.
Everything is exact over Q; no degree bounds, no modular shortcuts.

Quotient-ring computations never use dedicated quotient arithmetic: a
computation "in ambient/relations" adjoins the relation generators to the
ideal at hand (see QuotientCtx).

Reduced bases are cached per (table, order, generators); the cache is
write-once per key, so concurrent readers observe either nothing or the
complete basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificationError, UsageError
from .kernel import (
    make_entry,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    normal_form,
    order_key,
    spoly,
)
from .orders import GREVLEX, Order, block
from .poly import Poly, VarTable, coeffs_in_t

_F0 = Fraction(0)
_F1 = Fraction(1)


class Ideal:
    """Generator list plus a cached reduced Groebner basis under an order."""

    __slots__ = ("table", "gens", "order", "_gb")

    def __init__(self, gens, order=GREVLEX, table=None):
        gens = tuple(gens)
        if gens:
            table = gens[0].table
            for g in gens:
                if g.table != table:
                    raise UsageError("ideal generators live in different tables")
        elif table is None:
            raise UsageError("empty generator list requires an explicit table")
        self.table = table
        self.gens = gens
        self.order = order
        self._gb = None

    def basis(self):
        """The reduced Groebner basis (computed once, then cached)."""
        if self._gb is None:
            self._gb = reduced_groebner(self.gens, self.order, self.table)
        return self._gb

    @property
    def gb(self):
        return self._gb

    def is_zero(self):
        return not self.basis()

    def __repr__(self):
        inside = ", ".join(str(g) for g in self.gens) or "0"
        return f"Ideal({inside})"


class QuotientCtx:
    """Ambient table plus the relation ideal presenting a quotient ring.

    A computation "in ambient/relations" adjoins the relation generators
    before any basis computation; the relations themselves are t-free.
    """

    __slots__ = ("table", "relations")

    def __init__(self, table, relations=()):
        self.table = table
        rel = []
        for r in relations:
            r = r.cast(table)
            if r.terms:
                rel.append(r)
        self.relations = tuple(rel)

    def rel_for(self, other_table):
        return tuple(r.cast(other_table) for r in self.relations)

    def nf(self, f):
        """Normal form of f modulo the relations (in f's own table)."""
        rel = self.rel_for(f.table)
        if not rel:
            return f
        return nf_poly(f, Ideal(rel))

    def is_zero(self, f):
        return not self.nf(f).terms

    def __repr__(self):
        return f"QuotientCtx({self.table.names}, relations={len(self.relations)})"


# -- core engine ---------------------------------------------------------------


def _gm_update(G, P, entry, spec):
    """Gebauer-Moeller pair update; appends entry to G and returns new pairs."""
    lf = entry[1]
    k = len(G)
    lmG = [g[1] for g in G]
    P = {
        p
        for p in P
        if (
            not mono_divides(lf, mono_lcm(lmG[p[0]], lmG[p[1]]))
            or mono_lcm(lmG[p[0]], lmG[p[1]]) == mono_lcm(lmG[p[0]], lf)
            or mono_lcm(lmG[p[0]], lmG[p[1]]) == mono_lcm(lmG[p[1]], lf)
        )
    }
    groups = {}
    for i in range(k):
        groups.setdefault(mono_lcm(lmG[i], lf), []).append(i)
    key = order_key(spec)
    minimal = []
    for L in sorted(groups, key=key):
        if not any(mono_divides(Lp, L) for Lp in minimal):
            minimal.append(L)
    fresh = set()
    for L in minimal:
        if not any(mono_lcm(lmG[i], lf) == mono_mul(lmG[i], lf) for i in groups[L]):
            fresh.add((min(groups[L]), k))
    G.append(entry)
    return P | fresh


def _vec_zero(n):
    return [dict() for _ in range(n)]


def _vec_axis(n, idx, width):
    v = _vec_zero(n)
    v[idx][(0,) * width] = _F1
    return v


def _acc_scaled(dst, src, mono, coeff):
    for m, c in src.items():
        mm = mono_mul(m, mono)
        nv = dst.get(mm, _F0) + coeff * c
        if nv:
            dst[mm] = nv
        else:
            dst.pop(mm, None)


def _vec_comb(n, parts):
    """Sum of (coeff, mono, vec) contributions."""
    out = _vec_zero(n)
    for coeff, mono, vec in parts:
        for slot, src in zip(out, vec):
            _acc_scaled(slot, src, mono, coeff)
    return out


def _vec_sub_quotients(vec, quo, others_vecs, n):
    """vec - sum_k quo_k * others_vecs[k], with quo_k a term dict."""
    out = [dict(slot) for slot in vec]
    for q, ov in zip(quo, others_vecs):
        for qm, qc in q.items():
            for slot, src in zip(out, ov):
                _acc_scaled(slot, src, qm, -qc)
    return out


def _buchberger(dict_gens, spec, width, track):
    n = len(dict_gens)
    G = []
    vecs = []
    P = set()
    key = order_key(spec)
    for idx, terms in enumerate(dict_gens):
        P = _gm_update(G, P, make_entry(terms, spec), spec)
        if track:
            vecs.append(_vec_axis(n, idx, width))
    while P:
        pair = min(P, key=lambda p: (key(mono_lcm(G[p[0]][1], G[p[1]][1])), p))
        P.discard(pair)
        i, j = pair
        s = spoly(G[i], G[j], spec)
        svec = None
        if track:
            l = mono_lcm(G[i][1], G[j][1])
            svec = _vec_comb(
                n,
                [
                    (_F1 / G[i][2], mono_div(l, G[i][1]), vecs[i]),
                    (-_F1 / G[j][2], mono_div(l, G[j][1]), vecs[j]),
                ],
            )
        if not s:
            continue
        if track:
            rem, quo = normal_form(s, G, spec, True)
            if rem:
                vecs.append(_vec_sub_quotients(svec, quo, vecs, n))
                P = _gm_update(G, P, make_entry(rem, spec), spec)
        else:
            rem = normal_form(s, G, spec)
            if rem:
                P = _gm_update(G, P, make_entry(rem, spec), spec)
    return G, vecs


def _reduce_basis(G, vecs, spec, n, track):
    """Minimalize, interreduce and make monic; keeps cofactors in step."""
    key = order_key(spec)
    order_idx = sorted(range(len(G)), key=lambda k: key(G[k][1]))
    kept = []
    for k in order_idx:
        if not any(mono_divides(G[j][1], G[k][1]) for j in kept):
            kept.append(k)
    entries = [G[k] for k in kept]
    kvecs = [vecs[k] for k in kept] if track else None
    for pos in range(len(entries)):
        others = entries[:pos] + entries[pos + 1 :]
        if track:
            rem, quo = normal_form(entries[pos][0], others, spec, True)
            ovecs = kvecs[:pos] + kvecs[pos + 1 :]
            kvecs[pos] = _vec_sub_quotients(kvecs[pos], quo, ovecs, n)
        else:
            rem = normal_form(entries[pos][0], others, spec)
        if not rem:
            raise CertificationError("interreduction erased a minimal basis element")
        entries[pos] = make_entry(rem, spec)
    # monic
    out = []
    for pos, (terms, lm, lc) in enumerate(entries):
        inv = _F1 / lc
        out.append({m: c * inv for m, c in terms.items()})
        if track:
            kvecs[pos] = [
                {m: c * inv for m, c in slot.items()} for slot in kvecs[pos]
            ]
    return out, kvecs


_GB_CACHE = {}
_GB_TRACKED_CACHE = {}


def _gb_core(gens, order, table, track):
    spec = order.spec_for(table)
    width = len(table)
    nonzero = [(i, g) for i, g in enumerate(gens) if g.terms]
    dict_gens = [dict(g.terms) for _, g in nonzero]
    G, vecs = _buchberger(dict_gens, spec, width, track)
    terms_out, vecs_out = _reduce_basis(G, vecs, spec, len(dict_gens), track)
    basis = tuple(Poly(table, t) for t in terms_out)
    if not track:
        return basis, None
    # re-expand cofactor columns to the original generator positions
    matrix = []
    for vec in vecs_out:
        row = [Poly.zero(table)] * len(gens)
        for (orig_idx, _), slot in zip(nonzero, vec):
            row[orig_idx] = Poly(table, slot)
        matrix.append(tuple(row))
    return basis, tuple(matrix)


def reduced_groebner(gens, order=GREVLEX, table=None):
    """Reduced Groebner basis of the ideal generated by gens (cached)."""
    gens = tuple(gens)
    if gens:
        table = gens[0].table
    elif table is None:
        raise UsageError("empty generator list requires an explicit table")
    key = (table, order, gens)
    hit = _GB_CACHE.get(key)
    if hit is None:
        hit, _ = _gb_core(gens, order, table, False)
        _GB_CACHE[key] = hit
    return hit


def reduced_groebner_tracked(gens, order=GREVLEX, table=None):
    """Reduced basis plus the cofactor matrix over the given generators.

    Row k of the matrix reconstructs basis[k] = sum_j matrix[k][j] * gens[j]
    exactly (an identity in the ambient polynomial ring).
    """
    gens = tuple(gens)
    if gens:
        table = gens[0].table
    elif table is None:
        raise UsageError("empty generator list requires an explicit table")
    key = (table, order, gens)
    hit = _GB_TRACKED_CACHE.get(key)
    if hit is None:
        basis, matrix = _gb_core(gens, order, table, True)
        _GB_CACHE.setdefault(key, basis)
        hit = (basis, matrix)
        _GB_TRACKED_CACHE[key] = hit
    return hit


def groebner(I):
    """Force the cached reduced basis and return the same ideal."""
    I.basis()
    return I


def _entries(basis, spec):
    return [make_entry(dict(b.terms), spec) for b in basis]


def nf_poly(f, I, ctx=None):
    """Normal form of f modulo GB(I + relations)."""
    gens = I.gens + (ctx.rel_for(I.table) if ctx else ())
    basis = reduced_groebner(gens, I.order, I.table)
    spec = I.order.spec_for(I.table)
    rem = normal_form(dict(f.terms), _entries(basis, spec), spec)
    return Poly(f.table, rem)


@dataclass(frozen=True)
class MemberResult:
    ok: bool
    remainder: Poly
    cofactors: tuple | None = None  # aligned with I.gens + ctx.relations

    def __bool__(self):
        return self.ok


def member(f, I, ctx=None, certificate=False):
    """Ideal membership modulo relations, optionally with a cofactor witness.

    The witness satisfies f = sum_j cofactors[j] * g_j exactly, where g_j
    ranges over I.gens followed by the relation generators.
    """
    if f.table != I.table:
        raise UsageError("member: polynomial and ideal tables differ")
    eff = I.gens + (ctx.rel_for(I.table) if ctx else ())
    spec = I.order.spec_for(I.table)
    if not certificate:
        basis = reduced_groebner(eff, I.order, I.table)
        rem = normal_form(dict(f.terms), _entries(basis, spec), spec)
        return MemberResult(not rem, Poly(f.table, rem))
    basis, matrix = reduced_groebner_tracked(eff, I.order, I.table)
    rem, quo = normal_form(dict(f.terms), _entries(basis, spec), spec, True)
    cof = [Poly.zero(I.table) for _ in eff]
    for q, row in zip(quo, matrix):
        if not q:
            continue
        qp = Poly(I.table, q)
        for j, mj in enumerate(row):
            if mj.terms:
                cof[j] = cof[j] + qp * mj
    return MemberResult(not rem, Poly(f.table, rem), tuple(cof))


def is_unit_ideal(I, ctx=None):
    """True iff the reduced basis of I + relations is {1}."""
    return member(Poly.one(I.table), I, ctx).ok


def same_ideal(I, J, ctx=None):
    """Equality as ideals (of the quotient ring when ctx is given)."""
    if I.table != J.table:
        raise UsageError("same_ideal: tables differ")
    rel = ctx.rel_for(I.table) if ctx else ()
    a = reduced_groebner(I.gens + rel, I.order, I.table)
    b = reduced_groebner(J.gens + rel, I.order, I.table)
    return a == b


def eliminate(I, drop):
    """Generators of I intersected with the subring omitting ``drop``."""
    drop = frozenset(drop)
    if not drop:
        return I
    for d in drop:
        I.table.index(d)
    basis = reduced_groebner(I.gens, block(drop), I.table)
    idx = [I.table.index(d) for d in drop]
    out_table = I.table.without(drop)
    keep = []
    for b in basis:
        if all(all(m[i] == 0 for i in idx) for m in b.terms):
            keep.append(b.cast(out_table))
    out_order = GREVLEX if I.order.kind == "block" else I.order
    return Ideal(tuple(keep), out_order, out_table)


def _exact_div(h, f):
    """Quotient h / f, valid only when the division is exact."""
    spec = GREVLEX.spec_for(h.table)
    rem, quo = normal_form(dict(h.terms), [make_entry(dict(f.terms), spec)], spec, True)
    if rem:
        raise CertificationError("expected exact division")
    return Poly(h.table, quo[0])


def colon(I, f, ctx=None):
    """The ideal quotient (I + relations : f) = {h : h*f in I + relations}."""
    if not f.terms:
        raise UsageError("colon by the zero polynomial")
    if f.table != I.table:
        raise UsageError("colon: tables differ")
    eff = I.gens + (ctx.rel_for(I.table) if ctx else ())
    aux = I.table.fresh_aux()
    t2 = I.table.extend((aux,))
    w = Poly.var(t2, aux)
    gens2 = [w * g.cast(t2) for g in eff if g.terms]
    gens2.append((Poly.one(t2) - w) * f.cast(t2))
    inter = eliminate(Ideal(gens2, GREVLEX, t2), {aux})
    quot = []
    for h in inter.gens:
        q = _exact_div(h, f)
        if q.terms and q not in quot:
            quot.append(q)
    return Ideal(tuple(quot), I.order, I.table)


def saturate(I, f, ctx=None, method="aux"):
    """The saturation (I + relations : f^infinity).

    ``aux`` adjoins 1 - w*f and eliminates w (one basis computation);
    ``iterate`` repeats colon until stable.  The two must agree -- the
    test suite cross-checks them.
    """
    if not f.terms:
        raise UsageError("saturate by the zero polynomial")
    if f.table != I.table:
        raise UsageError("saturate: tables differ")
    eff = I.gens + (ctx.rel_for(I.table) if ctx else ())
    if method == "aux":
        aux = I.table.fresh_aux()
        t2 = I.table.extend((aux,))
        w = Poly.var(t2, aux)
        gens2 = [g.cast(t2) for g in eff if g.terms]
        gens2.append(Poly.one(t2) - w * f.cast(t2))
        out = eliminate(Ideal(gens2, GREVLEX, t2), {aux})
        return Ideal(out.gens, I.order, I.table)
    if method == "iterate":
        cur = Ideal(eff, I.order, I.table)
        while True:
            nxt = colon(cur, f)
            if same_ideal(nxt, cur):
                return cur
            cur = nxt
    raise UsageError(f"unknown saturation method {method!r}")


def intersect(I, J, ctx=None):
    """I cap J, via w*I + (1-w)*J and elimination of the weight variable."""
    if I.table != J.table:
        raise UsageError("intersect: tables differ")
    rel = ctx.rel_for(I.table) if ctx else ()
    aux = I.table.fresh_aux()
    t2 = I.table.extend((aux,))
    w = Poly.var(t2, aux)
    one_minus = Poly.one(t2) - w
    gens2 = [w * g.cast(t2) for g in I.gens + rel if g.terms]
    gens2 += [one_minus * g.cast(t2) for g in J.gens + rel if g.terms]
    out = eliminate(Ideal(gens2, GREVLEX, t2) if gens2 else Ideal((), GREVLEX, t2), {aux})
    return Ideal(out.gens, I.order, I.table)


def content_ideal(arg, ctx=None):
    """Ideal of t-coefficients, in the t-free subring.

    For an Ideal the coefficients of all generators are used; this is the
    content of the whole ideal because the coefficients of any combination
    lie in the coefficient ideal of the generators.  Relation generators
    are adjoined when a ctx is given.
    """
    if isinstance(arg, Ideal):
        gens, table = arg.gens, arg.table
    else:
        gens, table = (arg,), arg.table
    coeffs = []
    for g in gens:
        if g.table.has_t:
            coeffs.extend(c for _, c in coeffs_in_t(g))
        else:
            coeffs.append(g)
    out_table = table.without(("t",)) if table.has_t else table
    out = []
    for c in coeffs:
        c = c.cast(out_table) if c.table != out_table else c
        if c.terms and c not in out:
            out.append(c)
    if ctx is not None:
        for r in ctx.rel_for(out_table):
            if r.terms and r not in out:
                out.append(r)
    return Ideal(tuple(out), GREVLEX, out_table)


# -- self-certification ---------------------------------------------------------


def certify_gb(gens, basis, order=GREVLEX, table=None):
    """Check that ``basis`` is a reduced Groebner basis containing gens.

    Verifies: monic reduced shape, every S-polynomial of the basis reduces
    to zero, and every generator reduces to zero.  (Containment of the
    basis in the ideal of gens is certified separately, by cofactors.)
    """
    if basis:
        table = basis[0].table
    elif table is None and gens:
        table = gens[0].table
    if table is None:
        return not gens or all(not g.terms for g in gens)
    spec = order.spec_for(table)
    entries = _entries(basis, spec)
    for i, (terms, lm, lc) in enumerate(entries):
        if lc != 1:
            return False
        for j, (_, lm2, _) in enumerate(entries):
            if i == j:
                continue
            if any(mono_divides(lm2, m) for m in terms):
                return False
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if normal_form(spoly(entries[i], entries[j], spec), entries, spec):
                return False
    for g in gens:
        if normal_form(dict(g.terms), entries, spec):
            return False
    return True
