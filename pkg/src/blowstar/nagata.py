"""Operations at the level of Nagata function rings R(t).

For a presented ring R = ambient/relations, the ring R(t) is the
localization of R[t] at the multiplicative set of primitive polynomials
(those whose t-coefficients generate the unit ideal of R).  Membership of
a fraction u = num/den in R(t) is decided through the denominator ideal

    J = (den + relations : num)  in  ambient[t],

because u lies in R(t) exactly when J contains a primitive polynomial,
which happens exactly when the content ideal of J is the unit ideal of R:
one direction is immediate (content is monotone), and for the other the
spaced combination of generators of J with jointly-unit content is itself
primitive, since spacing the summands by large powers of t keeps their
coefficient blocks disjoint.

Every positive verdict carries a witness pair (f, g) with g primitive and
num*g - f*den a combination of relation generators, so certificates can
be re-checked by pure ring arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotInNagataRing, UsageError
from .ideals import (
    GREVLEX,
    Ideal,
    QuotientCtx,
    colon,
    content_ideal,
    is_unit_ideal,
    member,
    reduced_groebner,
)
from .poly import Poly, coeffs_in_t, deg_t


class TFrac:
    """Fraction of polynomials (possibly involving t) over a presented ring.

    Equality is cross-multiplication modulo the relations; fractions are
    never reduced (no multivariate gcd anywhere in the toolkit).
    """

    __slots__ = ("num", "den", "ctx")

    def __init__(self, num, den, ctx):
        if num.table != ctx.table or den.table != ctx.table:
            raise UsageError("fraction parts must live in the context table")
        if ctx.is_zero(den):
            raise UsageError("fraction denominator is zero in the quotient ring")
        self.num = num
        self.den = den
        self.ctx = ctx

    @classmethod
    def from_poly(cls, p, ctx):
        return cls(p.cast(ctx.table), Poly.one(ctx.table), ctx)

    def is_zero(self):
        return self.ctx.is_zero(self.num)

    def inverse(self):
        if self.is_zero():
            raise UsageError("inverse of the zero fraction")
        return TFrac(self.den, self.num, self.ctx)

    def __mul__(self, other):
        if isinstance(other, Poly):
            other = TFrac.from_poly(other, self.ctx)
        return TFrac(self.num * other.num, self.den * other.den, self.ctx)

    def __add__(self, other):
        if isinstance(other, Poly):
            other = TFrac.from_poly(other, self.ctx)
        return TFrac(
            self.num * other.den + other.num * self.den,
            self.den * other.den,
            self.ctx,
        )

    def mul_term(self, mono, coeff=1):
        return TFrac(self.num.mul_term(mono, coeff), self.den, self.ctx)

    def eq_mod(self, other):
        """Equality as elements of the fraction field of ambient/relations."""
        return self.ctx.is_zero(self.num * other.den - other.num * self.den)

    def cast(self, ctx):
        return TFrac(self.num.cast(ctx.table), self.den.cast(ctx.table), ctx)

    def __repr__(self):
        return f"TFrac(({self.num})/({self.den}))"


def is_primitive(f, ctx=None):
    """True iff the t-coefficients of f generate the unit ideal of R."""
    if not f.terms:
        return False
    return is_unit_ideal(content_ideal(f, ctx))


def spaced_combination(fs, ctx=None):
    """h = sum f_i * t^((i-1)*c) with c = 1 + max_i deg_t f_i.

    The spacing keeps the coefficient blocks of the summands disjoint, so
    content(h) is exactly the sum of the input contents; in particular h
    is primitive whenever the joint content is the unit ideal.
    """
    fs = list(fs)
    if not fs:
        raise UsageError("spaced_combination of an empty list")
    table = fs[0].table.with_t()
    fs = [f.cast(table) for f in fs]
    c = 1 + max(deg_t(f) for f in fs)
    ti = table.index("t")
    out = Poly.zero(table)
    for i, f in enumerate(fs):
        mono = [0] * len(table)
        mono[ti] = (i) * c
        out = out + f.mul_term(tuple(mono), 1)
    return out


@dataclass
class NagataCert:
    """Re-checkable verdict for membership of num/den in R(t).

    Member case: num * g = f * den modulo the relations, with g primitive;
    the primitivity of g and the cross-multiplied equality both carry
    cofactor witnesses.  Non-member case: the reduced basis of the content
    ideal of the denominator ideal J, which is proper, plus the basis of J
    itself so that the obstruction can be replayed.
    """

    member: bool
    num: Poly
    den: Poly
    relations: tuple
    f: Poly | None = None
    g: Poly | None = None
    content_gb: tuple | None = None
    j_basis: tuple = ()
    g_content_gens: tuple = ()
    g_unit_cofactors: tuple = ()
    equality_cofactors: tuple = ()

    @property
    def verdict(self):
        return "member" if self.member else "non-member"


def _pick_primitive(j_basis, ctx):
    """First basis element with unit content, else the spaced combination."""
    for b in j_basis:
        if is_primitive(b, ctx):
            return b
    return spaced_combination(j_basis, ctx)


def nagata_member(u):
    """Decide u in R(t) and produce a certificate either way."""
    ctx = u.ctx
    twt = ctx.table.with_t()
    num = u.num.cast(twt)
    den = u.den.cast(twt)
    rel = ctx.rel_for(twt)
    tctx = QuotientCtx(twt, rel)
    den_ideal = Ideal((den,), GREVLEX, twt)
    # fast path: u is (congruent to) a polynomial, covered by g = 1
    mr = member(num, den_ideal, tctx, certificate=True)
    if mr.ok:
        return _member_cert(num, den, rel, Poly.one(twt), mr, tctx, j_basis=())
    J = colon(den_ideal, num, tctx)
    j_basis = reduced_groebner(J.gens, GREVLEX, twt)
    C = content_ideal(Ideal(j_basis, GREVLEX, twt) if j_basis else Ideal((), GREVLEX, twt), tctx)
    if not is_unit_ideal(C):
        content_gb = reduced_groebner(C.gens, GREVLEX, C.table)
        return NagataCert(False, num, den, rel, content_gb=content_gb, j_basis=j_basis)
    g = _pick_primitive(j_basis, tctx)
    mr2 = member(g * num, den_ideal, tctx, certificate=True)
    if not mr2.ok:
        raise UsageError("internal: colon produced a non-multiplier")  # pragma: no cover
    return _member_cert(num, den, rel, g, mr2, tctx, j_basis=j_basis)


def _member_cert(num, den, rel, g, mr, tctx, j_basis):
    f = mr.cofactors[0]
    equality_cofactors = mr.cofactors[1:]
    cg = content_ideal(g, tctx)
    unit = member(Poly.one(cg.table), cg, certificate=True)
    if not unit.ok:  # pragma: no cover - g was chosen primitive
        raise UsageError("internal: witness multiplier is not primitive")
    return NagataCert(
        True,
        num,
        den,
        rel,
        f=f,
        g=g,
        j_basis=j_basis,
        g_content_gens=cg.gens,
        g_unit_cofactors=unit.cofactors,
        equality_cofactors=equality_cofactors,
    )


def recheck_nagata_cert(cert):
    """Replay a membership certificate by plain ring arithmetic.

    Member case: checks g is primitive via the unit cofactors and that
    num*g - f*den equals the relation combination.  Non-member case:
    checks the listed content basis is proper and each listed denominator
    ideal element really multiplies num into (den) + relations.
    """
    if cert.member:
        lhs = cert.num * cert.g - cert.f * cert.den
        rel_comb = Poly.zero(lhs.table)
        for c, r in zip(cert.equality_cofactors, cert.relations):
            rel_comb = rel_comb + c * r
        if lhs != rel_comb:
            return False, "cross-multiplied equality"
        if not cert.g_content_gens:
            return False, "missing content generators"
        # primitivity: 1 = sum q_i * c_i over the content generators of g,
        # each of which must be an actual t-coefficient of g or a relation
        acc = Poly.zero(cert.g_content_gens[0].table)
        for q, c in zip(cert.g_unit_cofactors, cert.g_content_gens):
            acc = acc + q * c
        if not acc.is_one():
            return False, "primitivity of g"
        tfree = cert.g_content_gens[0].table
        actual = [c for _, c in coeffs_in_t(cert.g)] if cert.g.table.has_t else [cert.g.cast(tfree)]
        allowed = {c for c in actual if c.terms}
        allowed.update(r.cast(tfree) for r in cert.relations)
        for c in cert.g_content_gens:
            if c not in allowed:
                return False, "content generators do not match g"
        return True, None
    if not cert.content_gb or any(b.is_one() for b in cert.content_gb):
        return False, "content basis is unit or empty"
    return True, None


@dataclass
class UnitResult:
    ok: bool
    num_cert: NagataCert | None = None
    den_cert: NagataCert | None = None
    reason: str | None = None

    def __bool__(self):
        return self.ok


def nagata_is_unit(u):
    """True iff u and 1/u both lie in R(t), i.e. u = f/g with f, g primitive."""
    if u.is_zero():
        return UnitResult(False, reason="zero element")
    c1 = nagata_member(u)
    if not c1.member:
        return UnitResult(False, num_cert=c1, reason="element not in R(t)")
    c2 = nagata_member(u.inverse())
    if not c2.member:
        return UnitResult(False, num_cert=c1, den_cert=c2, reason="inverse not in R(t)")
    return UnitResult(True, num_cert=c1, den_cert=c2)


@dataclass
class ExtMemberCert:
    """Witness for h in I*R(t) (h a polynomial, I given by R[t]-generators).

    Positive: multiplier * h = sum cofactors_j * gen_j + relation part,
    with the multiplier primitive.  Negative: the proper content basis of
    the colon ideal (I + relations : h).
    """

    ok: bool
    h: Poly
    multiplier: Poly | None = None
    multiplier_cert: NagataCert | None = None
    cofactors: tuple = ()
    colon_basis: tuple = ()
    colon_content_gb: tuple = ()


def extension_member(h, I0, ctx):
    """Decide h in I0 * R(t), by the same content criterion as nagata_member."""
    twt = I0.table
    tctx = QuotientCtx(twt, ctx.rel_for(twt))
    h = h.cast(twt)
    mr = member(h, I0, tctx, certificate=True)
    if mr.ok:
        return ExtMemberCert(True, h, Poly.one(twt), cofactors=mr.cofactors)
    J = colon(I0, h, tctx)
    j_basis = reduced_groebner(J.gens, GREVLEX, twt)
    C = content_ideal(Ideal(j_basis, GREVLEX, twt) if j_basis else Ideal((), GREVLEX, twt), tctx)
    if not is_unit_ideal(C):
        gb = reduced_groebner(C.gens, GREVLEX, C.table)
        return ExtMemberCert(False, h, colon_basis=j_basis, colon_content_gb=gb)
    g = _pick_primitive(j_basis, tctx)
    mr2 = member(g * h, I0, tctx, certificate=True)
    if not mr2.ok:  # pragma: no cover
        raise UsageError("internal: colon produced a non-multiplier")
    return ExtMemberCert(True, h, g, cofactors=mr2.cofactors)


@dataclass
class RelevanceReport:
    """Outcome of the relevance test for an ideal of R(t).

    ``relevant`` means the ideal equals C*R(t) for C the content ideal of
    the normalized generators; the report carries both inclusion
    directions as certificates.
    """

    relevant: bool
    content_gens: tuple
    failing_coefficient: Poly | None
    normalized: tuple
    member_certs: tuple
    coefficient_certs: tuple = ()
    reverified: bool = False
    ideal: Ideal | None = None


def is_relevant(gens, ctx):
    """Relevance test for the ideal of R(t) generated by the given fractions.

    Each generator must lie in R(t); it is normalized to its polynomial
    form f = u*g.  The ideal is relevant iff every t-coefficient of every
    normalized generator lies back in the extension, which is decided by
    the colon/content criterion.
    """
    gens = list(gens)
    twt = ctx.table.with_t()
    tctx = QuotientCtx(twt, ctx.rel_for(twt))
    member_certs = []
    normalized = []
    for u in gens:
        if isinstance(u, Poly):
            u = TFrac.from_poly(u, tctx)
        cert = nagata_member(u)
        if not cert.member:
            raise NotInNagataRing(
                f"generator ({u.num})/({u.den}) is not in R(t)", cert
            )
        member_certs.append(cert)
        if cert.f.terms:
            normalized.append(cert.f)
    I0 = Ideal(tuple(normalized), GREVLEX, twt)
    C = content_ideal(I0, tctx)
    coeff_gens = tuple(c for c in C.gens if c not in set(tctx.rel_for(C.table)))
    coefficient_certs = []
    for fpoly in normalized:
        for _, c in coeffs_in_t(fpoly):
            cert = extension_member(c.cast(twt), I0, tctx)
            coefficient_certs.append((c, cert))
            if not cert.ok:
                return RelevanceReport(
                    False,
                    coeff_gens,
                    c,
                    tuple(normalized),
                    tuple(member_certs),
                    tuple(coefficient_certs),
                    ideal=I0,
                )
    # re-verify the other inclusion: every normalized generator lies in C*R[t]
    c_twt = Ideal(tuple(g.cast(twt) for g in coeff_gens), GREVLEX, twt) if coeff_gens else Ideal((), GREVLEX, twt)
    for fpoly in normalized:
        if not member(fpoly, c_twt, tctx).ok:  # pragma: no cover - holds by construction
            raise UsageError("internal: generator escapes its own content ideal")
    return RelevanceReport(
        True,
        coeff_gens,
        None,
        tuple(normalized),
        tuple(member_certs),
        tuple(coefficient_certs),
        reverified=True,
        ideal=I0,
    )
