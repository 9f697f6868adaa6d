"""Blowup charts as presented rings, ideal sheaves and chart gluing.

The model of the blowup of D = Q[x...] along a center (a_1, ..., a_n) is
covered by n charts.  Chart eps is the subring D[a_1/a_eps, ..., a_n/a_eps]
of K = Frac(D), presented as

    D_eps = Q[x..., y_1, ..., y_n] / P_eps      (y_eps omitted: a_eps/a_eps = 1)

where P_eps is the saturation of the linear relations (a_eps*y_i - a_i)
by a_eps.  Saturating is exactly what cuts the presentation down to the
kernel of y_i |-> a_i/a_eps, so D_eps really is a subring of K; the
builder verifies P_eps meets D in (0) and that every relation generator
dies under the embedding.

An ideal sheaf is a family of chart ideals; it glues iff for every pair
of charts the two ideals agree after inverting the other chart's
coordinate, which is tested by saturation membership (no localized rings
are ever formed).
"""

from __future__ import annotations

from dataclasses import dataclass

from ._util import pmap
from .errors import CertificationError, UsageError
from .ideals import (
    GREVLEX,
    Ideal,
    QuotientCtx,
    eliminate,
    member,
    same_ideal,
    saturate,
)
from .nagata import TFrac
from .poly import Poly, VarTable, subst_common_den


@dataclass(frozen=True, eq=False)
class Chart:
    """One affine chart of the blowup, as a presented ring."""

    index: int
    table: VarTable
    relations: Ideal
    embedding: dict  # chart variable name -> (a_i, a_eps) over the ground table
    ctx: QuotientCtx
    tctx: QuotientCtx

    @property
    def yvars(self):
        return tuple(n for n in self.table.names if n in self.embedding)

    def var_index(self, name):
        """Center position encoded in a chart variable name y<k>."""
        return int(name[1:]) - 1


@dataclass(frozen=True)
class BlowupModel:
    ground: VarTable
    center: tuple
    charts: tuple

    def chart_var(self, target_chart, center_index):
        """Name of a_center_index / a_target in the target chart's table."""
        if center_index == target_chart.index:
            return None
        return f"y{center_index + 1}"


@dataclass(frozen=True)
class IdealSheaf:
    """Per-chart ideal data (the chart description of an ideal on the model)."""

    model: BlowupModel
    per_chart: tuple

    def __post_init__(self):
        if len(self.per_chart) != len(self.model.charts):
            raise UsageError("sheaf must assign one ideal per chart")
        for chart, J in zip(self.model.charts, self.per_chart):
            if J.table != chart.table:
                raise UsageError(
                    f"sheaf component for chart {chart.index + 1} uses the wrong table"
                )


def build_model(ground, center):
    """Construct the chart presentation of the blowup along the center.

    The center generators must be nonzero elements of the ground ring.
    """
    center = tuple(center)
    if not center:
        raise UsageError("empty center")
    if ground.has_t:
        raise UsageError("ground table must not contain t")
    for a in center:
        if a.table != ground:
            raise UsageError("center generators must live in the ground table")
        if not a.terms:
            raise UsageError("center generators must be nonzero")
    n = len(center)
    charts = []
    for eps in range(n):
        ynames = tuple(f"y{i + 1}" for i in range(n) if i != eps)
        ctable = ground.extend(ynames)
        a_eps = center[eps].cast(ctable)
        linear = []
        embedding = {}
        for i in range(n):
            if i == eps:
                continue
            yi = Poly.var(ctable, f"y{i + 1}")
            linear.append(a_eps * yi - center[i].cast(ctable))
            embedding[f"y{i + 1}"] = (center[i], center[eps])
        if linear:
            relations = saturate(Ideal(tuple(linear), GREVLEX, ctable), a_eps)
        else:
            relations = Ideal((), GREVLEX, ctable)
        contracted = eliminate(relations, ynames) if ynames else relations
        if not contracted.is_zero():
            raise CertificationError(
                f"chart {eps + 1}: relations meet the ground ring nontrivially"
            )
        _check_embedding(relations, embedding, center[eps], ground)
        ctx = QuotientCtx(ctable, relations.gens)
        tctx = QuotientCtx(ctable.with_t(), relations.gens)
        charts.append(Chart(eps, ctable, relations, embedding, ctx, tctx))
    return BlowupModel(ground, center, tuple(charts))


def _check_embedding(relations, embedding, a_eps, ground):
    """Every relation generator must vanish under y_i -> a_i / a_eps."""
    nums = {name: ai for name, (ai, _) in embedding.items()}
    for g in relations.gens:
        num, _ = subst_common_den(g, nums, a_eps, ground)
        if num.terms:
            raise CertificationError(
                f"relation {g} does not vanish under the chart embedding"
            )


def embed(chart, f, ground):
    """Image of a chart element in K, as a (numerator, denominator) pair."""
    nums = {name: ai for name, (ai, _) in chart.embedding.items()}
    a_eps = next(iter(chart.embedding.values()))[1] if chart.embedding else None
    if a_eps is None:
        return f.cast(ground), Poly.one(ground)
    return subst_common_den(f, nums, a_eps, ground)


def transition(model, source, target, f):
    """Re-express a source-chart element over the target chart.

    Substitutes y_i(source) = y_i(target) / y_source(target) and clears
    the minimal power of y_source(target); the result is a fraction whose
    image in K equals the image of f.
    """
    if f.table != source.table:
        raise UsageError("transition: element is not in the source chart table")
    if source.index == target.index:
        return TFrac.from_poly(f, target.ctx)
    y_src_name = f"y{source.index + 1}"
    den = Poly.var(target.table, y_src_name)
    nums = {}
    for name in source.embedding:
        i = source.var_index(name)
        if i == target.index:
            nums[name] = Poly.one(target.table)
        else:
            nums[name] = Poly.var(target.table, f"y{i + 1}")
    num, cleared = subst_common_den(f, nums, den, target.table)
    return TFrac(num, cleared, target.ctx)


@dataclass(frozen=True)
class GlueReport:
    ok: bool
    failing_pair: tuple | None = None
    failing_generator: Poly | None = None
    checks: tuple = ()


def glue_check(model, sheaf, jobs=1):
    """Do the chart ideals describe one ideal on the model?

    For each ordered chart pair (i, j), every generator of the j-th ideal
    is moved to chart i, cleared, and tested for membership in the
    saturation of (J_i + P_i) by y_j -- equality of the two extensions in
    the overlap ring D_i[1/y_j].  Returns the first failing pair if any.
    """
    charts = model.charts
    pairs = [
        (i, j)
        for i in range(len(charts))
        for j in range(len(charts))
        if i != j
    ]

    def check_pair(pair):
        i, j = pair
        ci, cj = charts[i], charts[j]
        y_j = Poly.var(ci.table, f"y{j + 1}")
        sat = saturate(
            Ideal(sheaf.per_chart[i].gens + ci.relations.gens, GREVLEX, ci.table),
            y_j,
        )
        for g in sheaf.per_chart[j].gens:
            if not g.terms:
                continue
            moved = transition(model, cj, ci, g)
            if not member(moved.num, sat).ok:
                return (pair, g, False)
        return (pair, None, True)

    results = pmap(check_pair, pairs, jobs)
    checks = tuple((p, ok) for p, _, ok in results)
    for pair, g, ok in results:
        if not ok:
            return GlueReport(False, pair, g, checks)
    return GlueReport(True, checks=checks)


def min_clearing_exponent(model, sheaf, i, j, g, cap=256):
    """Least k with y_j^k * (g moved to chart i) in J_i + P_i.

    Exists whenever the sheaf glues along (i, j); used to turn saturation
    memberships into plain cofactor witnesses.
    """
    ci, cj = model.charts[i], model.charts[j]
    target = Ideal(sheaf.per_chart[i].gens + ci.relations.gens, GREVLEX, ci.table)
    y_j = Poly.var(ci.table, f"y{j + 1}")
    cur = transition(model, cj, ci, g).num
    for k in range(cap):
        if member(cur, target).ok:
            return k
        cur = cur * y_j
    raise CertificationError(f"no clearing exponent below {cap} for pair ({i},{j})")


def pullback(model, I):
    """Sheaf of the extension of a ground ideal: same generators per chart."""
    if I.table != model.ground:
        raise UsageError("pullback expects an ideal of the ground ring")
    per_chart = tuple(
        Ideal(tuple(g.cast(c.table) for g in I.gens if g.terms), GREVLEX, c.table)
        for c in model.charts
    )
    return IdealSheaf(model, per_chart)


def contract_to_ground(chart, J):
    """J cap D: eliminate the chart variables from J + P_eps."""
    if J.table != chart.table:
        raise UsageError("contraction expects an ideal in the chart table")
    if not chart.yvars:
        return Ideal(J.gens + chart.relations.gens, GREVLEX, chart.table)
    merged = Ideal(J.gens + chart.relations.gens, GREVLEX, chart.table)
    return eliminate(merged, chart.yvars)


def sheaves_equal(model, s1, s2):
    """Chart-by-chart equality of the presented ideals (modulo relations)."""
    for chart, a, b in zip(model.charts, s1.per_chart, s2.per_chart):
        if not same_ideal(a, b, chart.ctx):
            return False
    return True
