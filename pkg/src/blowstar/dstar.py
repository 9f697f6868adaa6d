"""The intersection ring of all chart Nagata rings, and its ideal calculus.

For a blowup model with charts D_1, ..., D_n the ring of interest is

    D* = D_1(t) cap ... cap D_n(t)   (inside K(t), K = Frac(D)),

so membership of a fraction is simply chartwise Nagata membership, one
certificate per chart.  Ideals of D* have no finite presentation of their
own; they are represented extrinsically by their chart extensions, and two
representations are equal iff the extensions agree chart by chart.

The bridge between ideal sheaves and ideals of D* works in both directions:

* ``sheaf_to_relevant`` equips a glued sheaf {J_eps} with honest global
  generators g * (a_eps/theta)^N, where theta is the t-spread of the
  center generators.  Each such element lies in D* (theta/a_delta is
  primitive in every chart delta), its extension in its home chart is
  exactly (g), and gluing provides the clearing exponents that keep the
  cross-chart extensions inside the sheaf; so the generated ideal extends
  to exactly J_eps * D_eps(t) everywhere.
* ``relevant_to_sheaf`` normalizes given generators chartwise, runs the
  relevance test, and contracts via content ideals (extension followed by
  contraction is the identity, as the chart Nagata extension is faithfully
  flat).

``phi_survival`` certifies the unit-escape construction: given elements of
D* that are units in nominated charts covering the model, their t-spread
combination is a unit in every chart.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._util import pmap
from .errors import CertificationError, UsageError
from .ideals import GREVLEX, Ideal, QuotientCtx, same_ideal
from .nagata import (
    NagataCert,
    TFrac,
    is_primitive,
    is_relevant,
    nagata_is_unit,
    nagata_member,
)
from .blowup import IdealSheaf, glue_check, min_clearing_exponent
from .poly import Poly, deg_t, subst_common_den


def ground_t_ctx(model):
    """Context for fractions over the ground ring with t adjoined."""
    return QuotientCtx(model.ground.with_t(), ())


@dataclass(frozen=True, eq=False)
class DStarElement:
    """A fraction together with one membership certificate per chart."""

    model: object
    value: TFrac
    chart_certs: tuple


@dataclass(frozen=True, eq=False)
class DStarVerdict:
    member: bool
    element: DStarElement | None
    failing_chart: int | None
    refutation: NagataCert | None
    chart_certs: tuple

    def __bool__(self):
        return self.member


def dstar_member(model, u, jobs=1):
    """Chartwise membership test; member iff every chart certifies."""
    certs = pmap(
        lambda chart: nagata_member(u.cast(chart.tctx)), model.charts, jobs
    )
    for i, cert in enumerate(certs):
        if not cert.member:
            return DStarVerdict(False, None, i, cert, tuple(certs))
    return DStarVerdict(
        True, DStarElement(model, u, tuple(certs)), None, None, tuple(certs)
    )


def theta(model, ordering=None):
    """The t-spread of the center generators: sum a_{pi(i)} * t^i.

    Any ordering works; the default is the given center order.
    """
    n = len(model.center)
    ordering = tuple(range(n)) if ordering is None else tuple(ordering)
    if sorted(ordering) != list(range(n)):
        raise UsageError(f"ordering must be a permutation of 0..{n - 1}")
    twt = model.ground.with_t()
    t = Poly.var(twt, "t")
    out = Poly.zero(twt)
    for i, idx in enumerate(ordering):
        out = out + model.center[idx].cast(twt) * t**i
    return out


def chart_theta(model, chart, ordering=None):
    """theta / a_eps written directly in the chart: sum y_{pi(i)} * t^i.

    The coefficient at the chart's own position is 1, which is what makes
    this polynomial primitive in every chart.
    """
    n = len(model.center)
    ordering = tuple(range(n)) if ordering is None else tuple(ordering)
    twt = chart.tctx.table
    t = Poly.var(twt, "t")
    out = Poly.zero(twt)
    for i, idx in enumerate(ordering):
        if idx == chart.index:
            coeff = Poly.one(twt)
        else:
            coeff = Poly.var(twt, f"y{idx + 1}")
        out = out + coeff * t**i
    return out


@dataclass(frozen=True, eq=False)
class ThetaReport:
    ok: bool
    theta: Poly
    quotient_verdicts: tuple  # one DStarVerdict per center generator, for a/theta
    chart_primitive: tuple  # one bool per chart, for theta/a_eps


def verify_theta(model, ordering=None, jobs=1):
    """Certify a/theta in D* for every center generator a, and that
    theta/a_eps is primitive in each chart."""
    th = theta(model, ordering)
    gctx = ground_t_ctx(model)
    verdicts = tuple(
        dstar_member(model, TFrac(a.cast(gctx.table), th, gctx), jobs)
        for a in model.center
    )
    prim = tuple(
        is_primitive(chart_theta(model, chart, ordering), chart.tctx)
        for chart in model.charts
    )
    ok = all(v.member for v in verdicts) and all(prim)
    return ThetaReport(ok, th, verdicts, prim)


@dataclass(frozen=True, eq=False)
class PhiReport:
    phi: TFrac
    spacing: int
    input_unit_certs: tuple  # UnitResult per alpha, in its nominated chart
    chart_unit_certs: tuple  # UnitResult per chart for phi


def phi_survival(model, alphas, unit_charts, jobs=1):
    """Combine D*-elements into a single unit of every chart Nagata ring.

    alphas[i] must be a unit of the chart nominated by unit_charts[i]; the
    nominated charts must cover the model.  phi = sum alpha_i * t^(i*c)
    with c exceeding every t-degree that can appear when the fractions are
    put over a common denominator in any chart, so the numerator content
    in chart eps picks up the full content of the summand whose alpha is a
    unit there; both numerator and denominator are then primitive.
    """
    alphas = list(alphas)
    unit_charts = list(unit_charts)
    if len(alphas) != len(unit_charts):
        raise UsageError("need one nominated chart per element")
    if not alphas:
        raise UsageError("empty combination")
    covered = set(unit_charts)
    if covered != set(range(len(model.charts))):
        raise UsageError(
            "nominated charts must cover the model "
            f"(got {sorted(covered)} of 0..{len(model.charts) - 1})"
        )
    input_certs = []
    for alpha, eps in zip(alphas, unit_charts):
        res = nagata_is_unit(alpha.value.cast(model.charts[eps].tctx))
        if not res.ok:
            raise UsageError(
                f"element {alpha.value!r} is not a unit in chart {eps + 1}: {res.reason}"
            )
        input_certs.append(res)
    # spacing from the certificate degrees actually in hand: bigger than
    # every deg_t f_i + sum_k deg_t g_k that a common denominator can make
    worst = 0
    for chart_idx in range(len(model.charts)):
        max_f = 0
        sum_g = 0
        for alpha in alphas:
            cert = alpha.chart_certs[chart_idx]
            max_f = max(max_f, deg_t(cert.f))
            sum_g += deg_t(cert.g)
        worst = max(worst, max_f + sum_g)
    c = 1 + worst
    gctx = ground_t_ctx(model)
    twt = gctx.table
    ti = twt.index("t")
    phi = None
    for i, alpha in enumerate(alphas):
        mono = [0] * len(twt)
        mono[ti] = i * c
        part = alpha.value.cast(gctx).mul_term(tuple(mono))
        phi = part if phi is None else phi + part
    chart_certs = pmap(
        lambda chart: nagata_is_unit(phi.cast(chart.tctx)), model.charts, jobs
    )
    for chart, res in zip(model.charts, chart_certs):
        if not res.ok:
            raise CertificationError(
                f"combination failed to be a unit in chart {chart.index + 1}"
            )
    return PhiReport(phi, c, tuple(input_certs), tuple(chart_certs))


@dataclass(frozen=True, eq=False)
class RelevantIdealRep:
    """Extrinsic representation of a relevant ideal of the intersection ring."""

    model: object
    gens: tuple  # DStarElement
    per_chart_ideal: tuple  # Ideal over chart-with-t tables
    per_chart_contraction: tuple  # Ideal over chart tables
    relevance_reports: tuple
    spread_exponent: int


def sheaf_to_relevant(model, sheaf, jobs=1):
    """Global generators for the ideal of D* cut out by a glued sheaf.

    Generator recipe: for each chart eps and each generator g of J_eps,
    emit  g * (a_eps/theta)^N  with N large enough that (i) the cleared
    ground form g*a_eps^d has a_eps-power to spare and (ii) the clearing
    exponents demanded by the gluing are available in every other chart.
    With that N, the home-chart extension of the emitted element is
    exactly (g) (theta/a_eps is a unit of D_eps(t)), and the cross-chart
    extensions stay inside the sheaf, so the generated ideal extends to
    J_eps * D_eps(t) in every chart.
    """
    glue = glue_check(model, sheaf, jobs)
    if not glue.ok:
        raise UsageError(
            f"sheaf does not glue: failing pair {tuple(p + 1 for p in glue.failing_pair)}"
        )
    gctx = ground_t_ctx(model)
    th = theta(model)
    # exponent bookkeeping per generator
    raw = []  # (eps, cleared ground numerator, d, needed N for this generator)
    for chart, J in zip(model.charts, sheaf.per_chart):
        nums = {name: ai for name, (ai, _) in chart.embedding.items()}
        a_eps = model.center[chart.index]
        for g in J.gens:
            if not g.terms:
                continue
            d = g.deg_in(chart.yvars) if chart.yvars else 0
            cleared, _ = subst_common_den(g, nums, a_eps, model.ground)
            need = d
            for other in model.charts:
                if other.index == chart.index:
                    continue
                m = min_clearing_exponent(
                    model, sheaf, other.index, chart.index, g
                )
                need = max(need, d + m)
            raw.append((chart.index, cleared, d, need))
    spread = max((need for _, _, _, need in raw), default=0)
    seen = []
    values = []
    for eps, cleared, d, _ in raw:
        scale = model.center[eps] ** (spread - d)
        num = (cleared * scale).cast(gctx.table)
        den = th**spread if spread else Poly.one(gctx.table)
        u = TFrac(num, den, gctx)
        key = (num, den)
        if key in seen:
            continue
        seen.append(key)
        values.append(u)
    elements = []
    for u in values:
        verdict = dstar_member(model, u, jobs)
        if not verdict.member:  # pragma: no cover - holds by construction
            raise CertificationError("emitted generator escaped the intersection ring")
        elements.append(verdict.element)
    # chartwise data and certification
    per_chart_ideal = []
    per_chart_contraction = []
    reports = []
    for chart, J in zip(model.charts, sheaf.per_chart):
        t_gens = tuple(g.cast(chart.tctx.table) for g in J.gens if g.terms)
        per_chart_ideal.append(Ideal(t_gens, GREVLEX, chart.tctx.table))
        report = is_relevant([TFrac.from_poly(g, chart.tctx) for g in t_gens], chart.ctx)
        if not report.relevant:  # pragma: no cover - ring generators are always relevant
            raise CertificationError("chart extension of a sheaf failed relevance")
        reports.append(report)
        contraction = Ideal(
            tuple(c.cast(chart.table) for c in report.content_gens),
            GREVLEX,
            chart.table,
        )
        if not same_ideal(contraction, J, chart.ctx):
            raise CertificationError(
                f"contraction of the extension differs from the sheaf in chart {chart.index + 1}"
            )
        per_chart_contraction.append(contraction)
    return RelevantIdealRep(
        model,
        tuple(elements),
        tuple(per_chart_ideal),
        tuple(per_chart_contraction),
        tuple(reports),
        spread,
    )


def relevant_to_sheaf(model, gens, jobs=1):
    """Contract an ideal of D* (given by generators) to an ideal sheaf.

    Per chart: normalize the generators into the chart polynomial ring,
    require relevance of the extension, and contract via the content
    ideal.  The resulting family must glue; failures raise with the
    offending report or pair attached.
    """
    from .errors import GlueError, RelevanceError

    gctx = ground_t_ctx(model)
    prepared = []
    for u in gens:
        if isinstance(u, Poly):
            u = TFrac.from_poly(u, gctx)
        prepared.append(u)

    def chart_work(chart):
        chart_gens = [u.cast(chart.tctx) for u in prepared]
        report = is_relevant(chart_gens, chart.ctx)
        return report

    reports = pmap(chart_work, model.charts, jobs)
    for chart, report in zip(model.charts, reports):
        if not report.relevant:
            raise RelevanceError(
                f"extension to chart {chart.index + 1} is not relevant "
                f"(failing coefficient {report.failing_coefficient})",
                report,
                chart.index,
            )
    per_chart = tuple(
        Ideal(
            tuple(c.cast(chart.table) for c in report.content_gens),
            GREVLEX,
            chart.table,
        )
        for chart, report in zip(model.charts, reports)
    )
    sheaf = IdealSheaf(model, per_chart)
    glue = glue_check(model, sheaf, jobs)
    if not glue.ok:
        raise GlueError(
            f"contracted family does not glue at pair "
            f"{tuple(p + 1 for p in glue.failing_pair)}",
            glue.failing_pair,
        )
    return sheaf, tuple(reports)


def roundtrip_check(model, sheaf, jobs=1):
    """sheaf -> relevant ideal -> sheaf must reproduce the input chartwise."""
    rep = sheaf_to_relevant(model, sheaf, jobs)
    back, _ = relevant_to_sheaf(model, [e.value for e in rep.gens], jobs)
    from .blowup import sheaves_equal

    return sheaves_equal(model, sheaf, back)
