"""Problem files, certificates, and the independent verifier.

A problem file is UTF-8 JSON with fields ``schema``, ``ring``, optional
``model`` (center generators), ``task`` and ``payload``; unknown fields
are rejected.  Running a task produces a certificate: the problem echoed
back, a verdict, and a witness that the ``verify`` command re-checks
without recomputing any basis from scratch.

What verification proves, by witness kind:

* cofactor reconstructions (memberships, colon/saturation/intersection
  soundness, primitivity, Nagata equalities, gluing, ideal equalities)
  are exact polynomial identities -- fully independent re-checks;
* listed bases are self-certified by division only: every S-polynomial
  and every claimed generator reduces to zero, and listed cofactors prove
  containment of the basis in the generated ideal;
* negative verdicts replay the obstruction (a proper content basis, a
  nonzero remainder) against listed, self-certified data; that the
  listed colon/saturation/elimination generators are *complete* is the
  producer's responsibility and is not re-derived;
* chart presentations are replayed structurally: the embedding data must
  match the problem's center, and every listed relation generator must
  vanish under the embedding (cross-multiplied, no basis involved).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import __version__ as _VERSION
from .errors import GlueError, ParseError, RelevanceError, UsageError
from .kernel import BACKEND, make_entry, normal_form
from .orders import GREVLEX, LEX
from .poly import Poly, VarTable, coeffs_in_t, parse_poly, subst_common_den, table
from .ideals import (
    Ideal,
    QuotientCtx,
    certify_gb,
    colon,
    content_ideal,
    eliminate,
    intersect,
    member,
    reduced_groebner,
    reduced_groebner_tracked,
    saturate,
)
from .nagata import TFrac, is_primitive, is_relevant, nagata_member
from .blowup import (
    BlowupModel,
    Chart,
    IdealSheaf,
    build_model,
    contract_to_ground,
    glue_check,
    min_clearing_exponent,
    pullback,
    transition,
)
from .dstar import (
    chart_theta,
    dstar_member,
    ground_t_ctx,
    phi_survival,
    relevant_to_sheaf,
    sheaf_to_relevant,
    theta,
    verify_theta,
)
from .oracle import extension_member_oracle, nagata_member_oracle

PROBLEM_SCHEMA = "blowstar-problem/1"
CERT_SCHEMA = "blowstar-cert/1"

_PAYLOAD_FIELDS = {
    "gb": ({"gens"}, {"relations", "t"}),
    "member": ({"f", "gens"}, {"relations", "t"}),
    "eliminate": ({"gens", "drop"}, {"t"}),
    "colon": ({"gens", "f"}, {"relations", "t"}),
    "saturate": ({"gens", "f"}, {"relations", "t"}),
    "intersect": ({"gens_a", "gens_b"}, {"t"}),
    "primitive": ({"f"}, {"relations"}),
    "nagata-member": ({"num", "den"}, {"relations"}),
    "relevant": ({"gens"}, {"relations"}),
    "charts": (set(), set()),
    "glue": ({"sheaf"}, set()),
    "pullback": ({"gens"}, set()),
    "contract": ({"chart", "gens"}, set()),
    "dstar-member": ({"num", "den"}, set()),
    "theta": (set(), {"permutation"}),
    "phi": ({"alphas", "unit_charts"}, set()),
    "to-relevant": ({"sheaf"}, set()),
    "to-sheaf": ({"gens"}, set()),
    "roundtrip": ({"sheaf"}, set()),
}

_MODEL_TASKS = {
    "charts",
    "glue",
    "pullback",
    "contract",
    "dstar-member",
    "theta",
    "phi",
    "to-relevant",
    "to-sheaf",
    "roundtrip",
}

# engine tasks where t is always adjoined
_T_TASKS = {"primitive", "nagata-member", "relevant"}

TASKS = tuple(sorted(_PAYLOAD_FIELDS))


# ---------------------------------------------------------------------------
# problem loading and validation
# ---------------------------------------------------------------------------


def _expect_fields(obj, required, optional, where):
    if not isinstance(obj, dict):
        raise UsageError(f"{where}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise UsageError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = set(required) - set(obj)
    if missing:
        raise UsageError(f"{where}: missing field(s) {sorted(missing)}")


def load_problem_text(text):
    """Parse and validate a problem file; errors carry position or field."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    validate_problem(obj)
    return obj


def validate_problem(obj):
    _expect_fields(obj, {"schema", "ring", "task", "payload"}, {"model"}, "problem")
    if obj["schema"] != PROBLEM_SCHEMA:
        raise UsageError(f"problem: unsupported schema {obj['schema']!r}")
    if not isinstance(obj["ring"], list) or not all(
        isinstance(n, str) for n in obj["ring"]
    ):
        raise UsageError("problem.ring: expected a list of variable names")
    task = obj["task"]
    if task not in _PAYLOAD_FIELDS:
        raise UsageError(f"problem.task: unknown task {task!r} (known: {', '.join(TASKS)})")
    required, optional = _PAYLOAD_FIELDS[task]
    _expect_fields(obj["payload"], required, optional, "problem.payload")
    if task in _MODEL_TASKS:
        if "model" not in obj:
            raise UsageError(f"problem.model: required for task {task!r}")
        if not isinstance(obj["model"], list) or not obj["model"]:
            raise UsageError("problem.model: expected a nonempty list of polynomials")


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------


def _p(poly):
    return str(poly)


def _ps(polys):
    return [str(g) for g in polys]


def _rows(matrix):
    return [[str(c) for c in row] for row in matrix]


def _frac_obj(num, den):
    return {"num": str(num), "den": str(den)}


def _parse(field, text, tbl):
    if not isinstance(text, str):
        raise UsageError(f"{field}: expected a polynomial string")
    try:
        return parse_poly(text, tbl)
    except ParseError as e:
        raise UsageError(f"{field}: {e}") from None


def _parse_list(field, seq, tbl):
    if not isinstance(seq, list):
        raise UsageError(f"{field}: expected a list of polynomial strings")
    return tuple(_parse(f"{field}[{i}]", s, tbl) for i, s in enumerate(seq))


def _parse_frac(field, obj, tbl):
    """Fraction payload: a polynomial string, or {"num": ..., "den": ...}."""
    if isinstance(obj, str):
        return _parse(field, obj, tbl), Poly.one(tbl)
    if isinstance(obj, dict):
        _expect_fields(obj, {"num"}, {"den"}, field)
        num = _parse(f"{field}.num", obj["num"], tbl)
        den = _parse(f"{field}.den", obj.get("den", "1"), tbl)
        return num, den
    raise UsageError(f"{field}: expected a polynomial or a num/den object")


# ---------------------------------------------------------------------------
# witness builders
# ---------------------------------------------------------------------------


def _gb_witness(gens, order, tbl):
    """Reduced basis plus cofactors proving it sits inside the ideal."""
    basis, matrix = reduced_groebner_tracked(gens, order, tbl)
    return basis, {"basis": _ps(basis), "cofactors": _rows(matrix)}


def _equality_witness(a_gens, b_gens, tbl):
    """Witness that two generator lists cut the same ideal.

    The shared reduced basis plus cofactor rows over both generator lists;
    the verifier additionally reduces both lists to zero against it.
    """
    basis_a, mat_a = reduced_groebner_tracked(a_gens, GREVLEX, tbl)
    basis_b, mat_b = reduced_groebner_tracked(b_gens, GREVLEX, tbl)
    if basis_a != basis_b:
        raise UsageError("equality witness requested for distinct ideals")
    return {
        "basis": _ps(basis_a),
        "cofactors_a": _rows(mat_a),
        "cofactors_b": _rows(mat_b),
    }


def _primitivity_witness(g, tctx):
    """Unit-content witness: 1 as a combination of the t-coefficients of g."""
    cg = content_ideal(g, tctx)
    mr = member(Poly.one(cg.table), cg, certificate=True)
    if not mr.ok:
        raise UsageError("primitivity witness requested for a non-primitive polynomial")
    return {
        "poly": _p(g),
        "content_gens": _ps(cg.gens),
        "unit_cofactors": _ps(mr.cofactors),
    }


def _nagata_witness(cert):
    w = {
        "member": cert.member,
        "num": _p(cert.num),
        "den": _p(cert.den),
        "relations": _ps(cert.relations),
    }
    twt = cert.num.table
    tctx = QuotientCtx(twt, cert.relations)
    if cert.member:
        w.update(
            {
                "f": _p(cert.f),
                "g": _p(cert.g),
                "g_content_gens": _ps(cert.g_content_gens),
                "g_unit_cofactors": _ps(cert.g_unit_cofactors),
                "equality_cofactors": _ps(cert.equality_cofactors),
            }
        )
        return w
    den_ideal = Ideal((cert.den,), GREVLEX, twt)
    rows = []
    for j in cert.j_basis:
        mr = member(j * cert.num, den_ideal, tctx, certificate=True)
        rows.append([str(c) for c in mr.cofactors])
    src = _content_source(cert.j_basis, cert.relations, twt)
    _, gbw = _gb_witness(src, GREVLEX, src[0].table if src else twt.without(("t",)))
    w.update(
        {
            "j_basis": _ps(cert.j_basis),
            "j_cofactors": rows,
            "content_gb_witness": gbw,
            "content_gb": _ps(cert.content_gb),
        }
    )
    return w


def _content_source(polys, relations, twt):
    """The t-coefficients of the listed polynomials, then the relations."""
    tfree = twt.without(("t",))
    out = []
    for g in polys:
        for _, c in coeffs_in_t(g):
            if c.terms and c not in out:
                out.append(c)
    for r in relations:
        rc = r.cast(tfree)
        if rc.terms and rc not in out:
            out.append(rc)
    return tuple(out)


def _unit_pair_witness(res):
    return {
        "forward": _nagata_witness(res.num_cert),
        "inverse": _nagata_witness(res.den_cert),
    }


def _relevance_witness(report, tctx):
    rel = tctx.relations
    w = {
        "relevant": report.relevant,
        "normalized": _ps(report.normalized),
        "content_gens": _ps(report.content_gens),
        "member_witnesses": [_nagata_witness(c) for c in report.member_certs],
        "coefficients": [],
    }
    eff = report.ideal.gens + rel
    eff_ideal = Ideal(report.ideal.gens, GREVLEX, report.ideal.table)
    for c, cert in report.coefficient_certs:
        entry = {"coefficient": _p(c), "ok": cert.ok}
        if cert.ok:
            entry["multiplier"] = _p(cert.multiplier)
            entry["multiplier_primitivity"] = _primitivity_witness(cert.multiplier, tctx)
            entry["cofactors"] = _ps(cert.cofactors)
        else:
            rows = []
            for j in cert.colon_basis:
                mr = member(j * cert.h, eff_ideal, tctx, certificate=True)
                rows.append([str(x) for x in mr.cofactors])
            src = _content_source(cert.colon_basis, rel, report.ideal.table)
            _, gbw = _gb_witness(
                src, GREVLEX, src[0].table if src else report.ideal.table.without(("t",))
            )
            entry["colon_basis"] = _ps(cert.colon_basis)
            entry["colon_cofactors"] = rows
            entry["content_gb_witness"] = gbw
        w["coefficients"].append(entry)
    return w


def _charts_block(model):
    out = []
    for chart in model.charts:
        out.append(
            {
                "index": chart.index + 1,
                "vars": list(chart.table.names),
                "relations": _ps(chart.relations.gens),
                "embedding": {
                    name: [_p(ai), _p(ae)] for name, (ai, ae) in chart.embedding.items()
                },
            }
        )
    return out


def _dstar_witness(verdict):
    return {
        "member": verdict.member,
        "failing_chart": None if verdict.failing_chart is None else verdict.failing_chart + 1,
        "chart_witnesses": [_nagata_witness(c) for c in verdict.chart_certs],
    }


def _glue_positive_witness(model, sheaf):
    checks = []
    n = len(model.charts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ci, cj = model.charts[i], model.charts[j]
            target = Ideal(
                sheaf.per_chart[i].gens + ci.relations.gens, GREVLEX, ci.table
            )
            y_j = Poly.var(ci.table, f"y{j + 1}")
            for g in sheaf.per_chart[j].gens:
                if not g.terms:
                    continue
                moved = transition(model, cj, ci, g)
                m = min_clearing_exponent(model, sheaf, i, j, g)
                h = moved.num * y_j**m
                mr = member(h, target, certificate=True)
                if not mr.ok:
                    raise UsageError("glue witness requested for a non-glued sheaf")
                checks.append(
                    {
                        "pair": [i + 1, j + 1],
                        "generator": _p(g),
                        "cleared": _p(moved.num),
                        "exponent": m,
                        "cofactors": _ps(mr.cofactors),
                    }
                )
    return {"checks": checks}


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


def run_problem(problem, order=None, jobs=1, oracle=False, deg_bound=4):
    """Execute a validated problem and return the certificate dict."""
    validate_problem(problem)
    order = order or GREVLEX
    task = problem["task"]
    runner = _RUNNERS[task]
    model = _build_model_from_problem(problem) if task in _MODEL_TASKS else None
    verdict, witness, crosscheck = runner(
        problem, model, order=order, jobs=jobs, oracle=oracle, deg_bound=deg_bound
    )
    cert = {
        "schema": CERT_SCHEMA,
        "engine": {"name": "blowstar", "version": _VERSION, "backend": BACKEND},
        "problem": problem,
        "options": {"order": order.kind, "jobs": jobs},
        "verdict": verdict,
        "witness": witness,
        "replay": {
            "run": "blowstar run <problem.json>",
            "verify": "blowstar verify <certificate.json>",
        },
    }
    if model is not None:
        cert["charts"] = _charts_block(model)
    if crosscheck is not None:
        cert["crosscheck"] = crosscheck
    return cert


def _engine_tables(problem):
    ring = table(*problem["ring"])
    payload = problem["payload"]
    need_t = problem["task"] in _T_TASKS or payload.get("t", False)
    return (ring.with_t() if need_t else ring), ring


def _payload_relations(problem, tbl):
    return _parse_list(
        "payload.relations", problem["payload"].get("relations", []), tbl
    )


def _build_model_from_problem(problem):
    ground = table(*problem["ring"])
    center = _parse_list("model", problem["model"], ground)
    return build_model(ground, center)


def _chart_from_payload(model, value):
    if not isinstance(value, int) or not (1 <= value <= len(model.charts)):
        raise UsageError(
            f"payload.chart: expected a chart index between 1 and {len(model.charts)}"
        )
    return model.charts[value - 1]


def _parse_sheaf(model, payload_sheaf):
    if not isinstance(payload_sheaf, list) or len(payload_sheaf) != len(model.charts):
        raise UsageError(
            f"payload.sheaf: expected {len(model.charts)} per-chart generator lists"
        )
    per_chart = []
    for chart, gens in zip(model.charts, payload_sheaf):
        polys = _parse_list(f"payload.sheaf[{chart.index}]", gens, chart.table)
        per_chart.append(Ideal(tuple(g for g in polys if g.terms), GREVLEX, chart.table))
    return IdealSheaf(model, tuple(per_chart))


def _run_gb(problem, model, order, **_):
    tbl, base = _engine_tables(problem)
    gens = _parse_list("payload.gens", problem["payload"]["gens"], tbl)
    rel = _payload_relations(problem, base)
    eff = gens + tuple(r.cast(tbl) for r in rel)
    basis, witness = _gb_witness(eff, order, tbl)
    return {"basis": _ps(basis)}, witness, None


def _run_member(problem, model, order, **_):
    tbl, base = _engine_tables(problem)
    f = _parse("payload.f", problem["payload"]["f"], tbl)
    gens = _parse_list("payload.gens", problem["payload"]["gens"], tbl)
    rel = tuple(r.cast(tbl) for r in _payload_relations(problem, base))
    eff = gens + rel
    I = Ideal(eff, order, tbl)
    mr = member(f, I, certificate=True)
    if mr.ok:
        return {"member": True}, {"cofactors": _ps(mr.cofactors)}, None
    _, gbw = _gb_witness(eff, order, tbl)
    return (
        {"member": False},
        {"basis_witness": gbw, "remainder": _p(mr.remainder)},
        None,
    )


def _run_eliminate(problem, model, order, **_):
    tbl, _ = _engine_tables(problem)
    gens = _parse_list("payload.gens", problem["payload"]["gens"], tbl)
    drop = problem["payload"]["drop"]
    if not isinstance(drop, list):
        raise UsageError("payload.drop: expected a list of variable names")
    for d in drop:
        if d not in tbl:
            raise UsageError(f"payload.drop: {d!r} is not a ring variable")
    out = eliminate(Ideal(gens, order, tbl), drop)
    rows = []
    src = Ideal(gens, order, tbl)
    for g in out.gens:
        mr = member(g.cast(tbl), src, certificate=True)
        rows.append([str(c) for c in mr.cofactors])
    return {"gens": _ps(out.gens)}, {"cofactors": rows}, None


def _run_colon(problem, model, order, **_):
    tbl, base = _engine_tables(problem)
    gens = _parse_list("payload.gens", problem["payload"]["gens"], tbl)
    f = _parse("payload.f", problem["payload"]["f"], tbl)
    if not f.terms:
        raise UsageError("payload.f: colon by zero")
    rel = tuple(r.cast(tbl) for r in _payload_relations(problem, base))
    eff = Ideal(gens + rel, order, tbl)
    out = colon(eff, f)
    rows = []
    for q in out.gens:
        mr = member(q * f, eff, certificate=True)
        rows.append([str(c) for c in mr.cofactors])
    return {"gens": _ps(out.gens)}, {"cofactors": rows}, None


def _run_saturate(problem, model, order, **_):
    tbl, base = _engine_tables(problem)
    gens = _parse_list("payload.gens", problem["payload"]["gens"], tbl)
    f = _parse("payload.f", problem["payload"]["f"], tbl)
    if not f.terms:
        raise UsageError("payload.f: saturation by zero")
    rel = tuple(r.cast(tbl) for r in _payload_relations(problem, base))
    eff = Ideal(gens + rel, order, tbl)
    out = saturate(eff, f)
    powers = []
    rows = []
    for g in out.gens:
        h = g
        for m in range(257):
            mr = member(h, eff, certificate=True)
            if mr.ok:
                powers.append(m)
                rows.append([str(c) for c in mr.cofactors])
                break
            h = h * f
        else:  # pragma: no cover
            raise UsageError("internal: saturation witness exponent not found")
    return {"gens": _ps(out.gens)}, {"powers": powers, "cofactors": rows}, None


def _run_intersect(problem, model, order, **_):
    tbl, _ = _engine_tables(problem)
    gens_a = _parse_list("payload.gens_a", problem["payload"]["gens_a"], tbl)
    gens_b = _parse_list("payload.gens_b", problem["payload"]["gens_b"], tbl)
    Ia = Ideal(gens_a, order, tbl) if gens_a else Ideal((), order, tbl)
    Ib = Ideal(gens_b, order, tbl) if gens_b else Ideal((), order, tbl)
    out = intersect(Ia, Ib)
    rows_a, rows_b = [], []
    for g in out.gens:
        rows_a.append([str(c) for c in member(g, Ia, certificate=True).cofactors])
        rows_b.append([str(c) for c in member(g, Ib, certificate=True).cofactors])
    return (
        {"gens": _ps(out.gens)},
        {"cofactors_a": rows_a, "cofactors_b": rows_b},
        None,
    )


def _run_primitive(problem, model, order, **_):
    tbl, base = _engine_tables(problem)
    f = _parse("payload.f", problem["payload"]["f"], tbl)
    rel = _payload_relations(problem, base)
    tctx = QuotientCtx(tbl, rel)
    if is_primitive(f, tctx):
        return {"primitive": True}, _primitivity_witness(f, tctx), None
    src = _content_source((f,), tctx.relations, tbl) if f.terms else ()
    tfree = tbl.without(("t",))
    _, gbw = _gb_witness(src, GREVLEX, tfree)
    return {"primitive": False}, {"content_gb_witness": gbw}, None


def _run_nagata_member(problem, model, order, oracle=False, deg_bound=4, **_):
    tbl, base = _engine_tables(problem)
    rel = _payload_relations(problem, base)
    tctx = QuotientCtx(tbl, rel)
    num, den = _parse_frac("payload", problem["payload"], tbl)
    u = TFrac(num, den, tctx)
    cert = nagata_member(u)
    verdict = {"member": cert.member}
    if cert.member:
        verdict["f"] = _p(cert.f)
        verdict["g"] = _p(cert.g)
    else:
        verdict["content_gb"] = _ps(cert.content_gb)
    crosscheck = None
    if oracle:
        ov = nagata_member_oracle(u, deg_bound)
        crosscheck = {
            "method": "bounded primitive-multiplier search",
            "bound": deg_bound,
            "verdict": ov.member,
            "agrees": ov.member == cert.member,
        }
    return verdict, _nagata_witness(cert), crosscheck


def _run_relevant(problem, model, order, oracle=False, deg_bound=4, **_):
    tbl, base = _engine_tables(problem)
    rel = _payload_relations(problem, base)
    ctx = QuotientCtx(base, rel)
    tctx = QuotientCtx(tbl, rel)
    payload_gens = problem["payload"]["gens"]
    if not isinstance(payload_gens, list) or not payload_gens:
        raise UsageError("payload.gens: expected a nonempty list")
    fracs = []
    for i, obj in enumerate(payload_gens):
        num, den = _parse_frac(f"payload.gens[{i}]", obj, tbl)
        fracs.append(TFrac(num, den, tctx))
    report = is_relevant(fracs, ctx)
    verdict = {
        "relevant": report.relevant,
        "content_gens": _ps(report.content_gens),
        "failing_coefficient": None
        if report.failing_coefficient is None
        else _p(report.failing_coefficient),
    }
    crosscheck = None
    if oracle:
        agrees = True
        for c, cert in report.coefficient_certs:
            ov = extension_member_oracle(c.cast(tbl), report.ideal, tctx, deg_bound)
            if ov.member != cert.ok:
                agrees = False
                break
        crosscheck = {
            "method": "bounded primitive-multiplier search per coefficient",
            "bound": deg_bound,
            "agrees": agrees,
        }
    return verdict, _relevance_witness(report, tctx), crosscheck


def _run_charts(problem, model, **_):
    return {"charts": _charts_block(model)}, {}, None


def _run_glue(problem, model, jobs=1, **_):
    sheaf = _parse_sheaf(model, problem["payload"]["sheaf"])
    report = glue_check(model, sheaf, jobs)
    if report.ok:
        return {"glues": True, "failing_pair": None}, _glue_positive_witness(model, sheaf), None
    i, j = report.failing_pair
    ci, cj = model.charts[i], model.charts[j]
    moved = transition(model, cj, ci, report.failing_generator)
    sat = saturate(
        Ideal(sheaf.per_chart[i].gens + ci.relations.gens, GREVLEX, ci.table),
        Poly.var(ci.table, f"y{j + 1}"),
    )
    basis = reduced_groebner(sat.gens, GREVLEX, ci.table)
    spec = GREVLEX.spec_for(ci.table)
    entries = [make_entry(dict(b.terms), spec) for b in basis]
    rem = Poly(ci.table, normal_form(dict(moved.num.terms), entries, spec))
    witness = {
        "pair": [i + 1, j + 1],
        "generator": _p(report.failing_generator),
        "cleared": _p(moved.num),
        "sat_basis": _ps(basis),
        "remainder": _p(rem),
    }
    return {"glues": False, "failing_pair": [i + 1, j + 1]}, witness, None


def _run_pullback(problem, model, **_):
    gens = _parse_list("payload.gens", problem["payload"]["gens"], model.ground)
    sheaf = pullback(model, Ideal(gens, GREVLEX, model.ground))
    return (
        {"sheaf": [_ps(J.gens) for J in sheaf.per_chart]},
        {},
        None,
    )


def _run_contract(problem, model, **_):
    chart = _chart_from_payload(model, problem["payload"]["chart"])
    gens = _parse_list("payload.gens", problem["payload"]["gens"], chart.table)
    J = Ideal(gens, GREVLEX, chart.table)
    out = contract_to_ground(chart, J)
    eff = Ideal(J.gens + chart.relations.gens, GREVLEX, chart.table)
    rows = []
    for g in out.gens:
        mr = member(g.cast(chart.table), eff, certificate=True)
        rows.append([str(c) for c in mr.cofactors])
    return {"gens": _ps(out.gens)}, {"cofactors": rows}, None


def _run_dstar_member(problem, model, jobs=1, oracle=False, deg_bound=4, **_):
    gctx = ground_t_ctx(model)
    num, den = _parse_frac("payload", problem["payload"], gctx.table)
    u = TFrac(num, den, gctx)
    verdict = dstar_member(model, u, jobs)
    out = {
        "member": verdict.member,
        "failing_chart": None if verdict.failing_chart is None else verdict.failing_chart + 1,
    }
    crosscheck = None
    if oracle:
        agrees = True
        for chart, cert in zip(model.charts, verdict.chart_certs):
            ov = nagata_member_oracle(u.cast(chart.tctx), deg_bound)
            if ov.member != cert.member:
                agrees = False
                break
        crosscheck = {
            "method": "bounded primitive-multiplier search per chart",
            "bound": deg_bound,
            "agrees": agrees,
        }
    return out, _dstar_witness(verdict), crosscheck


def _parse_permutation(problem, model):
    perm = problem["payload"].get("permutation")
    if perm is None:
        return None
    n = len(model.center)
    if (
        not isinstance(perm, list)
        or sorted(perm) != list(range(1, n + 1))
    ):
        raise UsageError(f"payload.permutation: expected a permutation of 1..{n}")
    return tuple(k - 1 for k in perm)


def _run_theta(problem, model, jobs=1, **_):
    perm = _parse_permutation(problem, model)
    rep = verify_theta(model, perm, jobs)
    witness = {
        "quotients": [_dstar_witness(v) for v in rep.quotient_verdicts],
        "chart_primitivity": [
            _primitivity_witness(chart_theta(model, chart, perm), chart.tctx)
            for chart in model.charts
        ],
    }
    return {"ok": rep.ok, "theta": _p(rep.theta)}, witness, None


def _run_phi(problem, model, jobs=1, **_):
    gctx = ground_t_ctx(model)
    payload = problem["payload"]
    if not isinstance(payload["alphas"], list) or not payload["alphas"]:
        raise UsageError("payload.alphas: expected a nonempty list of fractions")
    alphas = []
    for i, obj in enumerate(payload["alphas"]):
        num, den = _parse_frac(f"payload.alphas[{i}]", obj, gctx.table)
        v = dstar_member(model, TFrac(num, den, gctx), jobs)
        if not v.member:
            raise UsageError(
                f"payload.alphas[{i}]: not in the intersection ring "
                f"(fails in chart {v.failing_chart + 1})"
            )
        alphas.append(v.element)
    unit_charts = payload["unit_charts"]
    if not isinstance(unit_charts, list) or len(unit_charts) != len(alphas):
        raise UsageError("payload.unit_charts: expected one chart index per alpha")
    for k in unit_charts:
        if not isinstance(k, int) or not (1 <= k <= len(model.charts)):
            raise UsageError("payload.unit_charts: chart indices are 1-based")
    rep = phi_survival(model, alphas, [k - 1 for k in unit_charts], jobs)
    witness = {
        "input_units": [
            {"chart": k, **_unit_pair_witness(res)}
            for k, res in zip(unit_charts, rep.input_unit_certs)
        ],
        "chart_units": [_unit_pair_witness(res) for res in rep.chart_unit_certs],
    }
    verdict = {
        "phi": _frac_obj(rep.phi.num, rep.phi.den),
        "spacing": rep.spacing,
        "unit_in_all_charts": True,
    }
    return verdict, witness, None


def _run_to_relevant(problem, model, jobs=1, **_):
    sheaf = _parse_sheaf(model, problem["payload"]["sheaf"])
    rep = sheaf_to_relevant(model, sheaf, jobs)
    equality = []
    for chart, J, contraction in zip(
        model.charts, sheaf.per_chart, rep.per_chart_contraction
    ):
        eff_a = J.gens + chart.relations.gens
        eff_b = contraction.gens + chart.relations.gens
        equality.append(_equality_witness(eff_a, eff_b, chart.table))
    witness = {
        "relevance": [
            _relevance_witness(r, chart.tctx)
            for chart, r in zip(model.charts, rep.relevance_reports)
        ],
        "elements": [_dstar_witness_from_element(e) for e in rep.gens],
        "contraction_equality": equality,
    }
    verdict = {
        "gens": [_frac_obj(e.value.num, e.value.den) for e in rep.gens],
        "contractions": [_ps(c.gens) for c in rep.per_chart_contraction],
        "spread": rep.spread_exponent,
    }
    return verdict, witness, None


def _dstar_witness_from_element(element):
    return {
        "member": True,
        "failing_chart": None,
        "chart_witnesses": [_nagata_witness(c) for c in element.chart_certs],
    }


def _run_to_sheaf(problem, model, jobs=1, **_):
    gctx = ground_t_ctx(model)
    payload_gens = problem["payload"]["gens"]
    if not isinstance(payload_gens, list) or not payload_gens:
        raise UsageError("payload.gens: expected a nonempty list")
    fracs = []
    for i, obj in enumerate(payload_gens):
        num, den = _parse_frac(f"payload.gens[{i}]", obj, gctx.table)
        fracs.append(TFrac(num, den, gctx))
    try:
        sheaf, reports = relevant_to_sheaf(model, fracs, jobs)
    except RelevanceError as e:
        witness = {
            "failing_chart": e.chart_index + 1,
            "relevance": [_relevance_witness(e.report, model.charts[e.chart_index].tctx)],
        }
        verdict = {
            "relevant": False,
            "failing_chart": e.chart_index + 1,
            "failing_coefficient": None
            if e.report.failing_coefficient is None
            else _p(e.report.failing_coefficient),
            "sheaf": None,
        }
        return verdict, witness, None
    except GlueError as e:
        verdict = {
            "relevant": True,
            "glues": False,
            "failing_pair": [p + 1 for p in e.pair],
            "sheaf": None,
        }
        return verdict, {}, None
    witness = {
        "relevance": [
            _relevance_witness(r, chart.tctx)
            for chart, r in zip(model.charts, reports)
        ],
        "glue": _glue_positive_witness(model, sheaf),
    }
    verdict = {
        "relevant": True,
        "glues": True,
        "sheaf": [_ps(J.gens) for J in sheaf.per_chart],
    }
    return verdict, witness, None


def _run_roundtrip(problem, model, jobs=1, **_):
    sheaf = _parse_sheaf(model, problem["payload"]["sheaf"])
    rep = sheaf_to_relevant(model, sheaf, jobs)
    back, _reports = relevant_to_sheaf(model, [e.value for e in rep.gens], jobs)
    from .blowup import sheaves_equal

    ok = sheaves_equal(model, sheaf, back)
    verdict = {
        "roundtrip": ok,
        "gens": [_frac_obj(e.value.num, e.value.den) for e in rep.gens],
        "back": [_ps(J.gens) for J in back.per_chart],
    }
    if not ok:
        return verdict, {}, None
    equality = []
    for chart, J, B in zip(model.charts, sheaf.per_chart, back.per_chart):
        eff_a = J.gens + chart.relations.gens
        eff_b = B.gens + chart.relations.gens
        equality.append(_equality_witness(eff_a, eff_b, chart.table))
    return verdict, {"equality": equality}, None


_RUNNERS = {
    "gb": _run_gb,
    "member": _run_member,
    "eliminate": _run_eliminate,
    "colon": _run_colon,
    "saturate": _run_saturate,
    "intersect": _run_intersect,
    "primitive": _run_primitive,
    "nagata-member": _run_nagata_member,
    "relevant": _run_relevant,
    "charts": _run_charts,
    "glue": _run_glue,
    "pullback": _run_pullback,
    "contract": _run_contract,
    "dstar-member": _run_dstar_member,
    "theta": _run_theta,
    "phi": _run_phi,
    "to-relevant": _run_to_relevant,
    "to-sheaf": _run_to_sheaf,
    "roundtrip": _run_roundtrip,
}


# ---------------------------------------------------------------------------
# verifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failed_check: str | None = None

    def __bool__(self):
        return self.ok


class _Fail(Exception):
    def __init__(self, check):
        super().__init__(check)
        self.check = check


def verify_certificate(cert):
    """Re-check a certificate; returns the first failing check by name."""
    try:
        _verify(cert)
    except _Fail as e:
        return VerifyResult(False, e.check)
    except (UsageError, KeyError, TypeError, ValueError, IndexError) as e:
        return VerifyResult(False, f"malformed certificate: {e}")
    return VerifyResult(True)


def _require(cond, check):
    if not cond:
        raise _Fail(check)


def _verify(cert):
    _require(cert.get("schema") == CERT_SCHEMA, "certificate schema")
    problem = cert["problem"]
    validate_problem(problem)
    task = problem["task"]
    order = LEX if cert.get("options", {}).get("order") == "lex" else GREVLEX
    checker = _CHECKERS[task]
    checker(cert, problem, order)


def _vtables(problem):
    names = tuple(problem["ring"])
    base = VarTable(names)
    task = problem["task"]
    need_t = task in _T_TASKS or problem["payload"].get("t", False)
    return (base.with_t() if need_t else base), base


def _vparse(s, tbl, check):
    try:
        return parse_poly(s, tbl)
    except ParseError:
        raise _Fail(check)


def _vparse_list(seq, tbl, check):
    return tuple(_vparse(s, tbl, check) for s in seq)


def _combo_ok(target, cof_strs, gens, tbl):
    if len(cof_strs) != len(gens):
        return False
    acc = Poly.zero(tbl)
    for cs, g in zip(cof_strs, gens):
        c = parse_poly(cs, tbl)
        if c.terms:
            acc = acc + c * g
    return acc == target


def _divide(f, basis, order, tbl):
    spec = order.spec_for(tbl)
    entries = [make_entry(dict(b.terms), spec) for b in basis]
    return Poly(tbl, normal_form(dict(f.terms), entries, spec))


def _all_reduce_zero(gens, basis, order, tbl):
    return all(not _divide(g, basis, order, tbl).terms for g in gens)


def _check_gb_witness(w, gens, order, tbl, where):
    basis = _vparse_list(w["basis"], tbl, f"{where}: basis parse")
    rows = w["cofactors"]
    _require(len(rows) == len(basis), f"{where}: cofactor row count")
    for b, row in zip(basis, rows):
        _require(_combo_ok(b, row, gens, tbl), f"{where}: basis containment cofactors")
    _require(certify_gb(gens, basis, order, tbl), f"{where}: basis self-certification")
    return basis


def _check_equality_witness(w, a_gens, b_gens, tbl, where):
    basis = _vparse_list(w["basis"], tbl, f"{where}: basis parse")
    for b, row in zip(basis, w["cofactors_a"]):
        _require(_combo_ok(b, row, a_gens, tbl), f"{where}: left cofactors")
    for b, row in zip(basis, w["cofactors_b"]):
        _require(_combo_ok(b, row, b_gens, tbl), f"{where}: right cofactors")
    _require(certify_gb(a_gens, basis, GREVLEX, tbl), f"{where}: left reduction")
    _require(_all_reduce_zero(b_gens, basis, GREVLEX, tbl), f"{where}: right reduction")


def _check_primitivity(w, expected, rel, twt, where):
    g = _vparse(w["poly"], twt, f"{where}: poly parse")
    if expected is not None:
        _require(g == expected, f"{where}: wrong polynomial")
    tfree = twt.without(("t",))
    content = _vparse_list(w["content_gens"], tfree, f"{where}: content parse")
    _require(bool(content), f"{where}: empty content")
    acc = Poly.zero(tfree)
    for q, c in zip(w["unit_cofactors"], content):
        qq = parse_poly(q, tfree)
        if qq.terms:
            acc = acc + qq * c
    _require(acc.is_one(), f"{where}: unit combination")
    allowed = {c for _, c in coeffs_in_t(g) if c.terms} if g.table.has_t else {g.cast(tfree)}
    allowed.update(r.cast(tfree) for r in rel)
    for c in content:
        _require(c in allowed, f"{where}: content generator not a coefficient")


def _check_nagata_witness(w, twt, expected_rel, where, expected_num=None, expected_den=None):
    num = _vparse(w["num"], twt, f"{where}: num parse")
    den = _vparse(w["den"], twt, f"{where}: den parse")
    rel = _vparse_list(w["relations"], twt, f"{where}: relations parse")
    if expected_rel is not None:
        _require(tuple(rel) == tuple(expected_rel), f"{where}: relations mismatch")
    if expected_num is not None:
        _require(num == expected_num, f"{where}: num mismatch")
    if expected_den is not None:
        _require(den == expected_den, f"{where}: den mismatch")
    if w["member"]:
        f = _vparse(w["f"], twt, f"{where}: f parse")
        g = _vparse(w["g"], twt, f"{where}: g parse")
        lhs = num * g - f * den
        acc = Poly.zero(twt)
        for cs, r in zip(w["equality_cofactors"], rel):
            c = parse_poly(cs, twt)
            if c.terms:
                acc = acc + c * r
        _require(lhs == acc, f"{where}: cross-multiplied equality")
        _check_primitivity(
            {
                "poly": w["g"],
                "content_gens": w["g_content_gens"],
                "unit_cofactors": w["g_unit_cofactors"],
            },
            g,
            rel,
            twt,
            f"{where}: primitivity of g",
        )
        return True
    j_basis = _vparse_list(w["j_basis"], twt, f"{where}: denominator ideal parse")
    _require(bool(j_basis), f"{where}: empty denominator ideal")
    eff = (den,) + tuple(rel)
    for j, row in zip(j_basis, w["j_cofactors"]):
        _require(_combo_ok(j * num, row, eff, twt), f"{where}: denominator ideal cofactors")
    src = _content_source(j_basis, rel, twt)
    tfree = twt.without(("t",))
    basis = _check_gb_witness(
        w["content_gb_witness"], src, GREVLEX, tfree, f"{where}: content basis"
    )
    _require(
        tuple(str(b) for b in basis) == tuple(w["content_gb"]),
        f"{where}: content basis echo",
    )
    _require(all(not b.is_one() for b in basis), f"{where}: content basis is unit")
    return False


def _check_relevance_witness(w, twt, rel, expected_fracs, verdict, where):
    mws = w["member_witnesses"]
    _require(len(mws) == len(expected_fracs), f"{where}: generator count")
    normalized = []
    for i, (mw, (num, den)) in enumerate(zip(mws, expected_fracs)):
        ok = _check_nagata_witness(
            mw, twt, rel, f"{where}: generator {i}", expected_num=num, expected_den=den
        )
        _require(ok, f"{where}: generator {i} not in R(t)")
        f = parse_poly(mw["f"], twt)
        if f.terms:
            normalized.append(f)
    listed_norm = _vparse_list(w["normalized"], twt, f"{where}: normalized parse")
    _require(tuple(normalized) == tuple(listed_norm), f"{where}: normalized mismatch")
    eff = tuple(normalized) + tuple(rel)
    expected_coeffs = []
    for f in normalized:
        for _, c in coeffs_in_t(f):
            expected_coeffs.append(c)
    entries = w["coefficients"]
    if verdict["relevant"]:
        _require(len(entries) == len(expected_coeffs), f"{where}: coefficient coverage")
    else:
        _require(0 < len(entries) <= len(expected_coeffs), f"{where}: coefficient coverage")
    tfree = twt.without(("t",))
    for k, (entry, c) in enumerate(zip(entries, expected_coeffs)):
        _require(
            parse_poly(entry["coefficient"], tfree) == c,
            f"{where}: coefficient {k} echo",
        )
        last = k == len(entries) - 1
        if entry["ok"]:
            mult = _vparse(entry["multiplier"], twt, f"{where}: multiplier parse")
            _check_primitivity(
                entry["multiplier_primitivity"], mult, rel, twt,
                f"{where}: coefficient {k} multiplier",
            )
            _require(
                _combo_ok(mult * c.cast(twt), entry["cofactors"], eff, twt),
                f"{where}: coefficient {k} cofactors",
            )
        else:
            _require(not verdict["relevant"] and last, f"{where}: failing entry placement")
            colon_basis = _vparse_list(
                entry["colon_basis"], twt, f"{where}: colon basis parse"
            )
            for j, row in zip(colon_basis, entry["colon_cofactors"]):
                _require(
                    _combo_ok(j * c.cast(twt), row, eff, twt),
                    f"{where}: coefficient {k} colon cofactors",
                )
            src = _content_source(colon_basis, rel, twt)
            basis = _check_gb_witness(
                entry["content_gb_witness"], src, GREVLEX, tfree,
                f"{where}: coefficient {k} content basis",
            )
            _require(
                all(not b.is_one() for b in basis),
                f"{where}: coefficient {k} content basis is unit",
            )
            _require(
                verdict["failing_coefficient"] == entry["coefficient"],
                f"{where}: failing coefficient echo",
            )


def _rebuild_model_from_cert(cert, problem):
    ground = VarTable(tuple(problem["ring"]))
    center = _vparse_list(problem["model"], ground, "model parse")
    blocks = cert["charts"]
    _require(len(blocks) == len(center), "chart count")
    charts = []
    for eps, blk in enumerate(blocks):
        _require(blk["index"] == eps + 1, "chart index order")
        expected_vars = tuple(ground.names) + tuple(
            f"y{i + 1}" for i in range(len(center)) if i != eps
        )
        _require(tuple(blk["vars"]) == expected_vars, "chart variable layout")
        tbl = VarTable(expected_vars)
        rel = _vparse_list(blk["relations"], tbl, "chart relations parse")
        embedding = {}
        for i in range(len(center)):
            if i == eps:
                continue
            name = f"y{i + 1}"
            pair = blk["embedding"].get(name)
            _require(pair is not None, "chart embedding coverage")
            ai = _vparse(pair[0], ground, "chart embedding parse")
            ae = _vparse(pair[1], ground, "chart embedding parse")
            _require(ai == center[i] and ae == center[eps], "chart embedding values")
            embedding[name] = (ai, ae)
        nums = {name: ai for name, (ai, _) in embedding.items()}
        a_eps = center[eps]
        for g in rel:
            num, _ = subst_common_den(g, nums, a_eps, ground)
            _require(not num.terms, "chart relation does not vanish")
        ctx = QuotientCtx(tbl, rel)
        tctx = QuotientCtx(tbl.with_t(), rel)
        charts.append(
            Chart(eps, tbl, Ideal(tuple(rel), GREVLEX, tbl), embedding, ctx, tctx)
        )
    return BlowupModel(ground, tuple(center), tuple(charts))


def _vparse_sheaf(problem, model, check):
    payload_sheaf = problem["payload"]["sheaf"]
    _require(len(payload_sheaf) == len(model.charts), f"{check}: sheaf shape")
    out = []
    for chart, gens in zip(model.charts, payload_sheaf):
        out.append(_vparse_list(gens, chart.table, f"{check}: sheaf parse"))
    return out


# ---- per-task checkers


def _chk_gb(cert, problem, order):
    tbl, base = _vtables(problem)
    gens = _vparse_list(problem["payload"]["gens"], tbl, "gens parse")
    rel = _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    eff = gens + tuple(r.cast(tbl) for r in rel)
    basis = _check_gb_witness(cert["witness"], eff, order, tbl, "gb")
    _require(tuple(str(b) for b in basis) == tuple(cert["verdict"]["basis"]), "gb: verdict echo")


def _chk_member(cert, problem, order):
    tbl, base = _vtables(problem)
    f = _vparse(problem["payload"]["f"], tbl, "f parse")
    gens = _vparse_list(problem["payload"]["gens"], tbl, "gens parse")
    rel = _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    eff = gens + tuple(r.cast(tbl) for r in rel)
    if cert["verdict"]["member"]:
        _require(
            _combo_ok(f, cert["witness"]["cofactors"], eff, tbl),
            "member: cofactor reconstruction",
        )
    else:
        basis = _check_gb_witness(cert["witness"]["basis_witness"], eff, order, tbl, "member")
        rem = _divide(f, basis, order, tbl)
        _require(str(rem) == cert["witness"]["remainder"], "member: remainder echo")
        _require(bool(rem.terms), "member: remainder is zero")


def _chk_eliminate(cert, problem, order):
    tbl, _ = _vtables(problem)
    gens = _vparse_list(problem["payload"]["gens"], tbl, "gens parse")
    drop = set(problem["payload"]["drop"])
    out_tbl = tbl.without(drop)
    out = _vparse_list(cert["verdict"]["gens"], out_tbl, "verdict parse")
    for g, row in zip(out, cert["witness"]["cofactors"]):
        _require(_combo_ok(g.cast(tbl), row, gens, tbl), "eliminate: cofactors")
    _require(len(out) == len(cert["witness"]["cofactors"]), "eliminate: row count")


def _chk_colon(cert, problem, order):
    tbl, base = _vtables(problem)
    gens = _vparse_list(problem["payload"]["gens"], tbl, "gens parse")
    f = _vparse(problem["payload"]["f"], tbl, "f parse")
    rel = _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    eff = gens + tuple(r.cast(tbl) for r in rel)
    out = _vparse_list(cert["verdict"]["gens"], tbl, "verdict parse")
    _require(len(out) == len(cert["witness"]["cofactors"]), "colon: row count")
    for q, row in zip(out, cert["witness"]["cofactors"]):
        _require(_combo_ok(q * f, row, eff, tbl), "colon: cofactors")


def _chk_saturate(cert, problem, order):
    tbl, base = _vtables(problem)
    gens = _vparse_list(problem["payload"]["gens"], tbl, "gens parse")
    f = _vparse(problem["payload"]["f"], tbl, "f parse")
    rel = _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    eff = gens + tuple(r.cast(tbl) for r in rel)
    out = _vparse_list(cert["verdict"]["gens"], tbl, "verdict parse")
    powers = cert["witness"]["powers"]
    rows = cert["witness"]["cofactors"]
    _require(len(out) == len(rows) == len(powers), "saturate: row count")
    for g, m, row in zip(out, powers, rows):
        _require(_combo_ok(g * f**m, row, eff, tbl), "saturate: cofactors")


def _chk_intersect(cert, problem, order):
    tbl, _ = _vtables(problem)
    gens_a = _vparse_list(problem["payload"]["gens_a"], tbl, "gens_a parse")
    gens_b = _vparse_list(problem["payload"]["gens_b"], tbl, "gens_b parse")
    out = _vparse_list(cert["verdict"]["gens"], tbl, "verdict parse")
    for g, ra, rb in zip(out, cert["witness"]["cofactors_a"], cert["witness"]["cofactors_b"]):
        _require(_combo_ok(g, ra, gens_a, tbl), "intersect: left cofactors")
        _require(_combo_ok(g, rb, gens_b, tbl), "intersect: right cofactors")


def _chk_primitive(cert, problem, order):
    tbl, base = _vtables(problem)
    f = _vparse(problem["payload"]["f"], tbl, "f parse")
    rel = tuple(
        r.cast(tbl)
        for r in _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    )
    if cert["verdict"]["primitive"]:
        _check_primitivity(cert["witness"], f, rel, tbl, "primitive")
    else:
        src = _content_source((f,), rel, tbl) if f.terms else ()
        tfree = tbl.without(("t",))
        basis = _check_gb_witness(
            cert["witness"]["content_gb_witness"], src, GREVLEX, tfree, "primitive"
        )
        _require(all(not b.is_one() for b in basis), "primitive: content is unit")


def _chk_nagata_member(cert, problem, order):
    tbl, base = _vtables(problem)
    rel = tuple(
        r.cast(tbl)
        for r in _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    )
    num_s = problem["payload"]["num"]
    den_s = problem["payload"].get("den", "1")
    num = _vparse(num_s, tbl, "num parse")
    den = _vparse(den_s, tbl, "den parse")
    got = _check_nagata_witness(
        cert["witness"], tbl, rel, "nagata-member", expected_num=num, expected_den=den
    )
    _require(got == cert["verdict"]["member"], "nagata-member: verdict echo")


def _chk_relevant(cert, problem, order):
    tbl, base = _vtables(problem)
    rel = tuple(
        r.cast(tbl)
        for r in _vparse_list(problem["payload"].get("relations", []), base, "relations parse")
    )
    expected = []
    for i, obj in enumerate(problem["payload"]["gens"]):
        if isinstance(obj, str):
            expected.append((_vparse(obj, tbl, "gens parse"), Poly.one(tbl)))
        else:
            expected.append(
                (
                    _vparse(obj["num"], tbl, "gens parse"),
                    _vparse(obj.get("den", "1"), tbl, "gens parse"),
                )
            )
    _check_relevance_witness(
        cert["witness"], tbl, rel, expected, cert["verdict"], "relevant"
    )


def _chk_charts(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    _require(
        cert["verdict"]["charts"] == cert["charts"], "charts: verdict echo"
    )
    _require(len(model.charts) == len(cert["charts"]), "charts: count")


def _chk_glue(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    sheaf_gens = _vparse_sheaf(problem, model, "glue")
    if cert["verdict"]["glues"]:
        checks = cert["witness"]["checks"]
        pos = 0
        n = len(model.charts)
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                ci, cj = model.charts[i], model.charts[j]
                target = tuple(sheaf_gens[i]) + tuple(ci.relations.gens)
                y_j = Poly.var(ci.table, f"y{j + 1}")
                for g in sheaf_gens[j]:
                    if not g.terms:
                        continue
                    _require(pos < len(checks), "glue: coverage")
                    entry = checks[pos]
                    pos += 1
                    _require(entry["pair"] == [i + 1, j + 1], "glue: pair order")
                    _require(entry["generator"] == str(g), "glue: generator echo")
                    moved = transition(model, cj, ci, g)
                    _require(entry["cleared"] == str(moved.num), "glue: cleared form")
                    h = moved.num * y_j ** entry["exponent"]
                    _require(
                        _combo_ok(h, entry["cofactors"], target, ci.table),
                        "glue: membership cofactors",
                    )
        _require(pos == len(checks), "glue: extra checks")
    else:
        w = cert["witness"]
        i, j = w["pair"][0] - 1, w["pair"][1] - 1
        ci, cj = model.charts[i], model.charts[j]
        g = _vparse(w["generator"], cj.table, "glue: generator parse")
        moved = transition(model, cj, ci, g)
        _require(w["cleared"] == str(moved.num), "glue: cleared form")
        basis = _vparse_list(w["sat_basis"], ci.table, "glue: basis parse")
        _require(
            certify_gb((), basis, GREVLEX, ci.table), "glue: saturation basis shape"
        )
        rem = _divide(moved.num, basis, GREVLEX, ci.table)
        _require(str(rem) == w["remainder"], "glue: remainder echo")
        _require(bool(rem.terms), "glue: remainder is zero")


def _chk_pullback(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    gens = _vparse_list(problem["payload"]["gens"], model.ground, "gens parse")
    nonzero = [g for g in gens if g.terms]
    for chart, listed in zip(model.charts, cert["verdict"]["sheaf"]):
        expected = [str(g.cast(chart.table)) for g in nonzero]
        _require(listed == expected, "pullback: chart generators")


def _chk_contract(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    chart = model.charts[problem["payload"]["chart"] - 1]
    gens = _vparse_list(problem["payload"]["gens"], chart.table, "gens parse")
    eff = tuple(gens) + tuple(chart.relations.gens)
    out = _vparse_list(cert["verdict"]["gens"], model.ground, "verdict parse")
    for g, row in zip(out, cert["witness"]["cofactors"]):
        _require(
            _combo_ok(g.cast(chart.table), row, eff, chart.table),
            "contract: cofactors",
        )
    _require(len(out) == len(cert["witness"]["cofactors"]), "contract: row count")


def _chk_dstar_member(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    gtw = model.ground.with_t()
    num = _vparse(problem["payload"]["num"], gtw, "num parse")
    den = _vparse(problem["payload"].get("den", "1"), gtw, "den parse")
    _check_dstar_witness(cert["witness"], model, num, den, cert["verdict"], "dstar-member")


def _check_dstar_witness(w, model, num, den, verdict, where):
    cws = w["chart_witnesses"]
    _require(len(cws) == len(model.charts), f"{where}: chart coverage")
    failing = None
    for chart, cw in zip(model.charts, cws):
        twt = chart.tctx.table
        got = _check_nagata_witness(
            cw,
            twt,
            tuple(chart.relations.gens),
            f"{where}: chart {chart.index + 1}",
            expected_num=num.cast(twt) if num is not None else None,
            expected_den=den.cast(twt) if den is not None else None,
        )
        if not got and failing is None:
            failing = chart.index + 1
    _require(w["member"] == (failing is None), f"{where}: member flag")
    _require(w["failing_chart"] == failing, f"{where}: failing chart")
    if verdict is not None:
        _require(verdict["member"] == w["member"], f"{where}: verdict echo")
        _require(verdict.get("failing_chart") == failing, f"{where}: verdict chart echo")


def _chk_theta(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    perm = problem["payload"].get("permutation")
    perm0 = None if perm is None else tuple(k - 1 for k in perm)
    th = theta(model, perm0)
    _require(str(th) == cert["verdict"]["theta"], "theta: echo")
    quots = cert["witness"]["quotients"]
    _require(len(quots) == len(model.center), "theta: quotient coverage")
    all_member = True
    gtw = model.ground.with_t()
    for a, qw in zip(model.center, quots):
        _check_dstar_witness(qw, model, a.cast(gtw), th, None, "theta: quotient")
        all_member = all_member and qw["member"]
    prims = cert["witness"]["chart_primitivity"]
    _require(len(prims) == len(model.charts), "theta: primitivity coverage")
    for chart, pw in zip(model.charts, prims):
        expected = chart_theta(model, chart, perm0)
        _check_primitivity(
            pw, expected, tuple(chart.relations.gens), chart.tctx.table,
            f"theta: chart {chart.index + 1}",
        )
    _require(cert["verdict"]["ok"] == all_member, "theta: verdict echo")


def _chk_phi(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    gtw = model.ground.with_t()
    payload = problem["payload"]
    alphas = []
    for i, obj in enumerate(payload["alphas"]):
        if isinstance(obj, str):
            alphas.append((_vparse(obj, gtw, "alpha parse"), Poly.one(gtw)))
        else:
            alphas.append(
                (
                    _vparse(obj["num"], gtw, "alpha parse"),
                    _vparse(obj.get("den", "1"), gtw, "alpha parse"),
                )
            )
    c = cert["verdict"]["spacing"]
    ti = gtw.index("t")
    phi_num, phi_den = None, None
    for i, (an, ad) in enumerate(alphas):
        mono = [0] * len(gtw)
        mono[ti] = i * c
        part_num = an.mul_term(tuple(mono), 1)
        if phi_num is None:
            phi_num, phi_den = part_num, ad
        else:
            phi_num = phi_num * ad + part_num * phi_den
            phi_den = phi_den * ad
    _require(str(phi_num) == cert["verdict"]["phi"]["num"], "phi: numerator echo")
    _require(str(phi_den) == cert["verdict"]["phi"]["den"], "phi: denominator echo")
    units = cert["witness"]["chart_units"]
    _require(len(units) == len(model.charts), "phi: chart coverage")
    for chart, pair in zip(model.charts, units):
        twt = chart.tctx.table
        rel = tuple(chart.relations.gens)
        okf = _check_nagata_witness(
            pair["forward"], twt, rel, "phi: forward",
            expected_num=phi_num.cast(twt), expected_den=phi_den.cast(twt),
        )
        oki = _check_nagata_witness(
            pair["inverse"], twt, rel, "phi: inverse",
            expected_num=phi_den.cast(twt), expected_den=phi_num.cast(twt),
        )
        _require(okf and oki, "phi: unit membership")
    for entry in cert["witness"]["input_units"]:
        chart = model.charts[entry["chart"] - 1]
        twt = chart.tctx.table
        rel = tuple(chart.relations.gens)
        okf = _check_nagata_witness(entry["forward"], twt, rel, "phi: input forward")
        oki = _check_nagata_witness(entry["inverse"], twt, rel, "phi: input inverse")
        _require(okf and oki, "phi: input unit membership")
        fwd_num = parse_poly(entry["forward"]["num"], twt)
        fwd_den = parse_poly(entry["forward"]["den"], twt)
        inv_num = parse_poly(entry["inverse"]["num"], twt)
        inv_den = parse_poly(entry["inverse"]["den"], twt)
        _require(
            fwd_num == inv_den and fwd_den == inv_num, "phi: input pair consistency"
        )


def _chk_to_relevant(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    sheaf_gens = _vparse_sheaf(problem, model, "to-relevant")
    reports = cert["witness"]["relevance"]
    _require(len(reports) == len(model.charts), "to-relevant: relevance coverage")
    for chart, gens, rw in zip(model.charts, sheaf_gens, reports):
        twt = chart.tctx.table
        expected = [(g.cast(twt), Poly.one(twt)) for g in gens if g.terms]
        _check_relevance_witness(
            rw, twt, tuple(chart.relations.gens), expected,
            {"relevant": True, "failing_coefficient": None},
            f"to-relevant: chart {chart.index + 1}",
        )
    gens_v = cert["verdict"]["gens"]
    elements = cert["witness"]["elements"]
    _require(len(gens_v) == len(elements), "to-relevant: element coverage")
    gtw = model.ground.with_t()
    for gv, ew in zip(gens_v, elements):
        num = _vparse(gv["num"], gtw, "to-relevant: gen parse")
        den = _vparse(gv["den"], gtw, "to-relevant: gen parse")
        _check_dstar_witness(ew, model, num, den, None, "to-relevant: element")
        _require(ew["member"], "to-relevant: element membership")
    contractions = cert["verdict"]["contractions"]
    eqs = cert["witness"]["contraction_equality"]
    _require(len(contractions) == len(model.charts) == len(eqs), "to-relevant: contraction coverage")
    for chart, gens, listed, eq in zip(model.charts, sheaf_gens, contractions, eqs):
        c_gens = _vparse_list(listed, chart.table, "to-relevant: contraction parse")
        eff_a = tuple(g for g in gens if g.terms) + tuple(chart.relations.gens)
        eff_b = tuple(c_gens) + tuple(chart.relations.gens)
        _check_equality_witness(
            eq, eff_a, eff_b, chart.table, f"to-relevant: chart {chart.index + 1} contraction"
        )


def _chk_to_sheaf(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    gtw = model.ground.with_t()
    expected_ground = []
    for obj in problem["payload"]["gens"]:
        if isinstance(obj, str):
            expected_ground.append((_vparse(obj, gtw, "gens parse"), Poly.one(gtw)))
        else:
            expected_ground.append(
                (
                    _vparse(obj["num"], gtw, "gens parse"),
                    _vparse(obj.get("den", "1"), gtw, "gens parse"),
                )
            )
    if not cert["verdict"]["relevant"]:
        idx = cert["verdict"]["failing_chart"] - 1
        chart = model.charts[idx]
        twt = chart.tctx.table
        expected = [(n.cast(twt), d.cast(twt)) for n, d in expected_ground]
        _check_relevance_witness(
            cert["witness"]["relevance"][0], twt, tuple(chart.relations.gens),
            expected, {"relevant": False, "failing_coefficient": cert["verdict"]["failing_coefficient"]},
            "to-sheaf: failing chart",
        )
        return
    if not cert["verdict"].get("glues", True):
        return
    reports = cert["witness"]["relevance"]
    _require(len(reports) == len(model.charts), "to-sheaf: relevance coverage")
    sheaf_listed = cert["verdict"]["sheaf"]
    for chart, rw, listed in zip(model.charts, reports, sheaf_listed):
        twt = chart.tctx.table
        expected = [(n.cast(twt), d.cast(twt)) for n, d in expected_ground]
        _check_relevance_witness(
            rw, twt, tuple(chart.relations.gens), expected,
            {"relevant": True, "failing_coefficient": None},
            f"to-sheaf: chart {chart.index + 1}",
        )
        _require(listed == rw["content_gens"], "to-sheaf: sheaf from content")
    # glue witness over the emitted sheaf
    sheaf_polys = [
        _vparse_list(listed, chart.table, "to-sheaf: sheaf parse")
        for chart, listed in zip(model.charts, sheaf_listed)
    ]
    _check_glue_positive(cert["witness"]["glue"], model, sheaf_polys, "to-sheaf")


def _check_glue_positive(w, model, sheaf_polys, where):
    checks = w["checks"]
    pos = 0
    n = len(model.charts)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ci, cj = model.charts[i], model.charts[j]
            target = tuple(sheaf_polys[i]) + tuple(ci.relations.gens)
            y_j = Poly.var(ci.table, f"y{j + 1}")
            for g in sheaf_polys[j]:
                if not g.terms:
                    continue
                _require(pos < len(checks), f"{where}: glue coverage")
                entry = checks[pos]
                pos += 1
                _require(entry["pair"] == [i + 1, j + 1], f"{where}: glue pair order")
                _require(entry["generator"] == str(g), f"{where}: glue generator echo")
                moved = transition(model, cj, ci, g)
                _require(entry["cleared"] == str(moved.num), f"{where}: glue cleared form")
                h = moved.num * y_j ** entry["exponent"]
                _require(
                    _combo_ok(h, entry["cofactors"], target, ci.table),
                    f"{where}: glue membership cofactors",
                )
    _require(pos == len(checks), f"{where}: glue extra checks")


def _chk_roundtrip(cert, problem, order):
    model = _rebuild_model_from_cert(cert, problem)
    sheaf_gens = _vparse_sheaf(problem, model, "roundtrip")
    _require(cert["verdict"]["roundtrip"] is True, "roundtrip: negative verdicts carry no witness")
    back = cert["verdict"]["back"]
    eqs = cert["witness"]["equality"]
    _require(len(back) == len(model.charts) == len(eqs), "roundtrip: coverage")
    for chart, gens, listed, eq in zip(model.charts, sheaf_gens, back, eqs):
        b_gens = _vparse_list(listed, chart.table, "roundtrip: back parse")
        eff_a = tuple(g for g in gens if g.terms) + tuple(chart.relations.gens)
        eff_b = tuple(b_gens) + tuple(chart.relations.gens)
        _check_equality_witness(
            eq, eff_a, eff_b, chart.table, f"roundtrip: chart {chart.index + 1}"
        )


_CHECKERS = {
    "gb": _chk_gb,
    "member": _chk_member,
    "eliminate": _chk_eliminate,
    "colon": _chk_colon,
    "saturate": _chk_saturate,
    "intersect": _chk_intersect,
    "primitive": _chk_primitive,
    "nagata-member": _chk_nagata_member,
    "relevant": _chk_relevant,
    "charts": _chk_charts,
    "glue": _chk_glue,
    "pullback": _chk_pullback,
    "contract": _chk_contract,
    "dstar-member": _chk_dstar_member,
    "theta": _chk_theta,
    "phi": _chk_phi,
    "to-relevant": _chk_to_relevant,
    "to-sheaf": _chk_to_sheaf,
    "roundtrip": _chk_roundtrip,
}


def dumps_certificate(cert):
    """Deterministic serialization (byte-identical for identical problems)."""
    return json.dumps(cert, sort_keys=True, indent=2) + "\n"
