"""Exact blowup-chart and Nagata function-ring calculus over Q[x1..xm].

The toolkit computes with

* exact multivariate polynomials and Groebner bases over Q,
* blowup charts of Q[x...] along a finitely generated center, presented
  as polynomial rings modulo saturated relations,
* Nagata function rings R(t) (localizations of R[t] at the primitive
  polynomials): membership, units, relevance of ideals,
* the intersection ring of all chart Nagata rings, including the
  bijection between glued chart-ideal families and its relevant ideals,

and emits machine-checkable certificates for every verdict (see
``blowstar.cli`` for the batch front end and the verifier).
"""

from .errors import (
    BlowstarError,
    CertificationError,
    GlueError,
    NotInNagataRing,
    ParseError,
    RelevanceError,
    UsageError,
)
from .orders import GREVLEX, LEX, Order, block, compare
from .poly import (
    Poly,
    Rat,
    VarTable,
    coeffs_in_t,
    deg_t,
    parse_poly,
    poly_from_t_coeffs,
    subst,
    subst_common_den,
    table,
)
from .ideals import (
    Ideal,
    MemberResult,
    QuotientCtx,
    certify_gb,
    colon,
    content_ideal,
    eliminate,
    groebner,
    intersect,
    is_unit_ideal,
    member,
    nf_poly,
    reduced_groebner,
    reduced_groebner_tracked,
    same_ideal,
    saturate,
)
from .nagata import (
    ExtMemberCert,
    NagataCert,
    RelevanceReport,
    TFrac,
    UnitResult,
    extension_member,
    is_primitive,
    is_relevant,
    nagata_is_unit,
    nagata_member,
    recheck_nagata_cert,
    spaced_combination,
)
from .blowup import (
    BlowupModel,
    Chart,
    GlueReport,
    IdealSheaf,
    build_model,
    contract_to_ground,
    embed,
    glue_check,
    min_clearing_exponent,
    pullback,
    sheaves_equal,
    transition,
)
from .dstar import (
    DStarElement,
    DStarVerdict,
    PhiReport,
    RelevantIdealRep,
    ThetaReport,
    chart_theta,
    dstar_member,
    ground_t_ctx,
    phi_survival,
    relevant_to_sheaf,
    roundtrip_check,
    sheaf_to_relevant,
    theta,
    verify_theta,
)
from .kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
