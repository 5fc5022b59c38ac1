"""Exact computations with weighted incidence strata of configuration spaces."""

from .exact import FractionPoly, SparsePoly, VarId, divexact, gen_binomial, mvar, parse_poly, pvar, xvar
from .linalg import SpanCertificate, express_in_span, parametric_express_in_span, rank
from .profiles import ColoredProfile, ProfileError, WeightVector, is_admissible
from .stabilization import (
    NkResult,
    RelationCertificate,
    compute_nk,
    embedding_dim_bound,
    graded_membership,
    propagate_relation,
    symbolic_nk_relation,
    verify_known_identities,
)
from .weighted import WeightedContext, hankel_vandermonde, newton_convert, series_coefficients, weighted_e, weighted_p

__version__ = "0.1.0"

__all__ = [
    "ColoredProfile",
    "FractionPoly",
    "NkResult",
    "ProfileError",
    "RelationCertificate",
    "SparsePoly",
    "SpanCertificate",
    "VarId",
    "WeightVector",
    "WeightedContext",
    "compute_nk",
    "divexact",
    "embedding_dim_bound",
    "express_in_span",
    "gen_binomial",
    "graded_membership",
    "hankel_vandermonde",
    "is_admissible",
    "mvar",
    "newton_convert",
    "parametric_express_in_span",
    "parse_poly",
    "propagate_relation",
    "pvar",
    "rank",
    "series_coefficients",
    "symbolic_nk_relation",
    "verify_known_identities",
    "weighted_e",
    "weighted_p",
    "xvar",
]
