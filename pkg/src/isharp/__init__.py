"""Exact dimensions of framed instanton homology for Dehn surgeries,
branched double covers, and small census manifolds."""

from .invariants import deduce, lspace_cable, lspace_knot_invariants
from .knots import format_knot, genus, mirror, parse_knot, structural
from .slopes import Slope, eval_cf, neg_cf, parse_slope, reduce, triad
from .surgery import (
    DimResult,
    branched_cover_dim,
    census_dim,
    homeo_identities,
    lens_dim,
    manifold_dim,
    parse_manifold,
    surgery_dim,
    triad_bounds,
    verify_identity,
    zero_surgery_dim,
)

__all__ = [
    "DimResult", "Slope", "branched_cover_dim", "census_dim", "deduce",
    "eval_cf", "format_knot", "genus", "homeo_identities", "lens_dim",
    "lspace_cable", "lspace_knot_invariants", "manifold_dim", "mirror",
    "neg_cf", "parse_knot", "parse_manifold", "parse_slope", "reduce",
    "structural", "surgery_dim", "triad", "triad_bounds", "verify_identity",
    "zero_surgery_dim",
]
