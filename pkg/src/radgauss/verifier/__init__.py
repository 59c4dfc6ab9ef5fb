"""Certified checks of the inequalities behind the tail bound, plus searches."""

from .induction import verify_induction
from .certify import (
    certify_g_above_chebyshev,
    mixture,
    quadratic_coefficient,
    verify_all,
    verify_mixture_x_ge_sqrt3,
    verify_rectangle,
    verify_region,
    witness_scan,
)
from .regions import (
    GEOMETRY,
    RegionGeometry,
    RegionId,
    boundary_u,
    boundary_u_lower_root,
    boundary_u_upper_root,
    boundary_v_root,
    edge_k,
    region_of,
)
from .report import CERTIFIED, INCONCLUSIVE, REFUTED, VerificationReport
from .search import search_worst_ratio

__all__ = [
    "CERTIFIED",
    "GEOMETRY",
    "INCONCLUSIVE",
    "REFUTED",
    "RegionGeometry",
    "RegionId",
    "VerificationReport",
    "boundary_u",
    "boundary_u_lower_root",
    "boundary_u_upper_root",
    "boundary_v_root",
    "certify_g_above_chebyshev",
    "edge_k",
    "mixture",
    "quadratic_coefficient",
    "region_of",
    "search_worst_ratio",
    "verify_all",
    "verify_induction",
    "verify_mixture_x_ge_sqrt3",
    "verify_rectangle",
    "verify_region",
    "witness_scan",
]
