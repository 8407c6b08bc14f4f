"""Commutative algebra over the polynomial ring: Groebner bases for ideals
and submodules, syzygies, saturation, membership, rank stratification, and
emptiness certificates."""

from .verdict import Verdict
from .presentation import (
    SaturationResult,
    SubmodulePresentation,
    colon_by_ideal,
    colon_by_poly,
    groebner_basis,
    intersect,
    module_membership,
    saturate,
    syzygies,
)
from .rank import RankProfile, rank_profile
from .variety import COMPLEX, REAL, variety_emptiness
from . import linalg

__all__ = [
    "Verdict",
    "SubmodulePresentation",
    "SaturationResult",
    "groebner_basis",
    "syzygies",
    "saturate",
    "colon_by_poly",
    "colon_by_ideal",
    "intersect",
    "module_membership",
    "RankProfile",
    "rank_profile",
    "variety_emptiness",
    "REAL",
    "COMPLEX",
    "linalg",
]
