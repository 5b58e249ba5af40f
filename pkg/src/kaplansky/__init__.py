"""Exact Hahn-series arithmetic, value semigroups, regular fans and embedded Kaplansky embeddings."""

from __future__ import annotations

from .embed import (
    EmbeddingResult,
    Relation,
    TorificPresentation,
    automorphism_intertwine_check,
    kaplansky_embed_fg,
    presentation_from_parametrization,
    strict_transform,
    verify_embedding,
)
from .fields import GF, QQ, CoeffField, ExtensionRequired
from .hahn import CutoffError, HahnRing, HahnSeries, apply_group_automorphism, substitute
from .ordered_group import INFINITY, GroupContext, GroupElement, PrecisionCeilingError, Weight
from .polynomial import Poly
from .pseudo import check_pseudo_convergent, is_limit, limit_difference_check
from .semigroup import Semigroup, minimal_generators, relation_lattice
from .toric import Cone, Fan, WeightVector, audit_fan, find_sigma_w, regular_subdivision
from .tower import approximation_tower

__version__ = "0.1.0"

__all__ = [
    "CoeffField",
    "Cone",
    "CutoffError",
    "EmbeddingResult",
    "ExtensionRequired",
    "Fan",
    "GF",
    "GroupContext",
    "GroupElement",
    "HahnRing",
    "HahnSeries",
    "INFINITY",
    "Poly",
    "PrecisionCeilingError",
    "QQ",
    "Relation",
    "Semigroup",
    "TorificPresentation",
    "Weight",
    "WeightVector",
    "apply_group_automorphism",
    "approximation_tower",
    "audit_fan",
    "automorphism_intertwine_check",
    "check_pseudo_convergent",
    "find_sigma_w",
    "is_limit",
    "kaplansky_embed_fg",
    "limit_difference_check",
    "minimal_generators",
    "presentation_from_parametrization",
    "regular_subdivision",
    "relation_lattice",
    "strict_transform",
    "substitute",
    "verify_embedding",
]
