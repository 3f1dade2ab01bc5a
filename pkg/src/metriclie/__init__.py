"""Metric Lie algebras: homogeneous structures, curvature, cyclic metrics and
the classification of cyclic metric Lie algebras up to dimension five."""

from .catalog import CatalogEntry, FamilyParams, ReferenceInvariants, SemidirectSpec, canonicalize, make, make_named
from .classifier import AdaptedBasis, FamilyIdentification, adapted_basis, classify, decomposability, orthogonal_split
from .core import (
    ClassificationFailed,
    DimensionError,
    InnerProduct,
    LieAlgebra,
    MetricLieAlgebra,
    MetricLieError,
    NotCyclicError,
    UnsupportedError,
    ValidationError,
    killing_form,
    structure_report,
    validate,
)
from .curvature import curvature_property_suite, riemann
from .feasibility import find_cyclic_metric, semisimple_cyclic_metrics
from .homogeneous import HomogeneousStructure, is_cyclic, tv_decompose

__version__ = "0.1.0"

__all__ = [
    "AdaptedBasis", "CatalogEntry", "ClassificationFailed", "DimensionError", "FamilyIdentification",
    "FamilyParams", "HomogeneousStructure", "InnerProduct", "LieAlgebra", "MetricLieAlgebra", "MetricLieError",
    "NotCyclicError", "ReferenceInvariants", "SemidirectSpec", "UnsupportedError", "ValidationError",
    "adapted_basis", "canonicalize", "classify", "curvature_property_suite", "decomposability",
    "find_cyclic_metric", "is_cyclic", "killing_form", "make", "make_named", "orthogonal_split", "riemann",
    "semisimple_cyclic_metrics", "structure_report", "tv_decompose", "validate",
]
