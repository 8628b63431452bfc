"""Exact homotopy transfer of ∞-structures along chain maps, arity by arity."""

from .linalg import GF, QQ, Field, Matrix, PrimeField, Rationals, field_from_name
from .gradedcx import ChainComplex, GradedMap, GradedModule, HomSlice, homology, koszul_apply
from .cooperad import Cooperad, as_cooperad, planar_tree_cooperad, validate

__all__ = [
    "GF", "QQ", "Field", "Matrix", "PrimeField", "Rationals", "field_from_name",
    "ChainComplex", "GradedMap", "GradedModule", "HomSlice", "homology", "koszul_apply",
    "Cooperad", "as_cooperad", "planar_tree_cooperad", "validate",
]
