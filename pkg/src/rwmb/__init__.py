"""Exact verification of regular weak multiplier bimonoid conditions on finite graded examples."""

__version__ = "0.1.0"

from .core import RwmbStructure, check_rwmb, complete_structure, dualize
from .graded import (
    Bicharacter,
    BraidedContext,
    GradedMorphism,
    GradedObject,
    GradingGroup,
)
from .linalg import QQ, ExactMatrix, FieldSpec
from .report import Report

__all__ = [
    "ExactMatrix", "FieldSpec", "QQ", "BraidedContext", "GradedObject", "GradedMorphism",
    "GradingGroup", "Bicharacter", "Report", "RwmbStructure", "check_rwmb", "complete_structure",
    "dualize",
]
