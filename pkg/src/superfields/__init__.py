"""Exact computations with Lie superalgebras of polynomial vector fields."""

from .superpoly import Coords, SuperPoly, VarSpec
from .svf import Forms, GradedSpan, SuperVectorField, bracket, divergence, grading_operator

__all__ = [
    "Coords",
    "Forms",
    "GradedSpan",
    "SuperPoly",
    "SuperVectorField",
    "VarSpec",
    "bracket",
    "divergence",
    "grading_operator",
]

__version__ = "0.1.0"
