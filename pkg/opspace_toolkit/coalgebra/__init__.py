"""Coalgebras over the projective tensor product"""

from .coalgebra import (
    Coalgebra,
    CoalgebraReport,
    MorphismReport,
    check_laws,
    check_morphism,
    couniversality_demo,
    dual_algebra_residuals,
    trivial_coalgebra,
)

__all__ = [
    "Coalgebra",
    "CoalgebraReport",
    "MorphismReport",
    "check_laws",
    "check_morphism",
    "couniversality_demo",
    "dual_algebra_residuals",
    "trivial_coalgebra",
]
