"""
Coalgebras
Coalgebras over the projective tensor product: law residuals, contraction verdicts and morphisms
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError, ShapeMismatchError
from ..linalg.matrix_core import matrix_to_literal
from ..spaces.maps import OSMap, Verdict, is_complete_contraction
from ..spaces.ospace import OSpace, scalars
from ..spaces.tensor import TensorSpace, symmetry

STRICT_TOLERANCE = 1e-12


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a), initial=0.0))


class Coalgebra:
    """
    Space X with comultiplication c: X -> X (x)^ X and counit d: X -> C

    comul is d^2 x d (column s holds the coordinates of c(b_s), index t*d + u),
    counit is 1 x d.
    """

    def __init__(self, space: OSpace, comul: Any, counit: Any, strict: bool = False, name: Optional[str] = None):
        d = space.dim
        comul = np.asarray(comul, dtype=np.complex128)
        counit = np.asarray(counit, dtype=np.complex128).reshape(1, -1) if np.size(counit) else np.zeros((1, d), dtype=np.complex128)
        if comul.shape != (d * d, d):
            raise ShapeMismatchError(f"comultiplication must be {d * d} x {d}", {"shape": list(comul.shape)})
        if counit.shape != (1, d):
            raise ShapeMismatchError(f"counit must be 1 x {d}", {"shape": list(counit.shape)})
        self.space = space
        self.comul = comul
        self.counit = counit
        self.strict = strict
        self.name = name or f"coalg({space.name})"
        self.tensor = TensorSpace(space, space)
        self.unit_space = scalars(space.budget, space.tolerances)

        if strict:
            residuals = self.law_residuals()
            worst = max(residuals["left_counit"], residuals["right_counit"], residuals["coassociativity"])
            if worst > STRICT_TOLERANCE:
                raise InvalidInputError(f"{self.name} is marked strict but its laws fail", residuals)

    @property
    def dim(self) -> int:
        return self.space.dim

    def comul_map(self) -> OSMap:
        return OSMap(self.space, self.tensor, self.comul, f"c_{self.name}")

    def counit_map(self) -> OSMap:
        return OSMap(self.space, self.unit_space, self.counit, f"d_{self.name}")

    def law_residuals(self) -> Dict[str, float]:
        """Max-abs residuals of the counit, coassociativity and cocommutativity identities"""
        d = self.dim
        eye = np.eye(d, dtype=np.complex128)
        c, e = self.comul, self.counit
        return {
            "left_counit": _max_abs(np.kron(e, eye) @ c - eye),
            "right_counit": _max_abs(np.kron(eye, e) @ c - eye),
            "coassociativity": _max_abs(np.kron(c, eye) @ c - np.kron(eye, c) @ c),
            "cocommutativity": _max_abs(symmetry(self.space, self.space).coeff @ c - c),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "space": self.space.to_dict(),
            "comul": matrix_to_literal(self.comul),
            "counit": matrix_to_literal(self.counit),
            "strict": self.strict,
        }


@dataclass
class CoalgebraReport:
    """Law residuals and contraction verdicts of a coalgebra"""
    name: str
    residuals: Dict[str, float]
    comul_contraction: Optional[Verdict] = None
    counit_contraction: Optional[Verdict] = None

    def laws_hold(self, tol: float = 1e-8, commutative: bool = False) -> bool:
        keys = ["left_counit", "right_counit", "coassociativity"] + (["cocommutativity"] if commutative else [])
        return all(self.residuals[k] <= tol for k in keys)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "residuals": self.residuals,
            "comul_contraction": self.comul_contraction.to_dict() if self.comul_contraction else None,
            "counit_contraction": self.counit_contraction.to_dict() if self.counit_contraction else None,
        }


def check_laws(
    C: Coalgebra,
    level_cap: int = 2,
    tol: float = 1e-6,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    verdicts: bool = True
) -> CoalgebraReport:
    """
    Law residuals (exact linear algebra) and complete contractivity of c and d

    Undecided verdicts are reported and never block the residual report.
    """
    residuals = C.law_residuals()
    report = CoalgebraReport(C.name, residuals)
    if verdicts:
        report.comul_contraction = is_complete_contraction(C.comul_map(), level_cap, tol, budget, tolerances)
        report.counit_contraction = is_complete_contraction(C.counit_map(), level_cap, tol, budget, tolerances)
    if not report.laws_hold(tol):
        logger.info(f"{C.name}: coalgebra laws fail (residuals {residuals})")
    return report


@dataclass
class MorphismReport:
    """Residuals of (f (x) f) c = c' f and d' f = d"""
    comul_residual: float
    counit_residual: float
    contraction: Optional[Verdict] = None
    extra: Dict[str, float] = field(default_factory=dict)

    def holds(self, tol: float = 1e-8) -> bool:
        return self.comul_residual <= tol and self.counit_residual <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "comul_residual": self.comul_residual,
            "counit_residual": self.counit_residual,
            "contraction": self.contraction.to_dict() if self.contraction else None,
            **self.extra,
        }


def check_morphism(
    f: OSMap,
    C: Coalgebra,
    C_prime: Coalgebra,
    level: int = 1,
    tol: float = 1e-6,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    verdicts: bool = True
) -> MorphismReport:
    """
    Coalgebra morphism residuals of f: C -> C'

    Raises:
        InvalidInputError: If f does not run between the coalgebra spaces
    """
    if f.dom.dim != C.dim or f.cod.dim != C_prime.dim:
        raise InvalidInputError(
            "map does not run between the coalgebra spaces",
            {"map": [f.cod.dim, f.dom.dim], "coalgebras": [C_prime.dim, C.dim]}
        )
    comul = _max_abs(np.kron(f.coeff, f.coeff) @ C.comul - C_prime.comul @ f.coeff)
    counit = _max_abs(C_prime.counit @ f.coeff - C.counit)
    contraction = is_complete_contraction(f, level, tol, budget, tolerances) if verdicts else None
    return MorphismReport(comul, counit, contraction)


def trivial_coalgebra() -> Coalgebra:
    """C with c(1) = 1 (x) 1 and d = id"""
    return Coalgebra(scalars(), [[1.0]], [[1.0]], strict=True, name="trivial")


def dual_algebra_residuals(C: Coalgebra) -> Dict[str, float]:
    """Associativity and unit residuals of the transposed structure on dual coordinates"""
    d = C.dim
    eye = np.eye(d, dtype=np.complex128)
    m = C.comul.T
    unit = C.counit.T
    return {
        "associativity": _max_abs(m @ np.kron(m, eye) - m @ np.kron(eye, m)),
        "left_unit": _max_abs(m @ np.kron(unit, eye) - eye),
        "right_unit": _max_abs(m @ np.kron(eye, unit) - eye),
        "commutativity": _max_abs(m @ symmetry(C.space, C.space).coeff - m),
    }


def couniversality_demo(C: Coalgebra, G: Coalgebra, epsilon: OSMap, f: OSMap, f_hat: OSMap) -> MorphismReport:
    """
    Check a supplied cofree candidate: f_hat: C -> G is a coalgebra morphism
    and epsilon f_hat = f
    """
    if epsilon.dom.dim != G.dim or f.dom.dim != C.dim or epsilon.cod.dim != f.cod.dim:
        raise InvalidInputError("cofree candidate maps do not fit together")
    report = check_morphism(f_hat, C, G, verdicts=False)
    report.extra["lift_residual"] = _max_abs(epsilon.coeff @ f_hat.coeff - f.coeff)
    return report
