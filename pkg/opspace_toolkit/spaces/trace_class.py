"""
Trace Class
T_n = M_n*, the contraction lemma T_n -> X and the strong-generator witness search
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError
from ..linalg.matrix_core import Interval
from ..utils.parallel import restart_rng
from .constructions import DualSpace, is_mono
from .maps import OSMap, fiber_minimum, shuffle_probe
from .ospace import LevelElement, OSpace, SpaceKind, matrix_algebra


def make_Tn(n: int, budget: Optional[Budget] = None, tolerances: Optional[Tolerances] = None) -> DualSpace:
    """
    Trace class T_n as the dual of M_n

    Coordinate i*n + j is the value on the matrix unit e_ij, so the level-1
    norm of a coefficient matrix b is its trace norm.
    """
    if n < 1:
        raise InvalidInputError("T_n needs n >= 1", {"n": n})
    return DualSpace(matrix_algebra(n, budget, tolerances), SpaceKind.TRACE_CLASS, name=f"T_{n}")


def trace_pairing(a: Any, b: Any) -> complex:
    """<a, b> = sum_ij a_ij b_ij between M_n and T_n coefficient matrices"""
    return complex(np.sum(np.asarray(a, dtype=np.complex128) * np.asarray(b, dtype=np.complex128)))


def identity_grid(n: int) -> LevelElement:
    """The element t of M_n(T_n) corresponding to id_{M_n}: t_ij = e_ij*"""
    coords = np.zeros((n, n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            coords[i, j, i * n + j] = 1.0
    return LevelElement(coords)


def lemma_contraction(X: OSpace, x: LevelElement, tol: float = 1e-9, T: Optional[DualSpace] = None) -> OSMap:
    """
    The map u: T_n -> X with e_ij* -> x_ij

    ||u||_cb = ||x|| and u_n(t) = x for the identity grid t; the norm
    estimator recomputes that bound from the coefficients.

    Raises:
        InvalidInputError: If ||x|| exceeds 1
    """
    X.check_element(x)
    n = x.level
    size = X.norm(x)
    if size.hi > 1.0 + tol:
        raise InvalidInputError(
            f"lemma contraction needs an element of norm <= 1, got {size.hi:.12g}",
            {"norm": size.to_dict()}
        )
    T = T or make_Tn(n, X.budget, X.tolerances)
    coeff = x.coords.reshape(n * n, X.dim).T
    return OSMap(T, X, coeff, f"u_{X.name}")


@dataclass
class GeneratorWitness:
    """A map T_n -> cod that does not factor contractively through m"""
    level: int
    u: OSMap
    y: LevelElement
    fiber_min: float

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.level, "y_coords": self.y.to_literal(), "fiber_min_norm": self.fiber_min}


def generator_witness(
    m: OSMap,
    level_cap: int = 2,
    samples: int = 8,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    tol: float = 1e-6
) -> Optional[GeneratorWitness]:
    """
    Search for y in the open unit ball of M_n(cod) whose preimages under m_n
    all have norm >= 1

    Returns:
        GeneratorWitness for the first level with a certified gap, None when
        m behaves as a complete isometry up to level_cap

    Raises:
        InvalidInputError: If m is not injective
    """
    if level_cap < 1:
        raise InvalidInputError("level cap must be positive", {"level_cap": level_cap})
    if is_mono(m).fails:
        raise InvalidInputError(f"{m.name} is not injective", {"rank": m.rank, "dom_dim": m.dom.dim})
    if m.dom.dim == 0:
        return None

    fiber_budget = budget.scaled(restarts=min(budget.restarts, 3))
    for n in range(1, level_cap + 1):
        candidates: List[LevelElement] = [m.dom.basis_element(s, n) for s in range(m.dom.dim)]
        if n > 1:
            candidates += [shuffle_probe(m.dom.dim, n, transpose=False), shuffle_probe(m.dom.dim, n)]
        rng = restart_rng(budget.seed, (n, 41), 0)
        candidates += [m.dom.random_element(rng, n) for _ in range(samples)]

        for x in candidates:
            y = m(x)
            size = m.cod.norm(y).hi
            if size <= 0:
                continue
            y = y * (1.0 / size)
            fiber, _ = fiber_minimum(m, y, fiber_budget, tolerances)
            if fiber.lo > 1.0 + tol:
                shrink = 2.0 / (1.0 + fiber.lo)
                y = y * shrink
                u = lemma_contraction(m.cod, y)
                logger.info(f"{m.name}: level {n} element of norm < 1 needs a preimage of norm {fiber.lo * shrink:.6g}")
                return GeneratorWitness(n, u, y, fiber.lo * shrink)

    logger.info(f"No generator witness for {m.name} up to level {level_cap}")
    return None


def separating_witness(f: OSMap, g: OSMap) -> Tuple[OSMap, float]:
    """
    A map t: T_1 -> dom with f t != g t for distinct parallel maps

    Returns:
        (t, max-abs difference of f t and g t)

    Raises:
        InvalidInputError: If the maps are equal or not parallel
    """
    if f.coeff.shape != g.coeff.shape:
        raise InvalidInputError("maps are not parallel", {"f": f.name, "g": g.name})
    diff = f.coeff - g.coeff
    if not np.any(diff):
        raise InvalidInputError("maps are equal; nothing separates them")
    s = int(np.argmax(np.linalg.norm(diff, axis=0)))
    x = f.dom.basis_element(s)
    size: Interval = f.dom.norm(x)
    t = lemma_contraction(f.dom, x * (1.0 / size.hi))
    residual = float(np.max(np.abs(f.compose(t).coeff - g.compose(t).coeff)))
    return t, residual
