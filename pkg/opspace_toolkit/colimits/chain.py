"""
Chain Colimits
omega-chains of operator spaces, infimum norms of classes and presentability probes
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError, ShapeMismatchError
from ..linalg.matrix_core import Interval
from ..spaces.maps import OSMap, Verdict, VerdictStatus, fiber_minimum, identity_map, is_complete_contraction
from ..spaces.ospace import AmplifiedSpace, LevelElement, OSpace, make_concrete, scalars, zero_space

MONOTONE_SLACK = 1e-10


@dataclass
class ColimitElement:
    """Element w of M_n(D_stage) standing for its class in the colimit"""
    stage: int
    element: LevelElement

    @property
    def level(self) -> int:
        return self.element.level

    def to_dict(self) -> Dict[str, Any]:
        return {"stage": self.stage, "level": self.level, "coords": self.element.to_literal()}


class ChainDiagram:
    """
    Chain D_0 -> D_1 -> ... of operator spaces with completely contractive links

    Stages and links come from callables and are memoized, so rule chains
    extend lazily to any depth. Explicit finite chains continue with identity
    links after their last stage.
    """

    def __init__(
        self,
        stage_fn: Callable[[int], OSpace],
        link_fn: Callable[[int, OSpace, OSpace], OSMap],
        name: str = "chain",
        depth: int = 40,
        limit_factor: Optional[Callable[[int], float]] = None,
        final_stage: Optional[int] = None
    ):
        """
        Initialize chain

        Args:
            stage_fn: i -> D_i
            link_fn: (i, D_i, D_i+1) -> D_(i,i+1)
            name: Display name
            depth: Default evaluation depth
            limit_factor: lambda -> c with colimit norm = c * stage norm, when known in closed form
            final_stage: Index after which every link is the identity
        """
        self.stage_fn = stage_fn
        self.link_fn = link_fn
        self.name = name
        self.depth = depth
        self.limit_factor = limit_factor
        self.final_stage = final_stage
        self._stages: Dict[int, OSpace] = {}
        self._links: Dict[int, OSMap] = {}
        self._composites: Dict[Tuple[int, int], np.ndarray] = {}

    def stage(self, i: int) -> OSpace:
        if i < 0:
            raise InvalidInputError("stage index must be non-negative", {"stage": i})
        if self.final_stage is not None and i > self.final_stage:
            return self.stage(self.final_stage)
        if i not in self._stages:
            self._stages[i] = self.stage_fn(i)
        return self._stages[i]

    def link(self, i: int) -> OSMap:
        """D_(i, i+1)"""
        if i not in self._links:
            if self.final_stage is not None and i >= self.final_stage:
                self._links[i] = identity_map(self.stage(i))
            else:
                u = self.link_fn(i, self.stage(i), self.stage(i + 1))
                if u.dom.dim != self.stage(i).dim or u.cod.dim != self.stage(i + 1).dim:
                    raise ShapeMismatchError(f"link {i} does not connect stages {i} and {i + 1}", {"shape": list(u.coeff.shape)})
                self._links[i] = u
        return self._links[i]

    def composite(self, i: int, k: int) -> np.ndarray:
        """Coefficients of D_(i,k) = D_(k-1,k) ... D_(i,i+1)"""
        if k < i:
            raise InvalidInputError("composites run forward along the chain", {"from": i, "to": k})
        if k == i:
            return np.eye(self.stage(i).dim, dtype=np.complex128)
        if (i, k) not in self._composites:
            self._composites[(i, k)] = self.link(k - 1).coeff @ self.composite(i, k - 1)
        return self._composites[(i, k)]

    def composite_map(self, i: int, k: int) -> OSMap:
        bound = 1.0
        for j in range(i, k):
            b = self.link(j).cb_bound
            bound = bound * b if b is not None and bound is not None else None
        return OSMap(self.stage(i), self.stage(k), self.composite(i, k), f"D_{i},{k}", bound)

    def push(self, e: ColimitElement, k: int) -> ColimitElement:
        """Representative of the class of e at stage k"""
        self.stage(e.stage).check_element(e.element)
        return ColimitElement(k, e.element.apply(self.composite(e.stage, k)))

    def verify_links(self, depth: Optional[int] = None, level: int = 1, budget: Budget = DEFAULT_BUDGET) -> List[Verdict]:
        """
        Contraction verdicts of the links up to depth

        Raises:
            InvalidInputError: If some link is not completely contractive
        """
        depth = self.depth if depth is None else depth
        top = depth if self.final_stage is None else min(depth, self.final_stage)
        verdicts = []
        for i in range(top):
            verdict = is_complete_contraction(self.link(i), level, budget=budget)
            if verdict.fails:
                raise InvalidInputError(f"link {i} of {self.name} is not completely contractive", verdict.to_dict())
            verdicts.append(verdict)
        return verdicts


def scalar_exp_chain(depth: int = 40, budget: Optional[Budget] = None) -> ChainDiagram:
    """D_i = C with links x exp(-2^-i); the class of 1 at stage 0 has norm exp(-2)"""
    C = scalars(budget)

    def link(i: int, a: OSpace, b: OSpace) -> OSMap:
        factor = float(np.exp(-2.0 ** (-i)))
        return OSMap(a, b, [[factor]], f"D_{i},{i + 1}", cb_bound=factor)

    return ChainDiagram(
        lambda i: C, link, "scalar_exp", depth,
        limit_factor=lambda stage: float(np.exp(-2.0 ** (1 - stage)))
    )


def truncation_chain(depth: int = 40, budget: Optional[Budget] = None) -> ChainDiagram:
    """D_i = diagonal i x i matrices, D_0 = 0, with isometric inclusions"""

    def stage(i: int) -> OSpace:
        if i == 0:
            return zero_space(budget)
        basis = [np.diag(np.eye(i)[j]) for j in range(i)]
        return make_concrete(i, basis, f"l_inf^{i}", budget)

    def link(i: int, a: OSpace, b: OSpace) -> OSMap:
        return OSMap(a, b, np.eye(i + 1, i), f"D_{i},{i + 1}", cb_bound=1.0)

    return ChainDiagram(stage, link, "truncation", depth, limit_factor=lambda stage: 1.0)


def explicit_chain(stages: Sequence[OSpace], links: Sequence[Any], name: str = "chain", depth: int = 40) -> ChainDiagram:
    """Finite chain given stage by stage; identity links after the last stage"""
    if not stages:
        raise InvalidInputError("a chain needs at least one stage")
    if len(links) != len(stages) - 1:
        raise InvalidInputError("a chain with k stages needs k - 1 links", {"stages": len(stages), "links": len(links)})
    stages = list(stages)
    links = list(links)

    def link(i: int, a: OSpace, b: OSpace) -> OSMap:
        given = links[i]
        return given if isinstance(given, OSMap) else OSMap(a, b, given, f"D_{i},{i + 1}")

    return ChainDiagram(lambda i: stages[i], link, name, depth, final_stage=len(stages) - 1)


# Colimit norms

@dataclass
class ColimitNorm:
    """Infimum norm of a class with the representative norms it came from"""
    interval: Interval
    stabilized: bool
    attained: bool
    values: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "interval": self.interval.to_dict(),
            "stabilized": self.stabilized,
            "attained": self.attained,
            "values": self.values,
        }


def colimit_norm(d: ChainDiagram, e: ColimitElement, depth: Optional[int] = None, tol: float = 1e-10) -> ColimitNorm:
    """
    Norm of the class of e: the infimum of ||D_(lambda,k)(w)|| over k

    The representative norms are nonincreasing. With a closed-form limit the
    interval is exact; otherwise hi is the last value and lo subtracts the
    last decrease.

    Raises:
        InvalidInputError: If depth is below the element's stage
    """
    depth = d.depth if depth is None else depth
    if depth < e.stage:
        raise InvalidInputError("depth is below the element's stage", {"depth": depth, "stage": e.stage})
    d.stage(e.stage).check_element(e.element)

    if d.final_stage is not None:
        depth = min(depth, max(d.final_stage, e.stage))

    values: List[float] = []
    for k in range(e.stage, depth + 1):
        w = d.push(e, k)
        value = d.stage(k).norm(w.element).hi
        if values and value > values[-1] + MONOTONE_SLACK * max(1.0, values[-1]):
            logger.warning(f"{d.name}: representative norm increased at stage {k} ({values[-1]:.12g} -> {value:.12g})")
        values.append(value)

    last = values[-1]
    step = values[-2] - last if len(values) > 1 else 0.0
    stabilized = step <= tol
    final = d.final_stage is not None and depth >= d.final_stage

    if d.limit_factor is not None:
        exact = d.limit_factor(e.stage) * values[0]
        return ColimitNorm(Interval.exact(exact), stabilized, last <= exact * (1.0 + 1e-14), values)
    if final:
        return ColimitNorm(Interval.exact(last), True, True, values)
    return ColimitNorm(Interval.bounds(max(0.0, last - step), last), stabilized, False, values)


def same_class(d: ChainDiagram, e1: ColimitElement, e2: ColimitElement, depth: Optional[int] = None, tol: float = 1e-10) -> Verdict:
    """
    Whether two representatives define the same class

    holds when their images coincide at some stage up to depth, fails when the
    norm of their difference settles above tol, undecided otherwise.
    """
    depth = d.depth if depth is None else depth
    if e1.level != e2.level:
        raise ShapeMismatchError("elements live at different matrix levels", {"levels": [e1.level, e2.level]})
    start = max(e1.stage, e2.stage)
    if d.final_stage is not None:
        depth = min(depth, max(d.final_stage, start))
    for k in range(start, max(depth, start) + 1):
        diff = d.push(e1, k).element - d.push(e2, k).element
        if diff.max_abs() <= tol:
            return Verdict(VerdictStatus.HOLDS, detail={"stage": k})

    gap = colimit_norm(d, ColimitElement(start, d.push(e1, start).element - d.push(e2, start).element), max(depth, start), tol)
    detail = {"difference_norm": gap.to_dict()}
    if gap.interval.lo > tol and (gap.stabilized or gap.interval.is_exact):
        return Verdict(VerdictStatus.FAILS, detail=detail)
    return Verdict(VerdictStatus.UNDECIDED, detail=detail)


def amplified_chain(d: ChainDiagram, n: int) -> ChainDiagram:
    """The chain M_n(D_i) with links (D_(i,i+1))_n; n = 1 gives d itself"""
    if n < 1:
        raise InvalidInputError("amplification level must be positive", {"n": n})
    if n == 1:
        return d

    def stage(i: int) -> OSpace:
        return AmplifiedSpace(d.stage(i), n)

    def link(i: int, a: OSpace, b: OSpace) -> OSMap:
        base = d.link(i)
        return OSMap(a, b, np.kron(np.eye(n * n), base.coeff), f"{base.name}_{n}", base.cb_bound)

    return ChainDiagram(stage, link, f"M_{n}({d.name})", d.depth, d.limit_factor, d.final_stage)


def amplify_element(e: ColimitElement) -> ColimitElement:
    """Level-n representative as a level-1 element of the amplified chain"""
    return ColimitElement(e.stage, LevelElement.from_vector(e.element.coords.reshape(-1)))


# Presentability probes

@dataclass
class FactorizationResult:
    """Least stage through which a map into the colimit factors contractively"""
    stage: Optional[int]
    g: Optional[OSMap] = None
    obstruction: Optional[Dict[str, Any]] = None
    contraction: Optional[str] = None

    @property
    def found(self) -> bool:
        return self.stage is not None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "coeff": None if self.g is None else [[[float(z.real), float(z.imag)] for z in row] for row in self.g.coeff],
            "obstruction": self.obstruction,
            "contraction": self.contraction,
        }


StagewiseTarget = Callable[[int], np.ndarray]


def landing_target(d: ChainDiagram, f: OSMap, stage: int) -> StagewiseTarget:
    """Target of a map f: S -> D_stage pushed to any later stage"""
    if f.cod.dim != d.stage(stage).dim:
        raise ShapeMismatchError("map does not land in the given stage", {"stage": stage})

    def at(k: int) -> np.ndarray:
        if k < stage:
            raise InvalidInputError("target is only defined from its landing stage on", {"stage": stage, "k": k})
        return d.composite(stage, k) @ f.coeff

    return at


def decaying_target(ratio: float = 0.8) -> StagewiseTarget:
    """
    The c_0 vector (1, ratio, ratio^2, ...) seen at stage k of the truncation chain

    Tail norms decrease strictly but never vanish, so no finite stage holds it.
    The ratio must keep ratio**depth above the factorization tolerance.
    """
    if not 0.0 < ratio < 1.0:
        raise InvalidInputError("decay ratio must lie in (0, 1)", {"ratio": ratio})

    def at(k: int) -> np.ndarray:
        return (ratio ** np.arange(k, dtype=float)).reshape(k, 1).astype(np.complex128)

    return at


def factorization_probe(
    d: ChainDiagram,
    source: OSpace,
    target: StagewiseTarget,
    depth: Optional[int] = None,
    tol: float = 1e-9,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> FactorizationResult:
    """
    Least stage lambda <= depth with f = c_lambda g for a contractive g

    The target is compared one stage beyond depth, so limit targets whose
    tails keep growing never factor. For each normalized basis vector b of the
    source, the minimal preimage of f(b) under D_(lambda, depth+1) must have
    norm <= 1 + tol.
    """
    depth = d.depth if depth is None else depth
    probe = depth + 1
    f_coeff = target(probe)
    unit_norms = [source.norm(source.basis_element(s)).hi for s in range(source.dim)]
    fibers: Dict[int, List[Optional[float]]] = {s: [] for s in range(source.dim)}

    for lam in range(depth + 1):
        D = d.composite_map(lam, probe)
        if D.dom.dim == 0:
            g_coeff = np.zeros((0, source.dim), dtype=np.complex128)
        else:
            g_coeff = np.linalg.pinv(D.coeff) @ f_coeff
        in_image = np.max(np.abs(D.coeff @ g_coeff - f_coeff), initial=0.0) <= tol * max(1.0, float(np.max(np.abs(f_coeff), initial=0.0)))
        if not in_image:
            for s in range(source.dim):
                fibers[s].append(None)
            continue

        worst = 0.0
        for s in range(source.dim):
            column = LevelElement.from_vector(f_coeff[:, s] / unit_norms[s])
            fiber, _ = fiber_minimum(D, column, budget, tolerances) if np.any(column.coords) else (Interval.zero(), None)
            fibers[s].append(fiber.lo)
            worst = max(worst, fiber.lo)
        if worst <= 1.0 + tol:
            g = OSMap(source, d.stage(lam), g_coeff, f"g_{lam}")
            verdict = is_complete_contraction(g, 1, tol, budget, tolerances)
            return FactorizationResult(lam, g, contraction=verdict.status.value)

    def stays_large(values: List[Optional[float]]) -> bool:
        return all(v is None or v > 1.0 + tol for v in values)

    blocking = next((s for s in range(source.dim) if stays_large(fibers[s])), 0)
    logger.info(f"{d.name}: no contractive factorization up to stage {depth}")
    return FactorizationResult(None, obstruction={"basis_vector": blocking, "fiber_norms": fibers[blocking], "depth": depth})


def essential_uniqueness_probe(
    d: ChainDiagram,
    stage: int,
    g: OSMap,
    g_prime: OSMap,
    depth: Optional[int] = None,
    tol: float = 1e-9
) -> Optional[int]:
    """
    Least tau in [stage, depth] with D_(stage,tau) g = D_(stage,tau) g'

    Returns:
        tau, or None when the maps agree in the colimit without merging by depth

    Raises:
        InvalidInputError: If c_stage g and c_stage g' differ in the colimit
    """
    depth = d.depth if depth is None else depth
    if g.coeff.shape != g_prime.coeff.shape or g.cod.dim != d.stage(stage).dim:
        raise ShapeMismatchError("maps must be parallel into the given stage", {"stage": stage})
    diff = g.coeff - g_prime.coeff
    for tau in range(stage, max(depth, stage) + 1):
        if np.max(np.abs(d.composite(stage, tau) @ diff), initial=0.0) <= tol:
            return tau

    for s in range(diff.shape[1]):
        gap = colimit_norm(d, ColimitElement(stage, LevelElement.from_vector(diff[:, s])), max(depth, stage))
        if gap.interval.lo > tol:
            raise InvalidInputError(
                "maps differ in the colimit",
                {"basis_vector": s, "difference_norm": gap.interval.to_dict()}
            )
    return None
