"""
Completely Bounded Maps
Linear maps between operator spaces, amplification norms and complete-contraction verdicts
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError, ShapeMismatchError, UnsupportedInputError, ErrorCode
from ..linalg.affine import functional_norm, min_spectral_over_affine
from ..linalg.matrix_core import (
    Interval,
    complex_gaussian,
    matrix_to_literal,
    numerical_rank,
    top_singular_pair,
)
from ..utils.parallel import RestartExecutor, restart_rng
from .ospace import ConcreteOS, LevelElement, OSpace, SpaceKind


class VerdictStatus(str, Enum):
    """Three-valued predicate outcome"""
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


@dataclass
class Witness:
    """Replayable evidence: an element and the ratio it achieves"""
    level: int
    element: LevelElement
    achieved_ratio: float

    def to_dict(self) -> Dict[str, Any]:
        return {"level": self.level, "coords": self.element.to_literal(), "achieved_ratio": self.achieved_ratio}


@dataclass
class Verdict:
    """Result of a numeric predicate"""
    status: VerdictStatus
    witness: Optional[Witness] = None
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == VerdictStatus.HOLDS

    @property
    def fails(self) -> bool:
        return self.status == VerdictStatus.FAILS

    @property
    def undecided(self) -> bool:
        return self.status == VerdictStatus.UNDECIDED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "status": self.status.value,
            "witness": self.witness.to_dict() if self.witness else None,
            "detail": self.detail,
        }


@dataclass
class MapNormEstimate:
    """Interval around ||u_n|| with the best witness found"""
    level: int
    interval: Interval
    witness: Optional[Witness] = None
    sources: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level,
            "interval": self.interval.to_dict(),
            "witness": self.witness.to_dict() if self.witness else None,
            "sources": self.sources,
        }


class OSMap:
    """
    Linear map between operator spaces acting on coordinates

    coeff has shape (cod.dim, dom.dim). cb_bound, when set, is an upper bound
    on the cb norm known from the way the map was constructed.
    """

    def __init__(
        self,
        dom: OSpace,
        cod: OSpace,
        coeff: Any,
        name: Optional[str] = None,
        cb_bound: Optional[float] = None
    ):
        coeff = np.asarray(coeff, dtype=np.complex128)
        if coeff.size == 0:
            coeff = np.zeros((cod.dim, dom.dim), dtype=np.complex128)
        if coeff.ndim != 2 or coeff.shape != (cod.dim, dom.dim):
            raise ShapeMismatchError(
                f"coefficient matrix must be {cod.dim} x {dom.dim}",
                {"shape": list(coeff.shape), "dom": dom.name, "cod": cod.name}
            )
        if not np.all(np.isfinite(coeff)):
            raise InvalidInputError("map coefficients are not finite", code=ErrorCode.NON_FINITE_ENTRIES)
        self.dom = dom
        self.cod = cod
        self.coeff = coeff
        self.name = name or f"{dom.name}->{cod.name}"
        self.cb_bound = cb_bound

    def amplify(self, n: int) -> Callable[[LevelElement], LevelElement]:
        """u_n as a procedure on level-n elements"""
        if n < 1:
            raise InvalidInputError("amplification level must be positive", {"n": n})

        def apply(e: LevelElement) -> LevelElement:
            if e.level != n:
                raise ShapeMismatchError("element level differs from the amplification", {"level": e.level, "n": n})
            return self(e)

        return apply

    def __call__(self, e: LevelElement) -> LevelElement:
        self.dom.check_element(e)
        return e.apply(self.coeff)

    def compose(self, inner: "OSMap") -> "OSMap":
        """self o inner"""
        if inner.cod.dim != self.dom.dim:
            raise ShapeMismatchError("maps do not compose", {"inner_cod": inner.cod.name, "outer_dom": self.dom.name})
        bound = None
        if self.cb_bound is not None and inner.cb_bound is not None:
            bound = self.cb_bound * inner.cb_bound
        return OSMap(inner.dom, self.cod, self.coeff @ inner.coeff, f"{self.name}.{inner.name}", bound)

    __matmul__ = compose

    def __add__(self, other: "OSMap") -> "OSMap":
        self._check_parallel(other)
        bound = None
        if self.cb_bound is not None and other.cb_bound is not None:
            bound = self.cb_bound + other.cb_bound
        return OSMap(self.dom, self.cod, self.coeff + other.coeff, f"({self.name}+{other.name})", bound)

    def __sub__(self, other: "OSMap") -> "OSMap":
        return self + other.scale(-1.0)

    def scale(self, c: complex) -> "OSMap":
        bound = None if self.cb_bound is None else abs(c) * self.cb_bound
        return OSMap(self.dom, self.cod, complex(c) * self.coeff, f"{c}*{self.name}", bound)

    def _check_parallel(self, other: "OSMap") -> None:
        if not (self.dom.same_space(other.dom) and self.cod.same_space(other.cod)):
            raise ShapeMismatchError("maps are not parallel", {"left": self.name, "right": other.name})

    def scalar_multiple(self, tol: float = 1e-14) -> Optional[complex]:
        """c when the map is c times the identity of its own domain"""
        if self.dom is not self.cod:
            return None
        d = self.dom.dim
        if d == 0:
            return 0.0
        c = complex(self.coeff[0, 0])
        if np.max(np.abs(self.coeff - c * np.eye(d))) <= tol * max(1.0, abs(c)):
            return c
        return None

    @property
    def rank(self) -> int:
        return numerical_rank(self.coeff)

    def is_zero(self) -> bool:
        return not np.any(self.coeff)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dom": self.dom.to_dict(),
            "cod": self.cod.to_dict(),
            "coeff": matrix_to_literal(self.coeff),
            "cb_bound": self.cb_bound,
        }

    def __repr__(self) -> str:
        return f"OSMap({self.name}, {self.cod.dim}x{self.dom.dim})"


def identity_map(X: OSpace) -> OSMap:
    return OSMap(X, X, np.eye(X.dim), f"id_{X.name}", cb_bound=1.0)


def zero_map(X: OSpace, Y: OSpace) -> OSMap:
    return OSMap(X, Y, np.zeros((Y.dim, X.dim)), f"0_{X.name},{Y.name}", cb_bound=0.0)


def amplify(u: OSMap, n: int) -> Callable[[LevelElement], LevelElement]:
    """u_n: M_n(dom) -> M_n(cod), entrywise application of u"""
    return u.amplify(n)


def shuffle_probe(dim: int, n: int, transpose: bool = True) -> LevelElement:
    """sum_ij E_ij (x) b_(j*n + i mod d); on M_n this is the swap, stretched by the transpose"""
    coords = np.zeros((n, n, dim), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            s = j * n + i if transpose else i * n + j
            coords[i, j, s % dim] = 1.0
    return LevelElement(coords)


def padded_identity_grid(m: int, n: int) -> LevelElement:
    """The identity grid of M_m(T_m) in the top-left corner of a level-n element"""
    coords = np.zeros((n, n, m * m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            coords[i, j, i * m + j] = 1.0
    return LevelElement(coords)


class MapNormEstimator:
    """
    Interval estimates of ||u_n|| for OSMaps

    Upper bounds: the dual-basis bound sum_s ||u(b_s)|| kappa_s, the entrywise
    bound n^2 ||u_1||, a structural cb bound, and exact values for scalar
    multiples of identities and maps into or out of one-dimensional spaces.
    Maps out of T_m are bounded by ||[u(e_ij*)]|| in M_m(cod), their cb norm,
    which the identity grid attains from level m on.
    Lower bounds: alternating ascent over seeded restarts.
    """

    def __init__(self, budget: Budget = DEFAULT_BUDGET, tolerances: Tolerances = DEFAULT_TOLERANCES):
        self.budget = budget
        self.tolerances = tolerances
        self.executor = RestartExecutor(budget.max_workers)

    # Exact special cases

    def _exact(self, u: OSMap) -> Optional[Interval]:
        if u.is_zero() or u.dom.dim == 0 or u.cod.dim == 0:
            return Interval.zero()
        c = u.scalar_multiple()
        if c is not None:
            return Interval.exact(abs(c))
        if u.dom.dim == 1:
            image = u.cod.norm(LevelElement.from_vector(u.coeff[:, 0]))
            unit = u.dom.norm(u.dom.basis_element(0))
            if unit.lo <= 0:
                return None
            return Interval.bounds(image.lo / unit.hi, image.hi / unit.lo, self.tolerances.exactness)
        if u.cod.dim == 1 and isinstance(u.dom, ConcreteOS):
            functional = functional_norm(u.dom.basis, u.coeff[0, :], self.budget, self.tolerances)
            unit = u.cod.norm(u.cod.basis_element(0))
            return Interval.bounds(functional.lo * unit.lo, functional.hi * unit.hi, self.tolerances.exactness)
        return None

    # Bounds

    def trace_class_grid(self, u: OSMap) -> Optional[Tuple[int, LevelElement, Interval]]:
        """(m, [u(e_ij*)], its norm in M_m(cod)) for maps out of T_m"""
        if u.dom.kind != SpaceKind.TRACE_CLASS:
            return None
        m = int(round(np.sqrt(u.dom.dim)))
        grid = LevelElement(u.coeff.T.reshape(m, m, u.cod.dim))
        return m, grid, u.cod.norm(grid)

    def dual_basis_bound(self, u: OSMap) -> float:
        kappa = u.dom.coordinate_constants()
        images = [u.cod.norm(LevelElement.from_vector(u.coeff[:, s])).hi for s in range(u.dom.dim)]
        return float(np.dot(images, kappa))

    def upper_bound(self, u: OSMap, n: int) -> Tuple[float, Dict[str, float]]:
        """
        Upper bound on ||u_n|| without any search

        Returns:
            (bound, named contributing bounds)
        """
        exact = self._exact(u)
        if exact is not None:
            return exact.hi, {"exact": exact.hi}
        sources = {"dual_basis": self.dual_basis_bound(u)}
        grid = self.trace_class_grid(u)
        if grid is not None:
            sources["trace_class_grid"] = grid[2].hi
        if n > 1:
            sources["entrywise"] = n * n * self.upper_bound(u, 1)[0]
        if u.cb_bound is not None:
            sources["structural"] = float(u.cb_bound)
        return min(sources.values()), sources

    def _ratio(self, u: OSMap, x: LevelElement) -> float:
        denominator = u.dom.norm(x).hi
        if denominator <= 0:
            return 0.0
        return u.cod.norm(u(x)).lo / denominator

    def _ascend_concrete(self, u: OSMap, x: LevelElement, iterations: int) -> Tuple[float, LevelElement]:
        n, k = x.level, u.cod.ambient
        images = np.einsum("ts,tab->sab", u.coeff, u.cod.realization_basis)
        best = self._ratio(u, x)
        for _ in range(iterations):
            realized = np.einsum("ijs,sab->iajb", x.coords, images).reshape(n * k, n * k)
            sigma, phi, psi = top_singular_pair(realized)
            if sigma == 0.0:
                break
            grad = np.einsum("ia,sab,jb->ijs", phi.reshape(n, k).conj(), images, psi.reshape(n, k)).conj()
            grad_norm = np.linalg.norm(grad)
            if grad_norm == 0.0:
                break
            step = np.linalg.norm(x.coords) / grad_norm
            improved = False
            for t in (1.0, 0.3, 0.1, 0.03, 0.01):
                candidate = LevelElement(x.coords + t * step * grad)
                r = self._ratio(u, candidate)
                if r > best * (1.0 + 1e-12):
                    best, x, improved = r, candidate, True
                    break
            if not improved:
                break
        return best, x

    def _ascend_generic(
        self, u: OSMap, x: LevelElement, iterations: int, rng: np.random.Generator
    ) -> Tuple[float, LevelElement]:
        best = self._ratio(u, x)
        step = 0.5
        for _ in range(iterations):
            candidate = LevelElement(x.coords + step * np.linalg.norm(x.coords) * complex_gaussian(rng, x.coords.shape) / np.sqrt(x.coords.size))
            r = self._ratio(u, candidate)
            if r > best:
                best, x = r, candidate
            else:
                step *= 0.8
            if step < 1e-4:
                break
        return best, x

    def lower_bound(self, u: OSMap, n: int) -> Tuple[float, Optional[Witness]]:
        """
        Best ratio ||u_n(x)|| / ||x|| over seeded restarts

        Returns:
            (ratio, witness achieving it)
        """
        if u.is_zero() or u.dom.dim == 0:
            return 0.0, None
        grid = self.trace_class_grid(u)
        if grid is not None and n >= grid[0]:
            t = padded_identity_grid(grid[0], n)
            ratio = u.cod.norm(u(t)).lo
            return ratio, Witness(n, t, ratio)
        concrete = u.cod.is_concrete

        def restart(rng: np.random.Generator, index: int):
            if index < 2 and n > 1:
                x = shuffle_probe(u.dom.dim, n, transpose=index == 0)
            else:
                x = u.dom.random_element(rng, n)
            if concrete:
                return self._ascend_concrete(u, x, self.budget.iterations)
            return self._ascend_generic(u, x, max(1, self.budget.iterations // 4), rng)

        tag = (n, u.dom.dim, u.cod.dim, 3)
        results = self.executor.run(restart, self.budget.restarts, self.budget.seed, tag)
        best_ratio, best_x = 0.0, None
        for ratio, x in results:
            if ratio > best_ratio:
                best_ratio, best_x = ratio, x
        if best_x is None:
            return 0.0, None
        return best_ratio, Witness(n, best_x, best_ratio)

    def estimate(self, u: OSMap, n: int, search: bool = True) -> MapNormEstimate:
        """
        Interval around ||u_n||

        Args:
            u: Map
            n: Level
            search: Run the lower-bound search (otherwise lo comes from exact cases only)
        """
        exact = self._exact(u)
        hi, sources = self.upper_bound(u, n)
        lo, witness = 0.0, None
        if exact is not None:
            lo = exact.lo
        elif search:
            lo, witness = self.lower_bound(u, n)
        if lo > hi:
            if lo - hi > self.tolerances.verdict * max(1.0, hi):
                logger.warning(f"Lower bound {lo:.12g} exceeds upper bound {hi:.12g} for {u.name} at level {n}")
            lo = hi
        return MapNormEstimate(n, Interval.bounds(lo, hi, self.tolerances.exactness), witness, sources)


def op_norm_at_level(
    u: OSMap,
    n: int,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> MapNormEstimate:
    """
    Interval around the operator norm of u_n

    Args:
        u: Map
        n: Level (>= 1)
        budget: Restarts, iterations and seed of the search
        tolerances: Tolerances

    Returns:
        MapNormEstimate with witness
    """
    if n < 1:
        raise InvalidInputError("level must be positive", {"n": n})
    return MapNormEstimator(budget, tolerances).estimate(u, n)


def truncation_level(u: OSMap, level: Optional[int] = None) -> int:
    """Level at which amplified norms of u stabilize"""
    if level is not None:
        if level < 1:
            raise InvalidInputError("truncation level must be positive", {"level": level})
        return int(level)
    if u.cod.ambient is None:
        raise UnsupportedInputError(
            f"cb norm into {u.cod.name} needs a truncation level",
            {"cod_kind": u.cod.kind.value}
        )
    return int(u.cod.ambient)


def cb_norm(
    u: OSMap,
    budget: Budget = DEFAULT_BUDGET,
    level: Optional[int] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> MapNormEstimate:
    """
    Interval around ||u||_cb

    Levels 1..L are evaluated where L is the codomain's ambient size (maps into
    M_k reach their cb norm at level k) or the supplied level.

    Raises:
        UnsupportedInputError: Abstract codomain and no level supplied
    """
    top = truncation_level(u, level)
    estimator = MapNormEstimator(budget, tolerances)
    lo, hi, witness = 0.0, 0.0, None
    sources: Dict[str, float] = {}
    for n in range(1, top + 1):
        est = estimator.estimate(u, n)
        if est.interval.lo > lo or witness is None:
            if est.witness is not None:
                witness = est.witness
        lo = max(lo, est.interval.lo)
        hi = max(hi, est.interval.hi)
        sources[f"level_{n}"] = est.interval.hi
    return MapNormEstimate(top, Interval.bounds(min(lo, hi), hi, tolerances.exactness), witness, sources)


def is_complete_contraction(
    u: OSMap,
    level: int,
    tol: float = 1e-6,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Verdict:
    """
    Whether ||u_n|| <= 1 for n <= level

    holds when every upper bound is <= 1 + tol, fails with a witness when some
    element is stretched by more than 1 + tol, undecided otherwise.
    """
    if level < 1:
        raise InvalidInputError("level must be positive", {"level": level})
    estimator = MapNormEstimator(budget, tolerances)
    uppers = {n: estimator.upper_bound(u, n)[0] for n in range(1, level + 1)}
    if all(h <= 1.0 + tol for h in uppers.values()):
        return Verdict(VerdictStatus.HOLDS, detail={"upper_bounds": uppers})

    lowers = {}
    for n, h in uppers.items():
        if h <= 1.0 + tol:
            continue
        ratio, witness = estimator.lower_bound(u, n)
        lowers[n] = ratio
        if witness is not None and ratio > 1.0 + tol:
            return Verdict(VerdictStatus.FAILS, witness, {"upper_bounds": uppers, "lower_bounds": lowers})

    logger.warning(f"Complete contractivity of {u.name} undecided up to level {level}")
    return Verdict(VerdictStatus.UNDECIDED, detail={"upper_bounds": uppers, "lower_bounds": lowers})


MAX_RELATIVE_WIDTH = 0.5


def is_complete_isometry(
    u: OSMap,
    level: int,
    trials: int = 20,
    tol: float = 1e-6,
    seed: int = 0
) -> Verdict:
    """
    Randomized check that ||u_n(x)|| = ||x|| for n <= level

    Fails with the first probe whose norm intervals are separated by more than
    tol (relative); undecided when intervals are too wide to compare.
    """
    if level < 1:
        raise InvalidInputError("level must be positive", {"level": level})
    if u.dom.dim == 0:
        return Verdict(VerdictStatus.HOLDS, detail={"probes": 0})

    widest = 0.0
    probes = 0
    for n in range(1, level + 1):
        candidates = [u.dom.basis_element(s, n) for s in range(u.dom.dim)] if n == 1 else [shuffle_probe(u.dom.dim, n)]
        rng = restart_rng(seed, (n, 5), 0)
        candidates += [u.dom.random_element(rng, n) for _ in range(trials)]
        for x in candidates:
            a = u.dom.norm(x)
            b = u.cod.norm(u(x))
            probes += 1
            scale = max(1.0, a.hi)
            if not a.overlaps(b, slack=tol * scale):
                ratio = b.mid / a.mid if a.mid > 0 else float(b.mid > 0)
                return Verdict(VerdictStatus.FAILS, Witness(n, x, ratio), {"dom_norm": a.to_dict(), "cod_norm": b.to_dict()})
            widest = max(widest, a.width / max(a.hi, 1e-300), b.width / max(b.hi, 1e-300))

    if widest > MAX_RELATIVE_WIDTH:
        return Verdict(VerdictStatus.UNDECIDED, detail={"probes": probes, "max_relative_width": widest})
    return Verdict(VerdictStatus.HOLDS, detail={"probes": probes, "max_relative_width": widest})


def fiber_minimum(
    u: OSMap,
    y: LevelElement,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Tuple[Interval, LevelElement]:
    """
    Smallest norm of a preimage of y under u_n

    Concrete domains use the affine spectral minimizer over x0 + M_n(ker u);
    other domains combine a local search with the bound ||y|| / ||u_n||.

    Returns:
        (interval around the minimal preimage norm, a preimage)
    """
    n = y.level
    pinv = np.linalg.pinv(u.coeff)
    x0 = y.apply(pinv)
    if np.max(np.abs(u(x0).coords - y.coords), initial=0.0) > 1e-8 * max(1.0, y.max_abs()):
        raise InvalidInputError(f"element is not in the image of {u.name}")
    kernel = scipy.linalg.null_space(u.coeff) if u.dom.dim else np.zeros((0, 0))
    directions = [
        LevelElement.unit(n, i, j, kernel[:, t])
        for i in range(n) for j in range(n) for t in range(kernel.shape[1])
    ]

    if not directions:
        return u.dom.norm(x0), x0

    if u.dom.is_concrete:
        target = u.dom.realize(x0)
        result = min_spectral_over_affine(target, [u.dom.realize(d) for d in directions], budget, tolerances)
        return result, x0

    def objective(z: np.ndarray) -> float:
        c = z[:len(directions)] + 1j * z[len(directions):]
        x = x0 + LevelElement(np.einsum("r,rijs->ijs", c, np.stack([d.coords for d in directions])))
        return u.dom.norm(x).hi

    start = np.zeros(2 * len(directions))
    found = scipy.optimize.minimize(objective, start, method="Powell", options={"maxiter": budget.iterations})
    hi = min(float(found.fun), u.dom.norm(x0).hi)
    op_hi = MapNormEstimator(budget, tolerances).upper_bound(u, n)[0]
    lo = u.cod.norm(y).lo / op_hi if op_hi > 0 else 0.0
    return Interval.bounds(min(lo, hi), hi, tolerances.exactness), x0


def is_complete_quotient(
    u: OSMap,
    level: int,
    samples: int = 8,
    tol: float = 1e-6,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    seed: Optional[int] = None
) -> Verdict:
    """
    Whether u_n maps the open unit ball onto the open unit ball for n <= level

    Surjectivity is checked by rank first. Sampled unit-norm y must have a
    preimage of norm < 1 + tol, and u must be completely contractive.
    """
    if level < 1:
        raise InvalidInputError("level must be positive", {"level": level})
    rank = u.rank if u.cod.dim else 0
    if rank < u.cod.dim:
        return Verdict(VerdictStatus.FAILS, detail={"reason": "not surjective", "rank": rank, "cod_dim": u.cod.dim})
    if u.cod.dim == 0:
        return Verdict(VerdictStatus.HOLDS, detail={"samples": 0})

    contraction = is_complete_contraction(u, level, tol, budget, tolerances)
    if contraction.fails:
        contraction.detail["reason"] = "not contractive"
        return contraction

    seed = budget.seed if seed is None else seed
    undecided = not contraction.holds
    worst = 0.0
    for n in range(1, level + 1):
        candidates = [u.cod.basis_element(s, n) for s in range(u.cod.dim)] if n == 1 else []
        rng = restart_rng(seed, (n, 9), 0)
        candidates += [u.cod.random_element(rng, n) for _ in range(samples)]
        for y in candidates:
            size = u.cod.norm(y).hi
            if size <= 0:
                continue
            y = y * (1.0 / size)
            fiber, _ = fiber_minimum(u, y, budget.scaled(restarts=min(budget.restarts, 3)), tolerances)
            worst = max(worst, fiber.lo)
            if fiber.lo > 1.0 + tol:
                return Verdict(VerdictStatus.FAILS, Witness(n, y, fiber.lo), {"reason": "unit ball not reached", "fiber_min": fiber.to_dict()})
            if fiber.hi > 1.0 + tol:
                undecided = True

    status = VerdictStatus.UNDECIDED if undecided else VerdictStatus.HOLDS
    return Verdict(status, detail={"max_fiber_min_lo": worst, "contraction": contraction.status.value})
