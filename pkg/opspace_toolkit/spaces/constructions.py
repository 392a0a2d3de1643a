"""
Categorical Constructions
Products, coproducts, equalisers, quotients, coequalisers, duals and the Min quantization
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize
from loguru import logger

from ..core.error_codes import InvalidInputError, ShapeMismatchError, UnsupportedInputError
from ..linalg.affine import functional_norm, min_spectral_over_affine
from ..linalg.matrix_core import (
    Interval,
    numerical_rank,
    polar_factor,
    random_contraction,
    stack_vectorized,
    top_singular_pair,
)
from ..utils.parallel import RestartExecutor, restart_rng
from .maps import (
    MapNormEstimator,
    OSMap,
    Verdict,
    VerdictStatus,
    Witness,
    is_complete_isometry,
    is_complete_quotient,
    zero_map,
)
from .ospace import (
    ConcreteOS,
    LevelElement,
    OSpace,
    SpaceKind,
    matrix_algebra,
    random_concrete,
    subspace,
    zero_space,
)


# Products

class ProductSpace(OSpace):
    """
    l-infinity direct sum: M_n of the product is the product of the M_n
    """

    def __init__(self, components: Sequence[OSpace]):
        components = list(components)
        super().__init__(
            sum(X.dim for X in components), SpaceKind.PRODUCT,
            {"name": "(" + " x ".join(X.name for X in components) + ")", "components": [X.provenance for X in components]},
            components[0].budget, components[0].tolerances
        )
        self.components = components
        self.offsets = np.cumsum([0] + [X.dim for X in components])
        self._basis = self._block_basis()

    def _block_basis(self) -> Optional[np.ndarray]:
        if not all(X.is_concrete for X in self.components):
            return None
        sizes = [X.ambient for X in self.components]
        total = sum(sizes)
        mats = []
        start = 0
        for X, k in zip(self.components, sizes):
            for b in X.realization_basis:
                m = np.zeros((total, total), dtype=np.complex128)
                m[start:start + k, start:start + k] = b
                mats.append(m)
            start += k
        return np.stack(mats) if mats else np.zeros((0, total, total), dtype=np.complex128)

    @property
    def realization_basis(self) -> Optional[np.ndarray]:
        return self._basis

    def block(self, e: LevelElement, index: int) -> LevelElement:
        return LevelElement(e.coords[:, :, self.offsets[index]:self.offsets[index + 1]])

    def _norm(self, e: LevelElement) -> Interval:
        return Interval.max_of(X.norm(self.block(e, i)) for i, X in enumerate(self.components))

    def _coordinate_constants(self) -> np.ndarray:
        return np.concatenate([X.coordinate_constants() for X in self.components])

    def selector(self, index: int) -> np.ndarray:
        """Coefficients of the projection onto component index"""
        sel = np.zeros((self.components[index].dim, self.dim), dtype=np.complex128)
        sel[:, self.offsets[index]:self.offsets[index + 1]] = np.eye(self.components[index].dim)
        return sel


def product(Xs: Sequence[OSpace]) -> Tuple[OSpace, List[OSMap], List[OSMap]]:
    """
    Finite product with its projections and inclusions

    Args:
        Xs: Finite family of operator spaces

    Returns:
        (product space, projections, inclusions); the empty family gives the zero space
    """
    Xs = list(Xs)
    if not Xs:
        return zero_space(), [], []
    P = ProductSpace(Xs)
    projections = [OSMap(P, X, P.selector(i), f"pi_{i}", cb_bound=1.0) for i, X in enumerate(Xs)]
    inclusions = [OSMap(X, P, P.selector(i).T, f"iota_{i}", cb_bound=1.0) for i, X in enumerate(Xs)]
    return P, projections, inclusions


def product_mediator(P: ProductSpace, cone: Sequence[OSMap]) -> OSMap:
    """The map Z -> P whose components are the cone maps Z -> X_i"""
    if len(cone) != len(P.components):
        raise InvalidInputError("cone has the wrong number of legs", {"legs": len(cone), "components": len(P.components)})
    apex = cone[0].dom
    for f, X in zip(cone, P.components):
        if f.dom.dim != apex.dim or f.cod.dim != X.dim:
            raise ShapeMismatchError("cone legs do not match the product", {"leg": f.name, "component": X.name})
    bounds = [f.cb_bound for f in cone]
    bound = max(bounds) if all(b is not None for b in bounds) else None
    return OSMap(apex, P, np.vstack([f.coeff for f in cone]), "product_mediator", bound)


# Coproducts

COPRODUCT_RESTARTS = 4


class CoproductSpace(OSpace):
    """
    l-1 direct sum of concrete spaces

    Level 1 is the exact sum of component norms. At level n the upper bound is
    the triangle inequality through the inclusions and the lower bound comes
    from completely contractive compressions V_i* (.) W_i into a common M_m,
    whose sum is the mediating complete contraction.
    """

    def __init__(self, components: Sequence[OSpace]):
        components = list(components)
        for X in components:
            if not X.is_concrete:
                raise UnsupportedInputError(f"coproduct needs concrete components, got {X.name}", {"kind": X.kind.value})
        super().__init__(
            sum(X.dim for X in components), SpaceKind.COPRODUCT,
            {"name": "(" + " + ".join(X.name for X in components) + ")", "components": [X.provenance for X in components]},
            components[0].budget, components[0].tolerances
        )
        self.components = components
        self.offsets = np.cumsum([0] + [X.dim for X in components])
        self.executor = RestartExecutor(self.budget.max_workers)

    def block(self, e: LevelElement, index: int) -> LevelElement:
        return LevelElement(e.coords[:, :, self.offsets[index]:self.offsets[index + 1]])

    def selector(self, index: int) -> np.ndarray:
        sel = np.zeros((self.components[index].dim, self.dim), dtype=np.complex128)
        sel[:, self.offsets[index]:self.offsets[index + 1]] = np.eye(self.components[index].dim)
        return sel

    @staticmethod
    def _compress(realized: np.ndarray, n: int, k: int, v: np.ndarray, w: np.ndarray) -> np.ndarray:
        m = v.shape[1]
        r4 = realized.reshape(n, k, n, k)
        return np.einsum("ka,ikjl,lb->iajb", v.conj(), r4, w).reshape(n * m, n * m)

    def _compression_bound(self, e: LevelElement) -> float:
        n = e.level
        parts = [(X.realize(self.block(e, i)), X.ambient) for i, X in enumerate(self.components)]
        m = sum(k for _, k in parts)
        budget = self.oracle_budget

        def restart(rng: np.random.Generator, index: int):
            vs, ws = [], []
            start = 0
            for _, k in parts:
                if index == 0:
                    embed = np.zeros((k, m), dtype=np.complex128)
                    embed[:, start:start + k] = np.eye(k)
                    vs.append(embed)
                    ws.append(embed.copy())
                else:
                    vs.append(random_contraction(rng, k, m))
                    ws.append(random_contraction(rng, k, m))
                start += k
            best = 0.0
            for _ in range(budget.iterations):
                total = sum(self._compress(r, n, k, v, w) for (r, k), v, w in zip(parts, vs, ws))
                sigma, phi, psi = top_singular_pair(total)
                if sigma <= best * (1.0 + 1e-12):
                    best = max(best, sigma)
                    break
                best = sigma
                phi_m, psi_m = phi.reshape(n, m), psi.reshape(n, m)
                for idx, ((r, k), w) in enumerate(zip(parts, ws)):
                    z = (r @ np.kron(np.eye(n), w) @ psi).reshape(n, k)
                    vs[idx] = polar_factor(z.T @ phi_m.conj())
                for idx, ((r, k), v) in enumerate(zip(parts, vs)):
                    y = (r.conj().T @ np.kron(np.eye(n), v) @ phi).reshape(n, k)
                    ws[idx] = polar_factor((psi_m.T @ y.conj()).conj().T)
            return best

        results = self.executor.run(restart, budget.restarts, budget.seed, (n, self.dim, 13))
        return max(results)

    def _norm(self, e: LevelElement) -> Interval:
        parts = [X.norm(self.block(e, i)) for i, X in enumerate(self.components)]
        total = Interval.sum_of(parts)
        if e.level == 1:
            return total
        lo = max(max(p.lo for p in parts), self._compression_bound(e))
        return Interval.bounds(min(lo, total.hi), total.hi, self.tolerances.exactness)

    def _coordinate_constants(self) -> np.ndarray:
        return np.concatenate([X.coordinate_constants() for X in self.components])


def coproduct(Xs: Sequence[OSpace]) -> Tuple[OSpace, List[OSMap], List[OSMap]]:
    """
    Finite coproduct of concrete spaces with inclusions and projections

    Returns:
        (coproduct space, inclusions, projections)

    Raises:
        UnsupportedInputError: If a component is not concrete
    """
    Xs = list(Xs)
    if not Xs:
        return zero_space(), [], []
    C = CoproductSpace(Xs)
    inclusions = [OSMap(X, C, C.selector(i).T, f"iota_{i}", cb_bound=1.0) for i, X in enumerate(Xs)]
    projections = [OSMap(C, X, C.selector(i), f"pi_{i}", cb_bound=1.0) for i, X in enumerate(Xs)]
    return C, inclusions, projections


def coproduct_mediator(C: CoproductSpace, cocone: Sequence[OSMap]) -> OSMap:
    """u(sum_i iota_i(x_i)) = sum_i u_i(x_i)"""
    if len(cocone) != len(C.components):
        raise InvalidInputError("cocone has the wrong number of legs", {"legs": len(cocone), "components": len(C.components)})
    apex = cocone[0].cod
    for g, X in zip(cocone, C.components):
        if g.cod.dim != apex.dim or g.dom.dim != X.dim:
            raise ShapeMismatchError("cocone legs do not match the coproduct", {"leg": g.name, "component": X.name})
    bounds = [g.cb_bound for g in cocone]
    bound = max(bounds) if all(b is not None for b in bounds) else None
    return OSMap(C, apex, np.hstack([g.coeff for g in cocone]), "coproduct_mediator", bound)


# Equalisers

def _kernel_basis(coeff: np.ndarray) -> np.ndarray:
    if not np.any(coeff):
        return np.eye(coeff.shape[1], dtype=np.complex128)
    return scipy.linalg.null_space(coeff)


def _check_parallel(f: OSMap, g: OSMap) -> None:
    if not (f.dom.same_space(g.dom) and f.cod.same_space(g.cod)):
        raise InvalidInputError(
            "maps are not parallel",
            {"f": f.name, "g": g.name, "f_spaces": [f.dom.name, f.cod.name], "g_spaces": [g.dom.name, g.cod.name]}
        )


def equaliser(f: OSMap, g: OSMap) -> Tuple[OSpace, OSMap]:
    """
    Equaliser of a parallel pair: the kernel of f - g with its inclusion

    Returns:
        (subspace E of dom, completely isometric inclusion e with f e = g e)
    """
    _check_parallel(f, g)
    kernel = _kernel_basis(f.coeff - g.coeff)
    E = subspace(f.dom, kernel.T, name=f"eq({f.name},{g.name})")
    e = OSMap(E, f.dom, kernel, "equaliser_inclusion", cb_bound=1.0)
    return E, e


def factor_through_equaliser(e: OSMap, h: OSMap, tol: float = 1e-9) -> OSMap:
    """
    The unique h_hat with e h_hat = h

    Raises:
        InvalidInputError: If h does not land in the equaliser
    """
    coeff = np.linalg.pinv(e.coeff) @ h.coeff
    residual = float(np.max(np.abs(e.coeff @ coeff - h.coeff), initial=0.0))
    if residual > tol * max(1.0, float(np.max(np.abs(h.coeff), initial=0.0))):
        raise InvalidInputError("map does not factor through the equaliser", {"residual": residual})
    return OSMap(h.dom, e.dom, coeff, f"{h.name}^", h.cb_bound)


# Quotients

QUOTIENT_RESTARTS = 3


class QuotientSpace(OSpace):
    """
    X/N presented on the orthogonal complement of N in coordinates

    Quotient coordinates are y = C* x, a class is represented by C y, and the
    level-n norm is the distance from C y to M_n(N).
    """

    def __init__(self, base: OSpace, kernel: np.ndarray, complement: np.ndarray, name: Optional[str] = None):
        super().__init__(
            complement.shape[1], SpaceKind.QUOTIENT,
            {"name": name or f"{base.name}/N", "of": base.provenance, "kernel_rank": kernel.shape[1]},
            base.budget, base.tolerances
        )
        self.base = base
        self.kernel = kernel
        self.complement = complement

    def representative(self, e: LevelElement) -> LevelElement:
        return e.apply(self.complement)

    def _norm(self, e: LevelElement) -> Interval:
        rep = self.representative(e)
        if self.kernel.shape[1] == 0:
            return self.base.norm(rep)
        n = e.level
        directions = [
            self.base.realize(LevelElement.unit(n, i, j, self.kernel[:, t]))
            for i in range(n) for j in range(n) for t in range(self.kernel.shape[1])
        ]
        budget = self.oracle_budget.scaled(restarts=min(self.budget.restarts, QUOTIENT_RESTARTS))
        return min_spectral_over_affine(self.base.realize(rep), directions, budget, self.tolerances)

    def _coordinate_constants(self) -> np.ndarray:
        if isinstance(self.base, ConcreteOS):
            return np.array([
                functional_norm(self.base.basis, self.complement[:, r].conj(), self.oracle_budget, self.tolerances).hi
                for r in range(self.dim)
            ])
        return np.abs(self.complement.conj().T) @ self.base.coordinate_constants()


def quotient(X: OSpace, N: Any, name: Optional[str] = None) -> Tuple[OSpace, OSMap]:
    """
    Quotient operator space X/N with its complete quotient map

    Args:
        X: Concrete (or concretely realizable) space
        N: Coordinate vectors spanning the subspace N (rows)

    Returns:
        (X/N, quotient map q)

    Raises:
        InvalidInputError: If N is not made of coordinate vectors of X
        UnsupportedInputError: If X has no concrete presentation
    """
    if not X.is_concrete:
        raise UnsupportedInputError(f"quotient needs a concrete space, got {X.name}", {"kind": X.kind.value})
    arr = np.asarray(N, dtype=np.complex128)
    if arr.size == 0:
        arr = np.zeros((0, X.dim), dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != X.dim:
        raise InvalidInputError(f"N must be given by coordinate vectors of length {X.dim}", {"shape": list(arr.shape)})
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("N has non-finite coordinates")

    if arr.shape[0] == 0 or not np.any(arr):
        kernel = np.zeros((X.dim, 0), dtype=np.complex128)
        complement = np.eye(X.dim, dtype=np.complex128)
    else:
        kernel = scipy.linalg.orth(arr.T)
        complement = scipy.linalg.null_space(kernel.conj().T) if kernel.shape[1] < X.dim else np.zeros((X.dim, 0))
    Q = QuotientSpace(X, kernel, complement.astype(np.complex128), name)
    q = OSMap(X, Q, Q.complement.conj().T, "quotient_map", cb_bound=1.0)
    return Q, q


def factor_through_quotient(q: OSMap, h: OSMap, tol: float = 1e-9) -> OSMap:
    """
    The unique h_hat with h_hat q = h for h vanishing on the kernel of q

    Raises:
        InvalidInputError: If h does not vanish on the kernel
    """
    Q = q.cod
    if not isinstance(Q, QuotientSpace):
        raise InvalidInputError("expected a quotient map", {"map": q.name})
    residual = float(np.max(np.abs(h.coeff @ Q.kernel), initial=0.0))
    if residual > tol * max(1.0, float(np.max(np.abs(h.coeff), initial=0.0))):
        raise InvalidInputError("map does not vanish on the kernel", {"residual": residual})
    return OSMap(Q, h.cod, h.coeff @ Q.complement, f"{h.name}^", h.cb_bound)


def coequaliser(f: OSMap, g: OSMap) -> Tuple[OSpace, OSMap]:
    """
    Coequaliser of a parallel pair: cod / image(f - g)

    Returns:
        (quotient space E, complete quotient map q with q f = q g)
    """
    _check_parallel(f, g)
    diff = f.coeff - g.coeff
    image = scipy.linalg.orth(diff) if np.any(diff) else np.zeros((f.cod.dim, 0))
    return quotient(f.cod, image.T, name=f"coeq({f.name},{g.name})")


# Duals

class DualSpace(OSpace):
    """
    Dual operator space X* with M_n(X*) = CB(X, M_n)

    Coordinates of a functional are its values f(b_s) on the basis of X. Level
    1 is the functional norm; at level n the grid [f_ij] is the map X -> M_n
    and its cb norm is bounded below by alternating ascent and above by a
    Haagerup factorization of a linear extension to M_k.
    """

    def __init__(self, base: ConcreteOS, kind: SpaceKind = SpaceKind.DUAL, name: Optional[str] = None):
        super().__init__(
            base.dim, kind, {"name": name or f"{base.name}*", "of": base.provenance},
            base.budget, base.tolerances
        )
        self.base = base
        self._targets: Dict[int, ConcreteOS] = {}

    def _target(self, n: int) -> ConcreteOS:
        if n not in self._targets:
            self._targets[n] = matrix_algebra(n, self.budget, self.tolerances)
        return self._targets[n]

    def as_map(self, e: LevelElement) -> OSMap:
        """The grid [f_ij] as a map X -> M_n"""
        n = e.level
        return OSMap(self.base, self._target(n), e.coords.reshape(n * n, self.dim), "dual_grid")

    def haagerup_bound(self, e: LevelElement) -> float:
        """||V|| ||W|| for a factorization x -> V*(x (x) I)W of an extension to M_k"""
        n, k = e.level, self.base.ambient
        grids = np.moveaxis(e.coords, 2, 0)
        pinv = np.linalg.pinv(stack_vectorized(self.base.basis))
        extension = np.einsum("sr,spq->rpq", pinv, grids)
        choi = extension.reshape(k, k, n, n).transpose(0, 2, 1, 3).reshape(k * n, k * n)
        u, s, vh = np.linalg.svd(choi)
        if s[0] == 0.0:
            return 0.0
        r = int(np.sum(s > 1e-14 * s[0]))
        left = u[:, :r] * np.sqrt(s[:r])
        right = np.sqrt(s[:r])[:, None] * vh[:r]

        def bound(theta: np.ndarray) -> float:
            d = np.exp(theta)
            v = (left * d).reshape(k, n, r).transpose(0, 2, 1).reshape(k * r, n).conj()
            w = (right / d[:, None]).reshape(r, k, n).transpose(1, 0, 2).reshape(k * r, n)
            return float(np.linalg.norm(v, 2) * np.linalg.norm(w, 2))

        start = np.zeros(r)
        best = bound(start)
        if r > 1:
            found = scipy.optimize.minimize(
                lambda t: np.log(bound(t)), start, method="Nelder-Mead",
                options={"maxiter": 40 * r, "xatol": 1e-10, "fatol": 1e-14}
            )
            best = min(best, bound(found.x))
        return best

    def _norm(self, e: LevelElement) -> Interval:
        if e.level == 1:
            return functional_norm(self.base.basis, e.coords[0, 0, :], self.oracle_budget, self.tolerances)
        phi = self.as_map(e)
        estimator = MapNormEstimator(self.oracle_budget, self.tolerances)
        lo, _ = estimator.lower_bound(phi, e.level)
        hi = min(estimator.upper_bound(phi, e.level)[0], self.haagerup_bound(e))
        return Interval.bounds(min(lo, hi), hi, self.tolerances.exactness)

    def _coordinate_constants(self) -> np.ndarray:
        # |f(b_s)| <= ||f|| ||b_s||
        return np.array([self.base.norm(self.base.basis_element(s)).hi for s in range(self.dim)])


class BidualSpace(OSpace):
    """
    X** with coordinates of X through x -> (f -> f(x))

    Level 1 is sup |f(x)| / ||f|| over functionals of X, each normed in X*.
    Vector functionals from the top singular pair of x and seeded random
    functionals give the lower bound; contractivity of the canonical
    embedding gives ||x|| as the upper bound. Higher levels use the embedding.
    """

    def __init__(self, base: ConcreteOS):
        super().__init__(base.dim, SpaceKind.DUAL, {"name": f"{base.name}**", "of": base.provenance}, base.budget, base.tolerances)
        self.base = base

    def functional_ratio(self, e: LevelElement, f: np.ndarray) -> float:
        """|f(x)| / ||f||_{X*}"""
        size = functional_norm(self.base.basis, f, self.oracle_budget, self.tolerances).hi
        if size <= 0:
            return 0.0
        return float(abs(np.dot(f, e.coords[0, 0, :]))) / size

    def _norm(self, e: LevelElement) -> Interval:
        embedded = self.base.norm(e)
        if e.level > 1:
            return embedded
        images = self.base.realization_basis
        _, phi, psi = top_singular_pair(self.base.realize(e))
        candidates = [np.einsum("a,sab,b->s", phi.conj(), images, psi)]
        budget = self.oracle_budget
        for t in range(budget.restarts):
            rng = restart_rng(budget.seed, (self.dim, 29), t)
            candidates.append(rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim))
        lo = max(self.functional_ratio(e, f) for f in candidates)
        hi = embedded.hi
        if lo > hi * (1.0 + self.tolerances.verdict):
            logger.warning(f"Bidual norm {lo:.12g} exceeds the embedded norm {hi:.12g} in {self.name}")
        return Interval.bounds(min(lo, hi), hi, self.tolerances.exactness)

    def _coordinate_constants(self) -> np.ndarray:
        return self.base.coordinate_constants()


def dual(X: OSpace) -> OSpace:
    """
    Dual operator space

    Raises:
        UnsupportedInputError: If X is neither concrete nor itself a dual
    """
    if isinstance(X, DualSpace):
        return BidualSpace(X.base)
    if not isinstance(X, ConcreteOS):
        raise UnsupportedInputError(f"dual needs a concrete space, got {X.name}", {"kind": X.kind.value})
    return DualSpace(X)


# Min quantization

class MinSpace(OSpace):
    """
    Min(X): the smallest operator space structure on the Banach space X

    Level-n norms are sup ||[f(x_ij)]|| over the unit ball of X*; vector
    functionals xi* (.) eta of the ambient M_k reach that supremum.
    """

    def __init__(self, base: ConcreteOS):
        super().__init__(base.dim, SpaceKind.MIN, {"name": f"Min({base.name})", "of": base.provenance}, base.budget, base.tolerances)
        self.base = base
        self.executor = RestartExecutor(self.budget.max_workers)

    def _vector_functional_bound(self, grid: np.ndarray) -> float:
        n, k = grid.shape[0], grid.shape[2]
        budget = self.oracle_budget

        def restart(rng: np.random.Generator, index: int):
            if index == 0:
                _, xi, eta = top_singular_pair(grid[0, 0])
            else:
                xi = rng.standard_normal(k) + 1j * rng.standard_normal(k)
                eta = rng.standard_normal(k) + 1j * rng.standard_normal(k)
                xi, eta = xi / np.linalg.norm(xi), eta / np.linalg.norm(eta)
            best = 0.0
            for _ in range(budget.iterations):
                scalars = np.einsum("a,ijab,b->ij", xi.conj(), grid, eta)
                value, phi, psi = top_singular_pair(scalars)
                mixed = np.einsum("i,ijab,j->ab", phi.conj(), grid, psi)
                value2, xi, eta = top_singular_pair(mixed)
                if value2 <= best * (1.0 + 1e-13):
                    best = max(best, value2)
                    break
                best = max(value, value2)
            return best

        results = self.executor.run(restart, budget.restarts, budget.seed, (n, self.dim, 17))
        return max(results)

    def _norm(self, e: LevelElement) -> Interval:
        own = self.base.norm(e)
        if e.level == 1:
            return own
        grid = np.einsum("ijs,sab->ijab", e.coords, self.base.realization_basis)
        n, k = e.level, self.base.ambient
        hilbert_schmidt = float(np.linalg.norm(grid.reshape(n * n, k * k), 2))
        hi = min(own.hi, hilbert_schmidt)
        lo = self._vector_functional_bound(grid)
        return Interval.bounds(min(lo, hi), hi, self.tolerances.exactness)

    def _coordinate_constants(self) -> np.ndarray:
        return self.base.coordinate_constants()


def min_quantization(X: OSpace) -> OSpace:
    """
    Min quantization of a concrete space

    Raises:
        UnsupportedInputError: If X is not concrete
    """
    if not isinstance(X, ConcreteOS):
        raise UnsupportedInputError(f"Min needs a concrete space, got {X.name}", {"kind": X.kind.value})
    return MinSpace(X)


# Mono and epi predicates

def is_mono(u: OSMap) -> Verdict:
    """Monomorphisms are exactly the injective maps"""
    rank = u.rank if u.dom.dim else 0
    if rank == u.dom.dim:
        return Verdict(VerdictStatus.HOLDS, detail={"rank": rank})
    kernel = scipy.linalg.null_space(u.coeff)[:, 0]
    return Verdict(VerdictStatus.FAILS, Witness(1, LevelElement.from_vector(kernel), 0.0), {"rank": rank})


def is_epi(u: OSMap) -> Verdict:
    """Epimorphisms have dense, hence full, image"""
    rank = u.rank if u.cod.dim else 0
    status = VerdictStatus.HOLDS if rank == u.cod.dim else VerdictStatus.FAILS
    return Verdict(status, detail={"rank": rank, "cod_dim": u.cod.dim})


def is_strong_mono(u: OSMap, level: int, trials: int = 20, tol: float = 1e-6, seed: int = 0) -> Verdict:
    """
    Strong monos are complete isometries; the regular-mono picture (u equalises
    the quotient map onto cod / u[dom] and zero) is confirmed alongside.
    """
    mono = is_mono(u)
    if mono.fails:
        return mono
    isometry = is_complete_isometry(u, level, trials, tol, seed)
    detail = dict(isometry.detail)
    if u.cod.is_concrete:
        Q, q = quotient(u.cod, u.coeff.T)
        E, e = equaliser(q, zero_map(u.cod, Q))
        joint = numerical_rank(np.hstack([e.coeff, u.coeff])) if E.dim else 0
        detail["regular"] = bool(E.dim == u.dom.dim and joint == u.dom.dim)
        if not detail["regular"]:
            return Verdict(VerdictStatus.FAILS, detail=detail)
    return Verdict(isometry.status, isometry.witness, detail)


def is_strong_epi(u: OSMap, level: int, samples: int = 8, tol: float = 1e-6) -> Verdict:
    """Strong epis are complete quotient maps"""
    return is_complete_quotient(u, level, samples, tol)


def kernel_pair(e: OSMap) -> Tuple[OSpace, OSMap, OSMap]:
    """
    Kernel pair {(x1, x2): e(x1) = e(x2)} inside dom x dom with its projections
    """
    P, projections, _ = product([e.dom, e.dom])
    K, k = equaliser(e.compose(projections[0]), e.compose(projections[1]))
    return K, projections[0].compose(k), projections[1].compose(k)


def canonical_factor(e: OSMap) -> Tuple[OSpace, OSMap, OSMap]:
    """
    dom / ker(e) with its quotient map q and the injective e_hat with e_hat q = e
    """
    kernel = scipy.linalg.null_space(e.coeff) if e.dom.dim else np.zeros((0, 0))
    Q, q = quotient(e.dom, kernel.T)
    e_hat = OSMap(Q, e.cod, e.coeff @ Q.complement, f"{e.name}^", e.cb_bound)
    return Q, q, e_hat


# Universal properties

@dataclass
class ConeReport:
    """Residuals of a universal-property check"""
    kind: str
    residual_commute: float
    residual_unique: float
    trials: int
    seed: int
    null_dimension: int = 0

    @property
    def unique(self) -> bool:
        return self.null_dimension == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "residual_commute": self.residual_commute,
            "residual_unique": self.residual_unique,
            "trials": self.trials,
            "seed": self.seed,
            "null_dimension": self.null_dimension,
        }


def _max_abs(a: np.ndarray) -> float:
    return float(np.max(np.abs(a), initial=0.0))


def _random_apex(rng: np.random.Generator) -> ConcreteOS:
    return random_concrete(rng, 2, int(rng.integers(1, 4)), name="apex")


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _second_candidate(constraint: np.ndarray, target: np.ndarray, right: bool) -> Tuple[np.ndarray, int]:
    """Least-squares solution of constraint @ m = target (or m @ constraint = target) and the null dimension"""
    if right:
        sol, *_ = np.linalg.lstsq(constraint.T, target.T, rcond=None)
        return sol.T, scipy.linalg.null_space(constraint.T).shape[1]
    sol, *_ = np.linalg.lstsq(constraint, target, rcond=None)
    return sol, scipy.linalg.null_space(constraint).shape[1]


def _trial_product(pieces, rng, coproduct_side: bool) -> Tuple[float, float, int]:
    Z = _random_apex(rng)
    if coproduct_side:
        C, inclusions, _ = coproduct(pieces)
        legs = [OSMap(X, Z, _gaussian(rng, (Z.dim, X.dim))) for X in pieces]
        m = coproduct_mediator(C, legs)
        commute = max(_max_abs(m.compose(i).coeff - g.coeff) for i, g in zip(inclusions, legs))
        stacked = np.hstack([i.coeff for i in inclusions])
        target = np.hstack([g.coeff for g in legs])
        second, null = _second_candidate(stacked, target, right=True)
    else:
        P, projections, _ = product(pieces)
        legs = [OSMap(Z, X, _gaussian(rng, (X.dim, Z.dim))) for X in pieces]
        m = product_mediator(P, legs)
        commute = max(_max_abs(p.compose(m).coeff - f.coeff) for p, f in zip(projections, legs))
        stacked = np.vstack([p.coeff for p in projections])
        target = np.vstack([f.coeff for f in legs])
        second, null = _second_candidate(stacked, target, right=False)
    return commute, _max_abs(second - m.coeff), null


def _trial_equaliser(pieces, rng) -> Tuple[float, float, int]:
    f, g = pieces
    E, e = equaliser(f, g)
    Z = _random_apex(rng)
    h = OSMap(Z, f.dom, e.coeff @ _gaussian(rng, (E.dim, Z.dim)))
    h_hat = factor_through_equaliser(e, h)
    commute = max(_max_abs(e.compose(h_hat).coeff - h.coeff), _max_abs((f.coeff - g.coeff) @ h.coeff))
    second, null = _second_candidate(e.coeff, h.coeff, right=False)
    return commute, _max_abs(second - h_hat.coeff), null


def _trial_coequaliser(pieces, rng) -> Tuple[float, float, int]:
    f, g = pieces
    Q, q = coequaliser(f, g)
    Z = _random_apex(rng)
    h = OSMap(f.cod, Z, _gaussian(rng, (Z.dim, Q.dim)) @ Q.complement.conj().T)
    h_hat = factor_through_quotient(q, h)
    commute = max(_max_abs(h_hat.compose(q).coeff - h.coeff), _max_abs(q.coeff @ (f.coeff - g.coeff)))
    second, null = _second_candidate(q.coeff, h.coeff, right=True)
    return commute, _max_abs(second - h_hat.coeff), null


def verify_universal(kind: str, pieces: Sequence[Any], trials: int = 50, seed: int = 0) -> ConeReport:
    """
    Randomized check of a universal property

    Builds random (co)cones, the mediating map, the commutation residual, and
    a second commuting candidate found by least squares together with the
    dimension of the space of commuting perturbations.

    Args:
        kind: product, coproduct, equaliser or coequaliser
        pieces: spaces for (co)products, a parallel pair (f, g) otherwise
        trials: Number of random (co)cones
        seed: Seed

    Raises:
        InvalidInputError: If the pieces do not fit the kind
    """
    pieces = list(pieces)
    runners: Dict[str, Callable] = {
        "product": lambda rng: _trial_product(pieces, rng, coproduct_side=False),
        "coproduct": lambda rng: _trial_product(pieces, rng, coproduct_side=True),
        "equaliser": lambda rng: _trial_equaliser(pieces, rng),
        "coequaliser": lambda rng: _trial_coequaliser(pieces, rng),
    }
    if kind not in runners:
        raise InvalidInputError(f"unknown universal property '{kind}'", {"known": sorted(runners)})
    if kind in ("product", "coproduct"):
        if not pieces or not all(isinstance(p, OSpace) for p in pieces):
            raise InvalidInputError(f"{kind} check needs a nonempty family of spaces")
    else:
        if len(pieces) != 2 or not all(isinstance(p, OSMap) for p in pieces):
            raise InvalidInputError(f"{kind} check needs a parallel pair of maps")
        _check_parallel(*pieces)

    commute, unique, null = 0.0, 0.0, 0
    for t in range(trials):
        c, u, d = runners[kind](restart_rng(seed, (19,), t))
        commute, unique, null = max(commute, c), max(unique, u), max(null, d)
    if null:
        logger.warning(f"{kind} mediator is not unique (null dimension {null})")
    return ConeReport(kind, commute, unique, trials, seed, null)
