"""
Projective Tensor Product
Norm bounds, linearization of bilinear maps and monoidal structure maps
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError, ShapeMismatchError
from ..linalg.matrix_core import (
    Interval,
    complex_gaussian,
    matrix_to_literal,
    polar_factor,
    random_contraction,
    spectral_norm,
    top_singular_pair,
)
from ..utils.parallel import RestartExecutor, restart_rng
from .maps import OSMap, Verdict, VerdictStatus, identity_map
from .ospace import LevelElement, OSpace, SpaceKind, scalars

ALS_ITERATIONS = 40


@dataclass
class Factorization:
    """v = alpha (x (x) y) beta + residual"""
    p: int
    q: int
    alpha: np.ndarray
    x: LevelElement
    y: LevelElement
    beta: np.ndarray
    value: float
    residual: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "q": self.q,
            "alpha": matrix_to_literal(self.alpha),
            "x": self.x.to_literal(),
            "y": self.y.to_literal(),
            "beta": matrix_to_literal(self.beta),
            "value": self.value,
            "residual": self.residual,
        }


def elementary(x: LevelElement, y: LevelElement) -> LevelElement:
    """x (x) y in M_pq(X (x) Y) with rows (i, k) and coordinate s * dim(Y) + t"""
    p, q = x.level, y.level
    coords = np.einsum("ijs,klt->ikjlst", x.coords, y.coords)
    return LevelElement(coords.reshape(p * q, p * q, x.dim * y.dim))


class TensorSpace(OSpace):
    """
    Operator space projective tensor product X (x)^ Y

    ||v|| is the infimum of ||alpha|| ||x|| ||y|| ||beta|| over v = alpha (x (x) y) beta.
    Upper bounds come from explicit factorizations (slice and rank
    decompositions, alternating least squares with p, q at most the
    factorization cap); lower bounds from jointly completely contractive
    bilinear maps: the Kronecker product of concrete presentations and
    products A x B y C with contractions A, B, C.
    """

    def __init__(self, left: OSpace, right: OSpace):
        super().__init__(
            left.dim * right.dim, SpaceKind.TENSOR,
            {"name": f"({left.name} (x) {right.name})", "left": left.provenance, "right": right.provenance},
            left.budget, left.tolerances
        )
        self.left = left
        self.right = right
        self.executor = RestartExecutor(self.budget.max_workers)

    def split(self, e: LevelElement) -> np.ndarray:
        n = e.level
        return e.coords.reshape(n, n, self.left.dim, self.right.dim)

    def cap(self, n: int) -> int:
        return self.budget.factorization_cap or 2 * n

    # Upper bounds

    @staticmethod
    def _side_bound(c: np.ndarray, wide: OSpace, narrow: OSpace) -> float:
        """Rank and slice decompositions of c in M_n(wide) (x) narrow"""
        n, _, d_wide, d_narrow = c.shape
        flat = c.reshape(n * n * d_wide, d_narrow)

        slices = 0.0
        for t in range(d_narrow):
            if np.any(flat[:, t]):
                slices += wide.norm(LevelElement(c[:, :, :, t])).hi * narrow.norm(narrow.basis_element(t)).hi

        u, s, vh = np.linalg.svd(flat, full_matrices=False)
        rank = 0.0
        for r in range(len(s)):
            if s[r] <= 1e-15 * s[0]:
                break
            a = LevelElement(u[:, r].reshape(n, n, d_wide))
            g = LevelElement.from_vector(vh[r])
            rank += s[r] * wide.norm(a).hi * narrow.norm(g).hi
        return min(slices, rank)

    def decomposition_bound(self, c: np.ndarray) -> float:
        """Triangle-inequality bound through elementary decompositions"""
        if not np.any(c):
            return 0.0
        return min(
            self._side_bound(c, self.left, self.right),
            self._side_bound(c.transpose(0, 1, 3, 2), self.right, self.left)
        )

    def _alternating_fit(self, c: np.ndarray, p: int, q: int, rng: np.random.Generator, iterations: int):
        n, _, dx, dy = c.shape
        alpha = complex_gaussian(rng, (n, p, q))
        xs = complex_gaussian(rng, (p, p, dx))
        ys = complex_gaussian(rng, (q, q, dy))
        beta = complex_gaussian(rng, (p, q, n))

        def solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
            return np.linalg.lstsq(a, b, rcond=None)[0]

        for _ in range(iterations):
            g = np.einsum("acs,bet,cej->abjst", xs, ys, beta).reshape(p * q, n * dx * dy)
            alpha = solve(g.T, c.reshape(n, n * dx * dy).T).T.reshape(n, p, q)
            h = np.einsum("iab,acs,bet->istce", alpha, xs, ys).reshape(n * dx * dy, p * q)
            beta = solve(h, c.transpose(0, 2, 3, 1).reshape(n * dx * dy, n)).reshape(p, q, n)
            k = np.einsum("iab,bet,cej->ijtac", alpha, ys, beta).reshape(n * n * dy, p * p)
            xs = solve(k, c.transpose(0, 1, 3, 2).reshape(n * n * dy, dx)).reshape(p, p, dx)
            m = np.einsum("iab,acs,cej->ijsbe", alpha, xs, beta).reshape(n * n * dx, q * q)
            ys = solve(m, c.reshape(n * n * dx, dy)).reshape(q, q, dy)

            sizes = [np.linalg.norm(f) for f in (alpha, xs, ys, beta)]
            if min(sizes) > 0:
                common = float(np.prod(sizes)) ** 0.25
                alpha, xs, ys, beta = (f * (common / s) for f, s in zip((alpha, xs, ys, beta), sizes))

        model = np.einsum("iab,acs,bet,cej->ijst", alpha, xs, ys, beta)
        return alpha, xs, ys, beta, model

    def factorize(self, e: LevelElement) -> Optional[Factorization]:
        """Best factorization found by seeded alternating least squares"""
        self.check_element(e)
        c = self.split(e)
        n = e.level
        cap = self.cap(n)
        budget = self.oracle_budget
        iterations = min(budget.iterations, ALS_ITERATIONS)

        def restart(rng: np.random.Generator, index: int) -> Factorization:
            size = min(cap, n + index % 2 * (cap - n))
            alpha, xs, ys, beta, model = self._alternating_fit(c, size, size, rng, iterations)
            x, y = LevelElement(xs), LevelElement(ys)
            a_mat, b_mat = alpha.reshape(n, size * size), beta.reshape(size * size, n)
            residual = c - model
            value = (
                spectral_norm(a_mat) * self.left.norm(x).hi * self.right.norm(y).hi * spectral_norm(b_mat)
                + self.decomposition_bound(residual)
            )
            return Factorization(size, size, a_mat, x, y, b_mat, float(value), float(np.max(np.abs(residual))))

        results = self.executor.run(restart, budget.restarts, budget.seed, (n, self.dim, 23))
        best = min(results, key=lambda f: f.value)
        logger.debug(f"{self.name} level {n}: best factorization {best.value:.6g} (p=q={best.p}, residual {best.residual:.2e})")
        return best

    # Lower bounds

    def _coordinate_pairing(self, c: np.ndarray) -> float:
        kx, ky = self.left.coordinate_constants(), self.right.coordinate_constants()
        best = 0.0
        for s in range(self.left.dim):
            for t in range(self.right.dim):
                if kx[s] > 0 and ky[t] > 0 and np.any(c[:, :, s, t]):
                    best = max(best, spectral_norm(c[:, :, s, t]) / (kx[s] * ky[t]))
        return best

    def _kronecker_pairing(self, c: np.ndarray) -> float:
        bx, by = self.left.realization_basis, self.right.realization_basis
        n, k, l = c.shape[0], bx.shape[1], by.shape[1]
        block = np.einsum("ijst,sab,tcd->iacjbd", c, bx, by).reshape(n * k * l, n * k * l)
        return spectral_norm(block)

    @staticmethod
    def _product_ascent(c: np.ndarray, bx: np.ndarray, by: np.ndarray, rng: np.random.Generator, index: int, iterations: int) -> float:
        """max ||[sum c_ijst A bx_s B by_t C]|| over contractions A, B, C"""
        n = c.shape[0]
        k, l = bx.shape[1], by.shape[1]
        m = max(k, l)
        if index == 0:
            a, b, cc = np.eye(m, k, dtype=np.complex128), np.eye(k, l, dtype=np.complex128), np.eye(l, m, dtype=np.complex128)
        else:
            a, b, cc = random_contraction(rng, m, k), random_contraction(rng, k, l), random_contraction(rng, l, m)
        best = 0.0
        for _ in range(iterations):
            xa = np.einsum("ma,sab->smb", a, bx) @ b
            yc = by @ cc
            z = np.einsum("ijst,sml,tlq->imjq", c, xa, yc).reshape(n * m, n * m)
            sigma, phi, psi = top_singular_pair(z)
            if sigma <= best * (1.0 + 1e-12):
                break
            best = sigma
            ph, ps = phi.reshape(n, m), psi.reshape(n, m)

            w = ps @ cc.T
            h = np.einsum("ijst,sab,bc,tcd,jd->ia", c, bx, b, by, w)
            a = polar_factor(h.T @ ph.conj()).conj().T

            uc = ph.conj() @ a
            mb = np.einsum("ijst,tcd,jd,ia,sab->cb", c, by, w, uc, bx)
            b = polar_factor(mb).conj().T

            r = np.einsum("ijst,ia,sab,bc,tcd->jd", c, uc, bx, b, by)
            cc = polar_factor(ps.T @ r).conj().T
        return best

    def pairing_bound(self, c: np.ndarray) -> float:
        """Lower bound sup ||phi_n(v)|| over jointly completely contractive phi"""
        best = self._coordinate_pairing(c)
        if not (self.left.is_concrete and self.right.is_concrete):
            return best
        best = max(best, self._kronecker_pairing(c))
        bx, by = self.left.realization_basis, self.right.realization_basis
        swapped = c.transpose(0, 1, 3, 2)
        budget = self.oracle_budget

        def restart(rng: np.random.Generator, index: int) -> float:
            return max(
                self._product_ascent(c, bx, by, rng, index, budget.iterations),
                self._product_ascent(swapped, by, bx, rng, index, budget.iterations)
            )

        results = self.executor.run(restart, budget.restarts, budget.seed, (c.shape[0], self.dim, 29))
        return max(best, max(results))

    def one_dimensional_factor_norm(self, c: np.ndarray) -> Interval:
        """With Y = span(y0), X (x)^ Y is X scaled by ||y0||; symmetrically on the left"""
        if self.right.dim == 1:
            wide, unit, coords = self.left, self.right, c[:, :, :, 0]
        else:
            wide, unit, coords = self.right, self.left, c[:, :, 0, :]
        scale = unit.norm(unit.basis_element(0))
        size = wide.norm(LevelElement(np.ascontiguousarray(coords)))
        return Interval.bounds(size.lo * scale.lo, size.hi * scale.hi, self.tolerances.exactness)

    def _norm(self, e: LevelElement) -> Interval:
        c = self.split(e)
        if min(self.left.dim, self.right.dim) == 1:
            return self.one_dimensional_factor_norm(c)
        hi = self.decomposition_bound(c)
        if e.level > 1 or min(self.left.dim, self.right.dim) > 1:
            hi = min(hi, self.factorize(e).value)
        lo = self.pairing_bound(c)
        if lo > hi * (1.0 + 1e-9):
            logger.warning(f"{self.name}: pairing bound {lo:.12g} exceeds factorization bound {hi:.12g}")
        return Interval.bounds(min(lo, hi), hi, self.tolerances.exactness)

    def _coordinate_constants(self) -> np.ndarray:
        return np.outer(self.left.coordinate_constants(), self.right.coordinate_constants()).ravel()


def proj_tensor(X: OSpace, Y: OSpace) -> TensorSpace:
    """Projective tensor product of two operator spaces"""
    return TensorSpace(X, Y)


# Bilinear maps

class BilinMap:
    """Bilinear map X x Y -> Z with coeff[r, s, t] the r-th coordinate of u(b_s, c_t)"""

    def __init__(self, dom_x: OSpace, dom_y: OSpace, cod: OSpace, coeff: Any, name: Optional[str] = None):
        coeff = np.asarray(coeff, dtype=np.complex128)
        if coeff.size == 0:
            coeff = np.zeros((cod.dim, dom_x.dim, dom_y.dim), dtype=np.complex128)
        if coeff.shape != (cod.dim, dom_x.dim, dom_y.dim):
            raise ShapeMismatchError(
                f"bilinear coefficients must have shape {(cod.dim, dom_x.dim, dom_y.dim)}",
                {"shape": list(coeff.shape)}
            )
        if not np.all(np.isfinite(coeff)):
            raise InvalidInputError("bilinear coefficients are not finite")
        self.dom_x = dom_x
        self.dom_y = dom_y
        self.cod = cod
        self.coeff = coeff
        self.name = name or f"{dom_x.name}x{dom_y.name}->{cod.name}"

    def __call__(self, x: LevelElement, y: LevelElement) -> LevelElement:
        """[u(x_ij, y_kl)] with rows (i, k) and columns (j, l)"""
        self.dom_x.check_element(x)
        self.dom_y.check_element(y)
        p, q = x.level, y.level
        coords = np.einsum("rst,ijs,klt->ikjlr", self.coeff, x.coords, y.coords)
        return LevelElement(coords.reshape(p * q, p * q, self.cod.dim))

    def is_zero(self) -> bool:
        return not np.any(self.coeff)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dom_x": self.dom_x.to_dict(),
            "dom_y": self.dom_y.to_dict(),
            "cod": self.cod.to_dict(),
            "coeff": [matrix_to_literal(c) for c in self.coeff],
        }


def scalar_multiplication() -> BilinMap:
    C = scalars()
    return BilinMap(C, C, C, np.ones((1, 1, 1)), "mult")


def canonical_bilinear(X: OSpace, Y: OSpace, T: Optional[TensorSpace] = None) -> BilinMap:
    """pi: (x, y) -> x (x) y"""
    T = T or TensorSpace(X, Y)
    return BilinMap(X, Y, T, np.eye(T.dim).reshape(T.dim, X.dim, Y.dim), "pi")


def linearize(u: BilinMap, T: Optional[TensorSpace] = None) -> OSMap:
    """The linear map on X (x)^ Y with u_bar(x (x) y) = u(x, y)"""
    T = T or TensorSpace(u.dom_x, u.dom_y)
    return OSMap(T, u.cod, u.coeff.reshape(u.cod.dim, T.dim), f"{u.name}_bar")


def delinearize(ubar: OSMap) -> BilinMap:
    """u_bar o pi for a map out of a tensor product"""
    T = ubar.dom
    if not isinstance(T, TensorSpace):
        raise InvalidInputError("expected a map out of a tensor product", {"dom_kind": T.kind.value})
    return BilinMap(T.left, T.right, ubar.cod, ubar.coeff.reshape(ubar.cod.dim, T.left.dim, T.right.dim), f"{ubar.name}.pi")


def jcb_norm(
    u: BilinMap,
    caps: Tuple[int, int] = (2, 2),
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Interval:
    """
    Interval around the jointly completely bounded norm

    lo is the best ratio ||u(x, y)|| / (||x|| ||y||) over sampled pairs at
    levels up to caps; hi is the coefficient bound
    sum |coeff[r, s, t]| kappa_s kappa_t ||c_r||, usually loose.
    """
    p_cap, q_cap = caps
    if p_cap < 1 or q_cap < 1:
        raise InvalidInputError("level caps must be positive", {"caps": list(caps)})
    if u.is_zero():
        return Interval.zero()

    kx, ky = u.dom_x.coordinate_constants(), u.dom_y.coordinate_constants()
    unit_norms = np.array([u.cod.norm(u.cod.basis_element(r)).hi for r in range(u.cod.dim)])
    hi = float(np.einsum("rst,r,s,t->", np.abs(u.coeff), unit_norms, kx, ky))

    def ratio(x: LevelElement, y: LevelElement) -> float:
        a, b = u.dom_x.norm(x).hi, u.dom_y.norm(y).hi
        if a <= 0 or b <= 0:
            return 0.0
        return u.cod.norm(u(x, y)).lo / (a * b)

    lo = 0.0
    for s in range(u.dom_x.dim):
        for t in range(u.dom_y.dim):
            lo = max(lo, ratio(u.dom_x.basis_element(s), u.dom_y.basis_element(t)))
    for p in range(1, p_cap + 1):
        for q in range(1, q_cap + 1):
            for index in range(budget.restarts):
                rng = restart_rng(budget.seed, (p, q, 31), index)
                lo = max(lo, ratio(u.dom_x.random_element(rng, p), u.dom_y.random_element(rng, q)))

    if hi > 2.0 * lo:
        logger.debug(f"jcb norm of {u.name} loosely bounded: [{lo:.6g}, {hi:.6g}]")
    return Interval.bounds(min(lo, hi), hi, tolerances.exactness)


# Functoriality and monoidal structure

def tensor_maps(u: OSMap, v: OSMap) -> OSMap:
    """u (x) v between projective tensor products"""
    bound = None
    if u.cb_bound is not None and v.cb_bound is not None:
        bound = u.cb_bound * v.cb_bound
    return OSMap(
        TensorSpace(u.dom, v.dom), TensorSpace(u.cod, v.cod),
        np.kron(u.coeff, v.coeff), f"({u.name} (x) {v.name})", bound
    )


def _swap(dx: int, dy: int) -> np.ndarray:
    perm = np.zeros((dx * dy, dx * dy), dtype=np.complex128)
    for s in range(dx):
        for t in range(dy):
            perm[t * dx + s, s * dy + t] = 1.0
    return perm


def left_unitor(X: OSpace) -> OSMap:
    return OSMap(TensorSpace(scalars(X.budget, X.tolerances), X), X, np.eye(X.dim), f"lambda_{X.name}", cb_bound=1.0)


def right_unitor(X: OSpace) -> OSMap:
    return OSMap(TensorSpace(X, scalars(X.budget, X.tolerances)), X, np.eye(X.dim), f"rho_{X.name}", cb_bound=1.0)


def associator(X: OSpace, Y: OSpace, Z: OSpace) -> OSMap:
    """(X (x) Y) (x) Z -> X (x) (Y (x) Z); the identity on coordinates"""
    return OSMap(
        TensorSpace(TensorSpace(X, Y), Z), TensorSpace(X, TensorSpace(Y, Z)),
        np.eye(X.dim * Y.dim * Z.dim), f"alpha_{X.name},{Y.name},{Z.name}", cb_bound=1.0
    )


def symmetry(X: OSpace, Y: OSpace) -> OSMap:
    return OSMap(TensorSpace(X, Y), TensorSpace(Y, X), _swap(X.dim, Y.dim), f"sigma_{X.name},{Y.name}", cb_bound=1.0)


@dataclass
class StructureMaps:
    """Unitors, associator and symmetry for a triple of spaces"""
    left_unitor: OSMap
    right_unitor: OSMap
    associator: OSMap
    symmetry: OSMap
    coherence: Dict[str, float] = field(default_factory=dict)

    def all_maps(self) -> List[OSMap]:
        return [self.left_unitor, self.right_unitor, self.associator, self.symmetry]

    def max_residual(self) -> float:
        return max(self.coherence.values(), default=0.0)


def coherence_residuals(X: OSpace, Y: OSpace, Z: OSpace, W: Optional[OSpace] = None) -> Dict[str, float]:
    """Coordinate residuals of the pentagon, triangle, hexagon, involution and unit identities"""
    W = W or X
    dx, dy, dz, dw = X.dim, Y.dim, Z.dim, W.dim
    C = scalars(X.budget, X.tolerances)

    def eye(d: int) -> np.ndarray:
        return np.eye(d, dtype=np.complex128)

    def res(a: np.ndarray, b: np.ndarray) -> float:
        return float(np.max(np.abs(a - b), initial=0.0))

    def assoc(a: OSpace, b: OSpace, c: OSpace) -> np.ndarray:
        return associator(a, b, c).coeff

    XY, YZ, ZW = TensorSpace(X, Y), TensorSpace(Y, Z), TensorSpace(Z, W)
    pentagon = res(
        assoc(X, Y, ZW) @ assoc(XY, Z, W),
        np.kron(eye(dx), assoc(Y, Z, W)) @ assoc(X, YZ, W) @ np.kron(assoc(X, Y, Z), eye(dw))
    )
    triangle = res(
        np.kron(right_unitor(X).coeff, eye(dy)),
        np.kron(eye(dx), left_unitor(Y).coeff) @ assoc(X, C, Y)
    )
    hexagon = res(
        assoc(Y, Z, X) @ symmetry(X, YZ).coeff @ assoc(X, Y, Z),
        np.kron(eye(dy), symmetry(X, Z).coeff) @ assoc(Y, X, Z) @ np.kron(symmetry(X, Y).coeff, eye(dz))
    )
    involution = res(symmetry(Y, X).coeff @ symmetry(X, Y).coeff, eye(dx * dy))
    unit = res(left_unitor(C).coeff, right_unitor(C).coeff)
    return {"pentagon": pentagon, "triangle": triangle, "hexagon": hexagon, "involution": involution, "unit": unit}


def structure_maps(X: OSpace, Y: OSpace, Z: OSpace) -> StructureMaps:
    """Structure maps of the symmetric monoidal structure with coherence residuals"""
    maps = StructureMaps(left_unitor(X), right_unitor(X), associator(X, Y, Z), symmetry(X, Y))
    maps.coherence = coherence_residuals(X, Y, Z)
    return maps


# Projectivity

@dataclass
class ProjectivityReport:
    """Images of sampled unit-ball elements under q (x) id"""
    quotient_verdict: str
    samples: int
    max_image_hi: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_image_hi < 1.0 + self.tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quotient_verdict": self.quotient_verdict,
            "samples": self.samples,
            "max_image_hi": self.max_image_hi,
            "tol": self.tol,
            "passed": self.passed,
        }


def projectivity_probe(
    q: OSMap,
    Y: OSpace,
    quotient_verdict: Optional[Verdict] = None,
    level: int = 1,
    samples: int = 4,
    tol: float = 1e-6,
    seed: int = 0
) -> ProjectivityReport:
    """
    Sample the open unit ball of dom (x)^ Y and bound the images under q (x) id

    Args:
        q: Map expected to be a complete quotient map
        Y: Second tensor factor
        quotient_verdict: Verdict for q when already known
        level: Matrix level of the samples
        samples: Number of samples
        tol: Tolerance on the image norm
        seed: Seed
    """
    product = tensor_maps(q, identity_map(Y))
    source, target = product.dom, product.cod
    worst = 0.0
    for index in range(samples):
        rng = restart_rng(seed, (level, 37), index)
        x = source.random_element(rng, level)
        size = source.norm(x).hi
        if size <= 0:
            continue
        x = x * (0.999 / size)
        worst = max(worst, target.norm(product(x)).hi)
    status = quotient_verdict.status.value if quotient_verdict else VerdictStatus.UNDECIDED.value
    if status == VerdictStatus.HOLDS.value and worst >= 1.0 + tol:
        logger.warning(f"q (x) id stretched a unit-ball sample to {worst:.6g}")
    return ProjectivityReport(status, samples, worst, tol)
