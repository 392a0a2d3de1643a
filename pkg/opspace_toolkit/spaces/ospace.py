"""
Operator Space Model
Level-indexed matricial norms, concrete matrix-subspace presentations and Ruan axiom checks
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import InvalidInputError, ShapeMismatchError, UnsupportedInputError, ErrorCode
from ..linalg.affine import functional_norm
from ..linalg.matrix_core import (
    CMat,
    Interval,
    as_cmat,
    complex_gaussian,
    matrix_to_literal,
    matrix_unit,
    parse_scalar,
    require_independent,
    scalar_to_literal,
    spectral_norm,
    stack_vectorized,
)
from ..utils.parallel import restart_rng

ILL_CONDITIONED = 1e8
ORACLE_RESTARTS = 6
ORACLE_ITERATIONS = 60


class SpaceKind(str, Enum):
    """How an operator space was presented or constructed"""
    CONCRETE = "concrete"
    PRODUCT = "product"
    COPRODUCT = "coproduct"
    QUOTIENT = "quotient"
    DUAL = "dual"
    TENSOR = "tensor"
    MIN = "min"
    TRACE_CLASS = "trace_class"
    SUBSPACE = "subspace"
    AMPLIFIED = "amplified"


@dataclass(frozen=True, eq=False)
class LevelElement:
    """
    Element of M_n(X) stored as an n x n grid of coordinate vectors

    coords has shape (n, n, d); coords[i, j] holds the coordinates of x_ij.
    """
    coords: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coords, dtype=np.complex128)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ShapeMismatchError("element coords must have shape (n, n, d)", {"shape": list(arr.shape)})
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("element has non-finite coordinates", code=ErrorCode.NON_FINITE_ENTRIES)
        object.__setattr__(self, "coords", arr)

    @property
    def level(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[2]

    @classmethod
    def zeros(cls, n: int, dim: int) -> "LevelElement":
        return cls(np.zeros((n, n, dim), dtype=np.complex128))

    @classmethod
    def from_vector(cls, vector: Any) -> "LevelElement":
        """Level-1 element with the given coordinates"""
        v = np.asarray(vector, dtype=np.complex128).ravel()
        return cls(v.reshape(1, 1, -1))

    @classmethod
    def from_scalar_grid(cls, grid: Any, vector: Any) -> "LevelElement":
        """The element [a_ij v] = A (x) v"""
        a = as_cmat(grid, "scalar grid")
        v = np.asarray(vector, dtype=np.complex128).ravel()
        return cls(a[:, :, None] * v[None, None, :])

    @classmethod
    def unit(cls, n: int, i: int, j: int, vector: Any) -> "LevelElement":
        """e_ij (x) v"""
        return cls.from_scalar_grid(matrix_unit(n, i, j), vector)

    @classmethod
    def from_literal(cls, literal: Any) -> "LevelElement":
        """Parse an n x n grid of coordinate vectors in the matrix literal scalar format"""
        grid = [[[parse_scalar(s) for s in cell] for cell in row] for row in literal]
        return cls(np.array(grid, dtype=np.complex128))

    def to_literal(self) -> List[List[List[List[float]]]]:
        return [[[scalar_to_literal(s) for s in cell] for cell in row] for row in self.coords]

    def grid(self, s: int) -> CMat:
        """Scalar n x n matrix of coordinate s"""
        return self.coords[:, :, s]

    def entry(self, i: int, j: int) -> "LevelElement":
        return LevelElement(self.coords[i:i + 1, j:j + 1, :])

    def corner(self, keep: Sequence[int]) -> "LevelElement":
        idx = np.asarray(keep, dtype=int)
        return LevelElement(self.coords[np.ix_(idx, idx)])

    def direct_sum(self, other: "LevelElement") -> "LevelElement":
        """x (+) y in M_{m+n}(X)"""
        if other.dim != self.dim:
            raise ShapeMismatchError("direct sum of elements of different spaces", {"dims": [self.dim, other.dim]})
        m, n = self.level, other.level
        out = np.zeros((m + n, m + n, self.dim), dtype=np.complex128)
        out[:m, :m] = self.coords
        out[m:, m:] = other.coords
        return LevelElement(out)

    def sandwich(self, alpha: Any, beta: Any) -> "LevelElement":
        """alpha x beta for scalar matrices alpha (m x n) and beta (n x m)"""
        alpha, beta = as_cmat(alpha, "alpha"), as_cmat(beta, "beta")
        n = self.level
        if alpha.shape[1] != n or beta.shape[0] != n or alpha.shape[0] != beta.shape[1]:
            raise ShapeMismatchError(
                "scalar matrices do not compose with the element",
                {"alpha": list(alpha.shape), "level": n, "beta": list(beta.shape)}
            )
        return LevelElement(np.einsum("pi,ijs,jq->pqs", alpha, self.coords, beta))

    def apply(self, coeff: Any) -> "LevelElement":
        """Entrywise application of a coefficient matrix (cod.dim x dom.dim)"""
        coeff = np.asarray(coeff, dtype=np.complex128)
        if coeff.ndim != 2 or coeff.shape[1] != self.dim:
            raise ShapeMismatchError(
                "coefficient matrix does not match the element's space",
                {"coeff": list(coeff.shape), "dim": self.dim}
            )
        return LevelElement(np.einsum("ijs,ts->ijt", self.coords, coeff))

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.coords.size == 0 or float(np.max(np.abs(self.coords), initial=0.0)) <= tol

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coords), initial=0.0))

    def __add__(self, other: "LevelElement") -> "LevelElement":
        return LevelElement(self.coords + other.coords)

    def __sub__(self, other: "LevelElement") -> "LevelElement":
        return LevelElement(self.coords - other.coords)

    def __mul__(self, c: complex) -> "LevelElement":
        return LevelElement(complex(c) * self.coords)

    __rmul__ = __mul__

    def __neg__(self) -> "LevelElement":
        return LevelElement(-self.coords)

    def to_dict(self) -> Dict[str, Any]:
        return {"level": self.level, "coords": self.to_literal()}


class OSpace(ABC):
    """
    Operator space of finite dimension presented by a level-n norm oracle

    Norms are returned as certified intervals; concrete presentations give
    exact intervals, constructed spaces may only bound their norms.
    """

    def __init__(
        self,
        dim: int,
        kind: SpaceKind,
        provenance: Optional[Dict[str, Any]] = None,
        budget: Optional[Budget] = None,
        tolerances: Optional[Tolerances] = None
    ):
        self.dim = int(dim)
        self.kind = SpaceKind(kind)
        self.provenance = dict(provenance or {})
        self.provenance.setdefault("kind", self.kind.value)
        self.budget = budget or DEFAULT_BUDGET
        self.tolerances = tolerances or DEFAULT_TOLERANCES
        self._kappa: Optional[np.ndarray] = None

    @property
    def name(self) -> str:
        return str(self.provenance.get("name", f"{self.kind.value}[{self.dim}]"))

    @property
    def oracle_budget(self) -> Budget:
        """Reduced budget for searches run inside a single norm evaluation"""
        return self.budget.scaled(
            restarts=min(self.budget.restarts, ORACLE_RESTARTS),
            iterations=min(self.budget.iterations, ORACLE_ITERATIONS)
        )

    # Concrete presentation

    @property
    def realization_basis(self) -> Optional[np.ndarray]:
        """Stack (d, k, k) of matrices presenting the space inside M_k, if any"""
        return None

    @property
    def ambient(self) -> Optional[int]:
        basis = self.realization_basis
        return None if basis is None else int(basis.shape[1])

    @property
    def is_concrete(self) -> bool:
        return self.realization_basis is not None

    def realize(self, e: LevelElement) -> CMat:
        """
        Block matrix sum_ij E_ij (x) (sum_s coords[i, j, s] b_s) in M_n(M_k)

        Raises:
            UnsupportedInputError: If the space has no concrete presentation
        """
        basis = self.realization_basis
        if basis is None:
            raise UnsupportedInputError(f"{self.name} has no concrete presentation")
        self.check_element(e)
        n, k = e.level, basis.shape[1]
        return np.einsum("ijs,sab->iajb", e.coords, basis).reshape(n * k, n * k)

    # Norm oracle

    def check_element(self, e: LevelElement) -> None:
        if not isinstance(e, LevelElement):
            raise InvalidInputError("expected a LevelElement", {"got": type(e).__name__})
        if e.dim != self.dim:
            raise ShapeMismatchError(
                f"element has {e.dim} coordinates but {self.name} has dimension {self.dim}",
                {"element_dim": e.dim, "space_dim": self.dim}
            )

    def norm(self, e: LevelElement) -> Interval:
        """
        Level-n norm of an element

        Args:
            e: Element of M_n(X)

        Returns:
            Interval enclosing ||e||_n
        """
        self.check_element(e)
        if self.dim == 0 or e.is_zero():
            return Interval.zero()
        return self._norm(e)

    @abstractmethod
    def _norm(self, e: LevelElement) -> Interval:
        """Norm of a nonzero element with matching shape"""

    # Coordinate functionals

    def coordinate_constants(self) -> np.ndarray:
        """
        Upper bounds kappa_s on the norms of the coordinate functionals

        |x_s| <= kappa_s ||x||_1, and hence ||[x_ij^s]|| <= kappa_s ||x||_n.
        """
        if self._kappa is None:
            self._kappa = np.asarray(self._coordinate_constants(), dtype=float)
        return self._kappa

    @abstractmethod
    def _coordinate_constants(self) -> np.ndarray:
        pass

    # Elements

    def zero(self, n: int = 1) -> LevelElement:
        return LevelElement.zeros(n, self.dim)

    def basis_element(self, s: int, n: int = 1) -> LevelElement:
        v = np.zeros(self.dim, dtype=np.complex128)
        v[s] = 1.0
        return LevelElement.from_scalar_grid(np.eye(n), v)

    def element(self, coords: Any) -> LevelElement:
        e = LevelElement(coords)
        self.check_element(e)
        return e

    def random_element(self, rng: np.random.Generator, n: int) -> LevelElement:
        return LevelElement(complex_gaussian(rng, (n, n, self.dim)))

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "dim": self.dim, "provenance": self.provenance}

    def same_space(self, other: "OSpace") -> bool:
        """The same object, or an equal presentation: realization bases if both have one, else the construction record"""
        if self is other:
            return True
        if self.dim != other.dim or self.kind != other.kind:
            return False
        mine, theirs = self.realization_basis, other.realization_basis
        if mine is not None and theirs is not None:
            return mine.shape == theirs.shape and bool(np.allclose(mine, theirs))
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name}, dim={self.dim})"


class ConcreteOS(OSpace):
    """
    Subspace of M_k spanned by linearly independent matrices
    """

    def __init__(
        self,
        ambient: int,
        basis: Sequence[Any],
        provenance: Optional[Dict[str, Any]] = None,
        budget: Optional[Budget] = None,
        tolerances: Optional[Tolerances] = None,
        kind: SpaceKind = SpaceKind.CONCRETE
    ):
        """
        Initialize concrete operator space

        Args:
            ambient: Size k of the ambient matrix algebra
            basis: Linearly independent k x k matrices
            provenance: Construction record
        """
        k = int(ambient)
        if k < 1:
            raise InvalidInputError("ambient dimension must be positive", {"ambient": k})
        mats = [as_cmat(b, "basis matrix") for b in basis]
        for b in mats:
            if b.shape != (k, k):
                raise ShapeMismatchError(
                    f"basis matrices must be {k} x {k}",
                    {"ambient": k, "shape": list(b.shape)}
                )
        super().__init__(len(mats), kind, provenance, budget, tolerances)
        self.condition = require_independent(mats)
        if self.condition > ILL_CONDITIONED:
            logger.warning(f"Basis of {self.name} is ill-conditioned (condition {self.condition:.3e})")
            self.provenance.setdefault("warnings", []).append("ill-conditioned basis")
        self._basis = np.stack(mats) if mats else np.zeros((0, k, k), dtype=np.complex128)
        self._k = k

    @property
    def realization_basis(self) -> np.ndarray:
        return self._basis

    @property
    def basis(self) -> List[CMat]:
        return [b for b in self._basis]

    def _norm(self, e: LevelElement) -> Interval:
        return Interval.exact(spectral_norm(self.realize(e)))

    def _coordinate_constants(self) -> np.ndarray:
        kappa = []
        for s in range(self.dim):
            w = np.zeros(self.dim, dtype=np.complex128)
            w[s] = 1.0
            kappa.append(functional_norm(self.basis, w, self.oracle_budget, self.tolerances).hi)
        return np.array(kappa)

    def matrix_of(self, coords: Any) -> CMat:
        """Matrix sum_s c_s b_s"""
        c = np.asarray(coords, dtype=np.complex128).ravel()
        return np.einsum("s,sab->ab", c, self._basis)

    def coordinates_of(self, matrix: Any, tol: float = 1e-9) -> np.ndarray:
        """
        Coordinates of a matrix lying in the span of the basis

        Raises:
            InvalidInputError: If the matrix is outside the span
        """
        m = as_cmat(matrix)
        if m.shape != (self._k, self._k):
            raise ShapeMismatchError("matrix does not fit the ambient algebra", {"shape": list(m.shape)})
        if self.dim == 0:
            c = np.zeros(0, dtype=np.complex128)
        else:
            c, *_ = np.linalg.lstsq(stack_vectorized(self.basis), m.ravel(), rcond=None)
        if np.linalg.norm(self.matrix_of(c) - m) > tol * max(1.0, np.linalg.norm(m)):
            raise InvalidInputError(f"matrix is not in {self.name}")
        return c

    def to_dict(self) -> Dict[str, Any]:
        data = super().to_dict()
        data["ambient"] = self._k
        data["basis"] = [matrix_to_literal(b) for b in self._basis]
        return data


class SubspaceOS(ConcreteOS):
    """Concrete subspace of a concrete space, remembering its embedding"""

    def __init__(self, parent: ConcreteOS, embedding: np.ndarray, provenance: Optional[Dict[str, Any]] = None):
        self.parent = parent
        self.embedding = embedding
        basis = [parent.matrix_of(embedding[:, r]) for r in range(embedding.shape[1])]
        super().__init__(
            parent.ambient, basis, provenance, parent.budget, parent.tolerances, kind=SpaceKind.SUBSPACE
        )


class RestrictedSpace(OSpace):
    """Subspace of an abstract space; norms are the parent's norms of embedded elements"""

    def __init__(self, parent: OSpace, embedding: np.ndarray, provenance: Optional[Dict[str, Any]] = None):
        super().__init__(embedding.shape[1], SpaceKind.SUBSPACE, provenance, parent.budget, parent.tolerances)
        self.parent = parent
        self.embedding = embedding

    def _norm(self, e: LevelElement) -> Interval:
        return self.parent.norm(e.apply(self.embedding))

    def _coordinate_constants(self) -> np.ndarray:
        left_inverse = np.linalg.pinv(self.embedding)
        return np.abs(left_inverse) @ self.parent.coordinate_constants()


class AmplifiedSpace(OSpace):
    """
    M_n(X) as an operator space: level m norms are level mn norms of X

    Coordinates are indexed (i, j, s) row-major, so coordinate (i*n + j)*d + s
    holds x_ij^s.
    """

    def __init__(self, base: OSpace, n: int):
        super().__init__(
            n * n * base.dim, SpaceKind.AMPLIFIED,
            {"name": f"M_{n}({base.name})", "of": base.provenance, "n": n},
            base.budget, base.tolerances
        )
        self.base = base
        self.n = n

    def unfold(self, e: LevelElement) -> LevelElement:
        """Element of M_m(M_n(X)) as an element of M_mn(X)"""
        m, n, d = e.level, self.n, self.base.dim
        grid = e.coords.reshape(m, m, n, n, d).transpose(0, 2, 1, 3, 4).reshape(m * n, m * n, d)
        return LevelElement(grid)

    def fold(self, x: LevelElement) -> LevelElement:
        """Element of M_n(X) as a level-1 element of M_n(X)"""
        if x.level != self.n:
            raise ShapeMismatchError("element level differs from the amplification", {"level": x.level, "n": self.n})
        return LevelElement.from_vector(x.coords.reshape(-1))

    def _norm(self, e: LevelElement) -> Interval:
        return self.base.norm(self.unfold(e))

    def _coordinate_constants(self) -> np.ndarray:
        # |x_ij^s| <= kappa_s ||x_ij|| <= kappa_s ||x||_n
        return np.tile(self.base.coordinate_constants(), self.n * self.n)


def make_concrete(
    ambient: int,
    basis: Sequence[Any],
    name: Optional[str] = None,
    budget: Optional[Budget] = None,
    tolerances: Optional[Tolerances] = None
) -> ConcreteOS:
    """
    Concrete operator space spanned by basis matrices in M_k

    Args:
        ambient: k
        basis: Linearly independent k x k matrices
        name: Optional display name

    Returns:
        ConcreteOS with exact norm oracle
    """
    provenance = {"name": name} if name else {}
    return ConcreteOS(ambient, basis, provenance, budget, tolerances)


def matrix_algebra(n: int, budget: Optional[Budget] = None, tolerances: Optional[Tolerances] = None) -> ConcreteOS:
    """M_n with the matrix units e_ij as basis (coordinate i*n + j)"""
    basis = [matrix_unit(n, i, j) for i in range(n) for j in range(n)]
    return ConcreteOS(n, basis, {"name": f"M_{n}"}, budget, tolerances)


def scalars(budget: Optional[Budget] = None, tolerances: Optional[Tolerances] = None) -> ConcreteOS:
    return ConcreteOS(1, [np.eye(1)], {"name": "C"}, budget, tolerances)


def zero_space(budget: Optional[Budget] = None, tolerances: Optional[Tolerances] = None) -> ConcreteOS:
    return ConcreteOS(1, [], {"name": "0"}, budget, tolerances)


def random_concrete(
    rng: np.random.Generator,
    ambient: int,
    dim: int,
    name: Optional[str] = None,
    budget: Optional[Budget] = None,
    tolerances: Optional[Tolerances] = None
) -> ConcreteOS:
    """Span of dim complex Gaussian k x k matrices (independent almost surely)"""
    if dim > ambient * ambient:
        raise InvalidInputError("dimension exceeds that of the ambient algebra", {"ambient": ambient, "dim": dim})
    basis = [complex_gaussian(rng, (ambient, ambient)) for _ in range(dim)]
    provenance = {"name": name or f"rand({ambient},{dim})"}
    return ConcreteOS(ambient, basis, provenance, budget, tolerances)


def level_norm(X: OSpace, e: LevelElement) -> Interval:
    """Level-n norm of e in X"""
    return X.norm(e)


def _embedding_matrix(X: OSpace, vectors: Any) -> np.ndarray:
    arr = np.asarray(vectors, dtype=np.complex128)
    if arr.size == 0:
        return np.zeros((X.dim, 0), dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != X.dim:
        raise ShapeMismatchError(
            f"coordinate vectors must have length {X.dim}",
            {"shape": list(arr.shape)}
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("coordinate vectors have non-finite entries", code=ErrorCode.NON_FINITE_ENTRIES)
    return arr.T.copy()


def subspace(X: OSpace, vectors: Any, name: Optional[str] = None) -> OSpace:
    """
    Subspace of X spanned by coordinate vectors

    Args:
        X: Ambient operator space
        vectors: Sequence of coordinate vectors of X (rows)
        name: Optional display name

    Returns:
        SubspaceOS for concrete X (concrete basis sum_s v_s b_s), otherwise a
        RestrictedSpace. The inclusion is a complete isometry by construction.
    """
    embedding = _embedding_matrix(X, vectors)
    if embedding.shape[1]:
        require_independent([embedding[:, r:r + 1] for r in range(embedding.shape[1])], "subspace vectors")
    provenance = {"name": name or f"sub({X.name})", "of": X.provenance, "rank": embedding.shape[1]}
    if isinstance(X, ConcreteOS):
        return SubspaceOS(X, embedding, provenance)
    return RestrictedSpace(X, embedding, provenance)


@dataclass
class RuanReport:
    """Outcome of the randomized Ruan axiom check"""
    space: str
    n_max: int
    trials: int
    seed: int
    max_m1_violation: float = 0.0
    max_m2_violation: float = 0.0
    max_corner_violation: float = 0.0
    max_entrywise_violation: float = 0.0
    m1_witness: Optional[Dict[str, Any]] = None
    m2_witness: Optional[Dict[str, Any]] = None

    @property
    def max_violation(self) -> float:
        return max(self.max_m1_violation, self.max_m2_violation, self.max_corner_violation, self.max_entrywise_violation)

    def passed(self, tol: float = 1e-8) -> bool:
        return self.max_violation <= tol

    def to_dict(self) -> Dict[str, Any]:
        return {
            "space": self.space,
            "n_max": self.n_max,
            "trials": self.trials,
            "seed": self.seed,
            "max_m1_violation": self.max_m1_violation,
            "max_m2_violation": self.max_m2_violation,
            "max_corner_violation": self.max_corner_violation,
            "max_entrywise_violation": self.max_entrywise_violation,
            "m1_witness": self.m1_witness,
            "m2_witness": self.m2_witness,
        }


def check_ruan(X: OSpace, n_max: int = 3, trials: int = 200, seed: int = 0) -> RuanReport:
    """
    Randomized check of Ruan's axioms

    M1: ||x (+) y||_{m+n} = max(||x||_m, ||y||_n) for m + n <= n_max.
    M2: ||alpha x beta||_m <= ||alpha|| ||x||_n ||beta|| for m, n <= n_max.
    Violations are measured between intervals, so interval slack never counts.

    Args:
        X: Space under test
        n_max: Highest level probed (>= 2)
        trials: Number of random probes
        seed: Probe seed

    Returns:
        RuanReport with the largest violations and their witnesses
    """
    if n_max < 2:
        raise InvalidInputError("check_ruan needs n_max >= 2", {"n_max": n_max})

    report = RuanReport(space=X.name, n_max=n_max, trials=trials, seed=seed)
    pairs = [(m, n) for m in range(1, n_max) for n in range(1, n_max) if m + n <= n_max]

    for t in range(trials):
        rng = restart_rng(seed, (n_max, 1), t)

        m, n = pairs[t % len(pairs)]
        x, y = X.random_element(rng, m), X.random_element(rng, n)
        joint = X.norm(x.direct_sum(y))
        blocks = Interval.max_of([X.norm(x), X.norm(y)])
        violation = joint.gap(blocks)
        if violation > report.max_m1_violation:
            report.max_m1_violation = violation
            report.m1_witness = {"x": x.to_dict(), "y": y.to_dict(), "joint": joint.to_dict(), "blocks": blocks.to_dict()}

        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(1, n_max + 1))
        x = X.random_element(rng, n)
        alpha = complex_gaussian(rng, (m, n))
        beta = complex_gaussian(rng, (n, m))
        lhs = X.norm(x.sandwich(alpha, beta))
        rhs = spectral_norm(alpha) * X.norm(x).hi * spectral_norm(beta)
        violation = max(0.0, lhs.lo - rhs)
        if violation > report.max_m2_violation:
            report.max_m2_violation = violation
            report.m2_witness = {"x": x.to_dict(), "alpha": matrix_to_literal(alpha), "beta": matrix_to_literal(beta)}

        if n >= 2:
            full = X.norm(x)
            corner = X.norm(x.corner(range(n - 1)))
            report.max_corner_violation = max(report.max_corner_violation, corner.lo - full.hi, 0.0)
            entries = [X.norm(x.entry(i, j)) for i in range(n) for j in range(n)]
            upper = sum(en.hi for en in entries)
            lower = max(en.lo for en in entries)
            report.max_entrywise_violation = max(
                report.max_entrywise_violation, full.lo - upper, lower - full.hi, 0.0
            )

    if not report.passed(X.tolerances.report):
        logger.warning(f"Ruan check on {X.name} found violation {report.max_violation:.3e}")
    return report
