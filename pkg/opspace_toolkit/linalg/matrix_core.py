"""
Matrix Core
Dense complex matrices, certified intervals and the base norms
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterable, List, Sequence

import numpy as np
import scipy.linalg

from ..core.config import DEFAULT_TOLERANCES
from ..core.error_codes import ErrorCode, InvalidInputError, ParseError, ShapeMismatchError

CMat = np.ndarray

EXACTNESS_TOLERANCE = DEFAULT_TOLERANCES.exactness


class IntervalStatus(str, Enum):
    """Whether an interval pins a value down to working precision"""
    EXACT = "exact"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class Interval:
    """Certified enclosure [lo, hi] of a nonnegative quantity"""
    lo: float
    hi: float
    status: IntervalStatus = IntervalStatus.APPROXIMATE

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if np.isnan(lo) or np.isnan(hi):
            raise InvalidInputError("Interval bounds must not be NaN", {"lo": lo, "hi": hi})
        # rounding can push a tight lower bound a few ulps past the upper one
        if lo > hi:
            if lo - hi > 1e-9 * max(1.0, abs(hi)):
                raise InvalidInputError("Interval lower bound exceeds upper bound", {"lo": lo, "hi": hi})
            lo = hi
        lo = max(lo, 0.0)
        hi = max(hi, lo)
        status = IntervalStatus(self.status)
        if status == IntervalStatus.EXACT and hi - lo > EXACTNESS_TOLERANCE * max(1.0, hi):
            status = IntervalStatus.APPROXIMATE
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "status", status)

    @classmethod
    def exact(cls, value: float) -> "Interval":
        value = float(value)
        return cls(value, value, IntervalStatus.EXACT)

    @classmethod
    def bounds(cls, lo: float, hi: float, exactness: float = EXACTNESS_TOLERANCE) -> "Interval":
        """Interval whose status follows from its width"""
        lo, hi = float(lo), float(hi)
        status = IntervalStatus.EXACT if hi - lo <= exactness * max(1.0, abs(hi)) else IntervalStatus.APPROXIMATE
        return cls(lo, hi, status)

    @classmethod
    def zero(cls) -> "Interval":
        return cls.exact(0.0)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def is_exact(self) -> bool:
        return self.status == IntervalStatus.EXACT

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lo - slack <= value <= self.hi + slack

    def overlaps(self, other: "Interval", slack: float = 0.0) -> bool:
        return self.lo <= other.hi + slack and other.lo <= self.hi + slack

    def gap(self, other: "Interval") -> float:
        """Distance between the two intervals (0 when they overlap)"""
        return max(0.0, self.lo - other.hi, other.lo - self.hi)

    def scale(self, factor: float) -> "Interval":
        factor = abs(float(factor))
        return Interval(self.lo * factor, self.hi * factor, self.status)

    def widen(self, amount: float) -> "Interval":
        return Interval(max(0.0, self.lo - amount), self.hi + amount, IntervalStatus.APPROXIMATE)

    def intersect(self, other: "Interval") -> "Interval":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            # both enclose the same value, so only rounding can separate them
            lo = hi = 0.5 * (lo + hi)
        return Interval.bounds(lo, hi)

    @staticmethod
    def max_of(intervals: Iterable["Interval"]) -> "Interval":
        """Enclosure of max over values enclosed by each interval"""
        items = list(intervals)
        if not items:
            return Interval.zero()
        lo = max(i.lo for i in items)
        hi = max(i.hi for i in items)
        status = IntervalStatus.EXACT if all(i.is_exact for i in items) else IntervalStatus.APPROXIMATE
        return Interval(lo, hi, status)

    @staticmethod
    def sum_of(intervals: Iterable["Interval"]) -> "Interval":
        items = list(intervals)
        if not items:
            return Interval.zero()
        status = IntervalStatus.EXACT if all(i.is_exact for i in items) else IntervalStatus.APPROXIMATE
        return Interval(sum(i.lo for i in items), sum(i.hi for i in items), status)

    def to_dict(self) -> Dict[str, Any]:
        return {"lo": self.lo, "hi": self.hi, "status": self.status.value}


def as_cmat(a: Any, name: str = "matrix") -> CMat:
    """
    Coerce to a finite 2-D complex128 array

    Args:
        a: Array-like input
        name: Name used in error messages

    Returns:
        Complex matrix
    """
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise ShapeMismatchError(f"{name} must be two-dimensional", {"ndim": int(arr.ndim)})
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(
            f"{name} has non-finite entries",
            {"shape": list(arr.shape)},
            code=ErrorCode.NON_FINITE_ENTRIES
        )
    return arr


def identity(n: int) -> CMat:
    return np.eye(n, dtype=np.complex128)


def matrix_unit(n: int, i: int, j: int) -> CMat:
    """e_ij in M_n"""
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def singular_values(a: CMat) -> np.ndarray:
    if a.size == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def spectral_norm(a: Any) -> float:
    """
    Largest singular value

    Args:
        a: Complex matrix with finite entries

    Returns:
        Operator norm of a
    """
    a = as_cmat(a)
    if a.size == 0:
        return 0.0
    return float(singular_values(a)[0])


def trace_norm(a: Any) -> float:
    """Sum of singular values of a square matrix"""
    a = as_cmat(a)
    if a.shape[0] != a.shape[1]:
        raise InvalidInputError("trace_norm needs a square matrix", {"shape": list(a.shape)})
    return float(np.sum(singular_values(a)))


def kron(a: Any, b: Any) -> CMat:
    """Kronecker product with rows indexed (i,k) and columns (j,l)"""
    return np.kron(as_cmat(a), as_cmat(b))


def direct_sum(a: Any, b: Any) -> CMat:
    """Block-diagonal matrix diag(a, b)"""
    return scipy.linalg.block_diag(as_cmat(a), as_cmat(b)).astype(np.complex128)


def sandwich(alpha: Any, x: Any, beta: Any) -> CMat:
    """The product alpha @ x @ beta"""
    alpha, x, beta = as_cmat(alpha, "alpha"), as_cmat(x, "x"), as_cmat(beta, "beta")
    if alpha.shape[1] != x.shape[0] or x.shape[1] != beta.shape[0]:
        raise InvalidInputError(
            "sandwich dimensions do not compose",
            {"alpha": list(alpha.shape), "x": list(x.shape), "beta": list(beta.shape)}
        )
    return alpha @ x @ beta


def polar_factor(c: CMat) -> CMat:
    """Partial isometry U V* from the SVD of c (maximizes Re tr(W* c) over contractions W)"""
    u, _, vh = np.linalg.svd(c, full_matrices=False)
    return u @ vh


def top_singular_pair(a: CMat):
    """Leading singular value with its left and right singular vectors"""
    u, s, vh = np.linalg.svd(a)
    return float(s[0]), u[:, 0], vh[0, :].conj()


def numerical_rank(vectors: CMat, rtol: float = 1e-10) -> int:
    """Rank of the columns of a matrix relative to its largest singular value"""
    if vectors.size == 0:
        return 0
    s = singular_values(vectors)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def stack_vectorized(mats: Sequence[CMat]) -> CMat:
    """Columns are the row-major vectorizations of the given matrices"""
    if len(mats) == 0:
        return np.zeros((0, 0), dtype=np.complex128)
    return np.stack([np.asarray(m, dtype=np.complex128).ravel() for m in mats], axis=1)


def require_independent(mats: Sequence[CMat], name: str = "basis") -> float:
    """
    Check linear independence of a family of matrices

    Returns:
        Condition number of the family (1.0 for an empty family)

    Raises:
        InvalidInputError: when the family is dependent
    """
    if len(mats) == 0:
        return 1.0
    cols = stack_vectorized(mats)
    s = singular_values(cols)
    if s[0] == 0.0 or numerical_rank(cols) < len(mats):
        raise InvalidInputError(
            f"{name} is linearly dependent",
            {"size": len(mats), "rank": numerical_rank(cols)},
            code=ErrorCode.DEPENDENT_BASIS
        )
    return float(s[0] / s[-1])


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_contraction(rng: np.random.Generator, rows: int, cols: int) -> CMat:
    """Random matrix of operator norm one"""
    g = complex_gaussian(rng, (rows, cols))
    norm = spectral_norm(g)
    return g / norm if norm > 0 else g


# Matrix literal format: array of arrays of [re, im] pairs

def parse_scalar(value: Any) -> complex:
    if isinstance(value, bool):
        raise ParseError("Booleans are not matrix entries", {"value": value})
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return complex(float(value[0]), float(value[1]))
    raise ParseError("Matrix entries must be numbers or [re, im] pairs", {"value": repr(value)[:80]})


def matrix_from_literal(literal: Any) -> CMat:
    """
    Parse a JSON matrix literal

    Args:
        literal: list of rows, each a list of [re, im] pairs or reals

    Returns:
        Complex matrix
    """
    if not isinstance(literal, list) or not literal or not all(isinstance(r, list) for r in literal):
        raise ParseError("Matrix literal must be a non-empty list of rows")
    width = len(literal[0])
    if width == 0 or any(len(r) != width for r in literal):
        raise ParseError("Matrix literal rows must be non-empty and of equal length")
    arr = np.array([[parse_scalar(v) for v in row] for row in literal], dtype=np.complex128)
    return as_cmat(arr)


def scalar_to_literal(z: complex) -> List[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def matrix_to_literal(a: Any) -> List[List[List[float]]]:
    a = np.asarray(a, dtype=np.complex128)
    return [[scalar_to_literal(v) for v in row] for row in a]


