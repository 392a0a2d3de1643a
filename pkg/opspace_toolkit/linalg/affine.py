"""
Affine Norm Minimization
Spectral and trace norm minimization over affine matrix subspaces

The upper end of every returned interval is the norm of an explicit feasible
matrix. The lower end comes from a dual certificate: a matrix Z orthogonal to
the basis gives ``|tr(Z* target)| / ||Z||_dual`` by weak duality.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
import scipy.optimize
from loguru import logger

from ..core.config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from ..core.error_codes import ShapeMismatchError
from ..utils.parallel import RestartExecutor
from .matrix_core import (
    CMat,
    Interval,
    as_cmat,
    complex_gaussian,
    matrix_to_literal,
    require_independent,
    singular_values,
    stack_vectorized,
)

AFFINE_RESTARTS = 3
SMOOTHING_STAGES = 7
SMOOTHING_DECAY = 0.05
CERTIFICATE_THRESHOLDS = (1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 5e-2)
MAX_CLUSTER = 12


class NormKind(str, Enum):
    """Norm being minimized"""
    SPECTRAL = "spectral"
    TRACE = "trace"


@dataclass
class AffineMinimum:
    """Result of an affine norm minimization"""
    interval: Interval
    coefficients: np.ndarray
    minimizer: CMat
    certificate: Optional[CMat] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "interval": self.interval.to_dict(),
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "minimizer": matrix_to_literal(self.minimizer),
        }


def _hermitian_basis(r: int) -> List[CMat]:
    mats = []
    for k in range(r):
        e = np.zeros((r, r), dtype=np.complex128)
        e[k, k] = 1.0
        mats.append(e)
    for k in range(r):
        for l in range(k + 1, r):
            e = np.zeros((r, r), dtype=np.complex128)
            e[k, l] = e[l, k] = 1.0
            mats.append(e)
            e = np.zeros((r, r), dtype=np.complex128)
            e[k, l], e[l, k] = 1j, -1j
            mats.append(e)
    return mats


class AffineNormMinimizer:
    """
    Minimizes a unitarily invariant norm over target + span(basis)
    """

    def __init__(
        self,
        kind: NormKind = NormKind.SPECTRAL,
        budget: Budget = DEFAULT_BUDGET,
        tolerances: Tolerances = DEFAULT_TOLERANCES
    ):
        """
        Initialize minimizer

        Args:
            kind: Norm to minimize
            budget: Restart/iteration budget and seed
            tolerances: Exactness and verdict tolerances
        """
        self.kind = NormKind(kind)
        self.budget = budget
        self.tolerances = tolerances
        self.executor = RestartExecutor(budget.max_workers)

    # Norm evaluations

    def _value(self, m: CMat) -> float:
        s = singular_values(m)
        if s.size == 0:
            return 0.0
        return float(s[0]) if self.kind == NormKind.SPECTRAL else float(np.sum(s))

    def _subgradient(self, m: CMat) -> CMat:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        if self.kind == NormKind.SPECTRAL:
            return np.outer(u[:, 0], vh[0, :])
        keep = s > 1e-14 * max(s[0], 1e-300)
        return u[:, keep] @ vh[keep, :]

    def _smoothed(self, m: CMat, mu: float) -> Tuple[float, CMat]:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        if self.kind == NormKind.TRACE:
            root = np.sqrt(s ** 2 + mu ** 2)
            return float(np.sum(root)), (u * (s / root)) @ vh

        # log-sum-exp over the eigenvalues +-s of the Hermitian dilation
        top = s[0]
        extra = abs(m.shape[0] - m.shape[1])
        plus = np.exp((s - top) / mu)
        minus = np.exp((-s - top) / mu)
        total = np.sum(plus) + np.sum(minus) + extra * np.exp(-top / mu)
        value = top + mu * np.log(total)
        weights = (plus - minus) / total
        return float(value), (u * weights) @ vh

    # Dual certificates

    def _project_out(self, z: CMat, q: CMat) -> CMat:
        flat = z.ravel()
        return (flat - q @ (q.conj().T @ flat)).reshape(z.shape)

    def _spectral_certificate(self, target: CMat, q: CMat, m: CMat) -> Tuple[float, Optional[CMat]]:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
        if s.size == 0 or s[0] == 0.0:
            return 0.0, None
        ranks = sorted({min(int(np.sum(s >= s[0] * (1.0 - t))), MAX_CLUSTER) for t in CERTIFICATE_THRESHOLDS})
        best, best_z = 0.0, None
        qh = q.conj().T
        for r in ranks:
            ur, vr = u[:, :r], vh[:r, :].conj().T
            candidates = []

            herm = _hermitian_basis(r)
            cols = np.stack([qh @ (ur @ h @ vr.conj().T).ravel() for h in herm], axis=1)
            a = np.vstack([cols.real, cols.imag, np.array([[np.trace(h).real for h in herm]])])
            b = np.zeros(a.shape[0])
            b[-1] = 1.0
            w, *_ = np.linalg.lstsq(a, b, rcond=None)
            wmat = sum(wk * h for wk, h in zip(w, herm))
            evals, evecs = np.linalg.eigh(0.5 * (wmat + wmat.conj().T))
            evals = np.clip(evals, 0.0, None)
            if evals.sum() > 0:
                candidates.append((evecs * (evals / evals.sum())) @ evecs.conj().T)

            rank_one = np.stack([qh @ np.outer(ur[:, i], vr[:, i].conj()).ravel() for i in range(r)], axis=1)
            lam = 1e3
            a = np.vstack([rank_one.real, rank_one.imag, lam * np.ones((1, r))])
            b = np.zeros(a.shape[0])
            b[-1] = lam
            weights, _ = scipy.optimize.nnls(a, b)
            if weights.sum() > 0:
                candidates.append(np.diag(weights / weights.sum()).astype(np.complex128))

            for wmat in candidates:
                z = self._project_out(ur @ wmat @ vr.conj().T, q)
                dual_norm = float(np.sum(singular_values(z)))
                if dual_norm <= 0.0:
                    continue
                value = abs(np.vdot(z.ravel(), target.ravel())) / dual_norm
                if value > best:
                    best, best_z = value, z
        return float(best), best_z

    def _trace_certificate(self, target: CMat, q: CMat, m: CMat) -> Tuple[float, Optional[CMat]]:
        u, s, vh = np.linalg.svd(m, full_matrices=True)
        if s.size == 0 or s[0] == 0.0:
            return 0.0, None
        qh = q.conj().T
        best, best_z = 0.0, None
        ranks = sorted({int(np.sum(s > t * s[0])) for t in CERTIFICATE_THRESHOLDS})
        for r in ranks:
            w0 = u[:, :r] @ vh[:r, :]
            candidates = [w0]
            u_perp, v_perp = u[:, r:], vh[r:, :].conj().T
            if u_perp.shape[1] and v_perp.shape[1]:
                cols = [
                    qh @ np.outer(u_perp[:, a], v_perp[:, b].conj()).ravel()
                    for a in range(u_perp.shape[1]) for b in range(v_perp.shape[1])
                ]
                k, *_ = np.linalg.lstsq(np.stack(cols, axis=1), -(qh @ w0.ravel()), rcond=None)
                k = k.reshape(u_perp.shape[1], v_perp.shape[1])
                k_norm = float(singular_values(k)[0]) if k.size else 0.0
                if k_norm > 1.0:
                    k = k / k_norm
                candidates.append(w0 + u_perp @ k @ v_perp.conj().T)
            for w in candidates:
                z = self._project_out(w, q)
                dual_norm = float(singular_values(z)[0])
                if dual_norm <= 0.0:
                    continue
                value = abs(np.vdot(z.ravel(), target.ravel())) / dual_norm
                if value > best:
                    best, best_z = value, z
        return float(best), best_z

    def _certificate(self, target: CMat, q: CMat, m: CMat) -> Tuple[float, Optional[CMat]]:
        if self.kind == NormKind.SPECTRAL:
            return self._spectral_certificate(target, q, m)
        return self._trace_certificate(target, q, m)

    # Primal search

    def _matrix(self, target: CMat, q: CMat, c: np.ndarray) -> CMat:
        return target + (q @ c).reshape(target.shape)

    def _descend(self, target: CMat, q: CMat, start: np.ndarray, scale: float) -> Tuple[float, np.ndarray]:
        dim = start.size
        qh = q.conj().T

        def objective(z: np.ndarray, mu: float):
            c = z[:dim] + 1j * z[dim:]
            value, grad = self._smoothed(self._matrix(target, q, c), mu)
            g = qh @ grad.ravel()
            return value, np.concatenate([g.real, g.imag])

        z = np.concatenate([start.real, start.imag])
        mu = 0.1 * scale
        for _ in range(SMOOTHING_STAGES):
            result = scipy.optimize.minimize(
                objective, z, args=(mu,), jac=True, method="L-BFGS-B",
                options={"maxiter": self.budget.iterations, "gtol": 1e-15, "ftol": 1e-15}
            )
            z = result.x
            mu *= SMOOTHING_DECAY
        c = z[:dim] + 1j * z[dim:]
        return self._value(self._matrix(target, q, c)), c

    def _polyak(self, target: CMat, q: CMat, c: np.ndarray, lower: float) -> Tuple[float, np.ndarray]:
        qh = q.conj().T
        best_c = c
        best_f = self._value(self._matrix(target, q, c))
        for _ in range(self.budget.iterations):
            m = self._matrix(target, q, c)
            f = self._value(m)
            if f < best_f:
                best_f, best_c = f, c
            gap = best_f - lower
            if gap <= self.tolerances.exactness * max(1.0, best_f):
                break
            g = qh @ self._subgradient(m).ravel()
            g_norm2 = float(np.vdot(g, g).real)
            if g_norm2 <= 1e-30:
                break
            level = lower + 0.5 * gap
            c = c - ((f - level) / g_norm2) * g
        return best_f, best_c

    def _pattern_polish(self, target: CMat, q: CMat, c: np.ndarray, scale: float) -> Tuple[float, np.ndarray]:
        """Coordinate grid search with shrinking step"""
        dim = c.size
        best_f = self._value(self._matrix(target, q, c))
        step = 1e-3 * scale
        evaluations = 0
        limit = 20 * self.budget.iterations
        while step > 1e-13 * scale and evaluations < limit:
            improved = False
            for k in range(2 * dim):
                direction = np.zeros(dim, dtype=np.complex128)
                direction[k % dim] = 1.0 if k < dim else 1j
                for sign in (1.0, -1.0):
                    trial = c + sign * step * direction
                    f = self._value(self._matrix(target, q, trial))
                    evaluations += 1
                    if f < best_f:
                        best_f, c, improved = f, trial, True
                        break
            if not improved:
                step *= 0.25
        return best_f, c

    def minimize(self, target: Any, basis: Sequence[Any]) -> AffineMinimum:
        """
        Minimize the norm of target + sum_s c_s basis_s

        Args:
            target: Target matrix
            basis: Linearly independent matrices of the target's shape

        Returns:
            AffineMinimum with a certified interval
        """
        target = as_cmat(target, "target")
        mats = [as_cmat(b, "basis matrix") for b in basis]
        for b in mats:
            if b.shape != target.shape:
                raise ShapeMismatchError(
                    "basis matrices must have the target's shape",
                    {"target": list(target.shape), "basis": list(b.shape)}
                )

        if not mats:
            return AffineMinimum(Interval.exact(self._value(target)), np.zeros(0, dtype=np.complex128), target)

        require_independent(mats)
        cols = stack_vectorized(mats)
        q, r = np.linalg.qr(cols)
        dim = q.shape[1]
        scale = max(float(np.linalg.norm(target)), 1e-12)

        c0 = -(q.conj().T @ target.ravel())
        if self._value(self._matrix(target, q, c0)) <= 1e-15 * scale:
            m = self._matrix(target, q, c0)
            return AffineMinimum(
                Interval.bounds(0.0, self._value(m), self.tolerances.exactness),
                np.linalg.solve(r, c0), m
            )

        def restart(rng: np.random.Generator, index: int):
            start = c0 if index == 0 else c0 + (scale / np.sqrt(dim)) * complex_gaussian(rng, dim)
            return self._descend(target, q, start, scale)

        restarts = max(1, min(self.budget.restarts, AFFINE_RESTARTS))
        results = self.executor.run(restart, restarts, self.budget.seed, tag=(7 if self.kind == NormKind.SPECTRAL else 11, dim))
        best_f, best_c = min(results, key=lambda item: item[0])

        lower, _ = self._certificate(target, q, self._matrix(target, q, best_c))
        best_f, best_c = self._polyak(target, q, best_c, lower)
        best_f, best_c = self._pattern_polish(target, q, best_c, scale)

        minimizer = self._matrix(target, q, best_c)
        lower, certificate = self._certificate(target, q, minimizer)
        interval = Interval.bounds(min(lower, best_f), best_f, self.tolerances.exactness)

        if interval.width > self.tolerances.verdict * max(1.0, interval.hi):
            logger.debug(
                f"{self.kind.value} affine minimum gap {interval.width:.3e} "
                f"(lo={interval.lo:.12g}, hi={interval.hi:.12g}, basis={dim})"
            )

        return AffineMinimum(interval, np.linalg.solve(r, best_c), minimizer, certificate)


def min_spectral_over_affine(
    target: Any,
    basis: Sequence[Any],
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Interval:
    """
    Certified interval around inf_c ||target + sum_s c_s basis_s||

    Args:
        target: Target matrix
        basis: Linearly independent matrices of the same shape
        budget: Search budget
        tolerances: Tolerances

    Returns:
        Interval [dual certificate, best feasible value]
    """
    return AffineNormMinimizer(NormKind.SPECTRAL, budget, tolerances).minimize(target, basis).interval


def min_trace_over_affine(
    target: Any,
    basis: Sequence[Any],
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Interval:
    """Certified interval around inf_c ||target + sum_s c_s basis_s||_1"""
    return AffineNormMinimizer(NormKind.TRACE, budget, tolerances).minimize(target, basis).interval


def functional_norm(
    basis: Sequence[Any],
    weights: Any,
    budget: Budget = DEFAULT_BUDGET,
    tolerances: Tolerances = DEFAULT_TOLERANCES
) -> Interval:
    """
    Norm of the functional b_s -> weights[s] on span(basis) inside M_k

    The functional extends to M_k as A -> sum Z_ab A_ab; the norm of such an
    extension is ||Z||_1 and the smallest extension has the functional's norm.

    Args:
        basis: Linearly independent k x k matrices
        weights: Values of the functional on the basis
        budget: Search budget
        tolerances: Tolerances

    Returns:
        Interval enclosing the functional norm
    """
    w = np.asarray(weights, dtype=np.complex128).ravel()
    mats = [as_cmat(b, "basis matrix") for b in basis]
    if not mats or not np.any(w):
        return Interval.zero()
    if len(w) != len(mats):
        raise ShapeMismatchError("one weight per basis matrix is required", {"weights": len(w), "basis": len(mats)})

    shape = mats[0].shape
    rows = np.stack([b.ravel() for b in mats], axis=0)
    particular = (np.linalg.pinv(rows) @ w).reshape(shape)
    null = scipy.linalg.null_space(rows)
    directions = [null[:, r].reshape(shape) for r in range(null.shape[1])]
    return min_trace_over_affine(particular, directions, budget, tolerances)
