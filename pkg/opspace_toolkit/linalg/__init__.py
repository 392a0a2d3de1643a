"""Linear algebra kernels: dense complex matrices, intervals and affine norm minimization"""

from .matrix_core import (
    CMat,
    Interval,
    IntervalStatus,
    as_cmat,
    direct_sum,
    kron,
    sandwich,
    spectral_norm,
    trace_norm,
)
from .affine import (
    AffineMinimum,
    AffineNormMinimizer,
    NormKind,
    functional_norm,
    min_spectral_over_affine,
    min_trace_over_affine,
)

__all__ = [
    "CMat",
    "Interval",
    "IntervalStatus",
    "as_cmat",
    "direct_sum",
    "kron",
    "sandwich",
    "spectral_norm",
    "trace_norm",
    "AffineMinimum",
    "AffineNormMinimizer",
    "NormKind",
    "functional_norm",
    "min_spectral_over_affine",
    "min_trace_over_affine",
]
