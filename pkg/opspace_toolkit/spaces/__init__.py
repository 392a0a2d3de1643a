"""Operator spaces, completely bounded maps and their constructions"""

from .ospace import (
    AmplifiedSpace,
    ConcreteOS,
    LevelElement,
    OSpace,
    RuanReport,
    SpaceKind,
    check_ruan,
    level_norm,
    make_concrete,
    matrix_algebra,
    random_concrete,
    scalars,
    subspace,
    zero_space,
)
from .maps import (
    MapNormEstimate,
    MapNormEstimator,
    OSMap,
    Verdict,
    VerdictStatus,
    Witness,
    cb_norm,
    fiber_minimum,
    identity_map,
    is_complete_contraction,
    is_complete_isometry,
    is_complete_quotient,
    op_norm_at_level,
    zero_map,
)
from .constructions import (
    ConeReport,
    canonical_factor,
    coequaliser,
    coproduct,
    dual,
    equaliser,
    is_epi,
    is_mono,
    is_strong_epi,
    is_strong_mono,
    kernel_pair,
    min_quantization,
    product,
    quotient,
    verify_universal,
)
from .tensor import (
    BilinMap,
    TensorSpace,
    jcb_norm,
    linearize,
    proj_tensor,
    structure_maps,
    tensor_maps,
)
from .trace_class import generator_witness, lemma_contraction, make_Tn, separating_witness

__all__ = [
    "AmplifiedSpace",
    "ConcreteOS",
    "LevelElement",
    "OSpace",
    "RuanReport",
    "SpaceKind",
    "check_ruan",
    "level_norm",
    "make_concrete",
    "matrix_algebra",
    "random_concrete",
    "scalars",
    "subspace",
    "zero_space",
    "MapNormEstimate",
    "MapNormEstimator",
    "OSMap",
    "Verdict",
    "VerdictStatus",
    "Witness",
    "cb_norm",
    "fiber_minimum",
    "identity_map",
    "is_complete_contraction",
    "is_complete_isometry",
    "is_complete_quotient",
    "op_norm_at_level",
    "zero_map",
    "ConeReport",
    "canonical_factor",
    "coequaliser",
    "coproduct",
    "dual",
    "equaliser",
    "is_epi",
    "is_mono",
    "is_strong_epi",
    "is_strong_mono",
    "kernel_pair",
    "min_quantization",
    "product",
    "quotient",
    "verify_universal",
    "BilinMap",
    "TensorSpace",
    "jcb_norm",
    "linearize",
    "proj_tensor",
    "structure_maps",
    "tensor_maps",
    "generator_witness",
    "lemma_contraction",
    "make_Tn",
    "separating_witness",
]
