"""Chain diagrams and their colimits"""

from .chain import (
    ChainDiagram,
    ColimitElement,
    ColimitNorm,
    amplified_chain,
    colimit_norm,
    decaying_target,
    essential_uniqueness_probe,
    explicit_chain,
    factorization_probe,
    same_class,
    scalar_exp_chain,
    truncation_chain,
)

__all__ = [
    "ChainDiagram",
    "ColimitElement",
    "ColimitNorm",
    "amplified_chain",
    "colimit_norm",
    "decaying_target",
    "essential_uniqueness_probe",
    "explicit_chain",
    "factorization_probe",
    "same_class",
    "scalar_exp_chain",
    "truncation_chain",
]
