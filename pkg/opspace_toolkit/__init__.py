"""
Operator Space Toolkit
Main package initialization
"""

from .core.toolkit import OpSpaceToolkit
from .core.config import Config, Budget, Tolerances
from .core.error_codes import (
    OpSpaceError,
    ErrorCode,
    ErrorSeverity,
    ConfigurationError,
    InvalidInputError,
    UnsupportedInputError,
    ShapeMismatchError,
    ParseError,
    UnknownSuiteError,
    EmptyInputError
)
from .core.loader import SpecLoader
from .core.validation import (
    SpaceSpec,
    ElementSpec,
    MapSpec,
    ChainSpec,
    CoalgebraSpec,
    SuiteInputSpec,
    RunConfig,
    validate_document
)
from .linalg import Interval, IntervalStatus
from .spaces import (
    OSpace,
    ConcreteOS,
    LevelElement,
    OSMap,
    Verdict,
    VerdictStatus,
    check_ruan,
    matrix_algebra,
    make_concrete,
    scalars,
    cb_norm,
    product,
    coproduct,
    equaliser,
    coequaliser,
    quotient,
    dual,
    min_quantization,
    proj_tensor,
    make_Tn
)
from .colimits import ChainDiagram, colimit_norm
from .coalgebra import Coalgebra, check_laws, check_morphism
from .testing.suites import SUITES, SuiteRunner, SuiteResult, CheckResult, CheckStatus
from .reporting import ReportGenerator, ReportFormat, NormReport, BundleSummary
from .monitoring.performance_monitor import PerformanceMonitor
from .utils.logger import Logger

__version__ = "1.0.0"
__author__ = "Operator Space Toolkit Team"
__all__ = [
    # Core
    "OpSpaceToolkit",
    "Config",
    "Budget",
    "Tolerances",
    "SpecLoader",

    # Input schemas
    "SpaceSpec",
    "ElementSpec",
    "MapSpec",
    "ChainSpec",
    "CoalgebraSpec",
    "SuiteInputSpec",
    "RunConfig",
    "validate_document",

    # Numerics
    "Interval",
    "IntervalStatus",
    "OSpace",
    "ConcreteOS",
    "LevelElement",
    "OSMap",
    "Verdict",
    "VerdictStatus",
    "check_ruan",
    "matrix_algebra",
    "make_concrete",
    "scalars",
    "cb_norm",
    "product",
    "coproduct",
    "equaliser",
    "coequaliser",
    "quotient",
    "dual",
    "min_quantization",
    "proj_tensor",
    "make_Tn",
    "ChainDiagram",
    "colimit_norm",
    "Coalgebra",
    "check_laws",
    "check_morphism",

    # Verification
    "SUITES",
    "SuiteRunner",
    "SuiteResult",
    "CheckResult",
    "CheckStatus",

    # Reporting
    "ReportGenerator",
    "ReportFormat",
    "NormReport",
    "BundleSummary",

    # Errors
    "OpSpaceError",
    "ErrorCode",
    "ErrorSeverity",
    "ConfigurationError",
    "InvalidInputError",
    "UnsupportedInputError",
    "ShapeMismatchError",
    "ParseError",
    "UnknownSuiteError",
    "EmptyInputError",

    # Utilities
    "Logger",
    "PerformanceMonitor",
]
