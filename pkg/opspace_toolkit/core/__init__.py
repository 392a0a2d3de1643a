"""Core toolkit components: configuration, errors, input schemas, loading and orchestration"""

from .config import Config, Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from .error_codes import OpSpaceError, ErrorCode, ErrorSeverity, EXIT_CODES

__all__ = [
    "Config",
    "Budget",
    "Tolerances",
    "DEFAULT_BUDGET",
    "DEFAULT_TOLERANCES",
    "OpSpaceError",
    "ErrorCode",
    "ErrorSeverity",
    "EXIT_CODES",
]
