"""
Error Codes and Structured Exceptions
Error handling with codes, context and CLI exit codes
"""

from enum import Enum
from typing import Dict, Any, Optional
from datetime import datetime
import traceback


class ErrorCode(str, Enum):
    """Standardized error codes"""

    # General errors (E0xx)
    UNKNOWN_ERROR = "E000"
    INTERNAL_ERROR = "E001"
    NOT_IMPLEMENTED = "E002"

    # Configuration errors (E1xx)
    CONFIGURATION_ERROR = "E100"
    INVALID_CONFIGURATION = "E101"
    MISSING_CONFIGURATION = "E102"
    CONFIGURATION_LOAD_FAILED = "E103"

    # Input errors (E2xx)
    VALIDATION_ERROR = "E200"
    INVALID_INPUT = "E201"
    UNSUPPORTED_INPUT = "E202"
    SHAPE_MISMATCH = "E203"
    DEPENDENT_BASIS = "E204"
    NON_FINITE_ENTRIES = "E205"

    # Parse errors (E3xx)
    PARSE_ERROR = "E300"
    MALFORMED_JSON = "E301"
    SCHEMA_VIOLATION = "E302"
    CORRUPT_REPORT = "E303"

    # Verification errors (E4xx)
    UNKNOWN_SUITE = "E400"
    SUITE_INPUT_MISMATCH = "E401"

    # Resource errors (E5xx)
    EMPTY_INPUT = "E500"
    RESOURCE_NOT_FOUND = "E501"


class ErrorSeverity(str, Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


# Process exit codes; anything unlisted exits with 1
EXIT_CODES: Dict[ErrorCode, int] = {
    ErrorCode.PARSE_ERROR: 2,
    ErrorCode.MALFORMED_JSON: 2,
    ErrorCode.SCHEMA_VIOLATION: 2,
    ErrorCode.CORRUPT_REPORT: 2,
    ErrorCode.SHAPE_MISMATCH: 3,
    ErrorCode.UNKNOWN_SUITE: 4,
    ErrorCode.EMPTY_INPUT: 5,
}


class OpSpaceError(Exception):
    """
    Base exception for the toolkit with structured error information
    """

    def __init__(
        self,
        code: ErrorCode,
        message: str,
        context: Optional[Dict[str, Any]] = None,
        severity: ErrorSeverity = ErrorSeverity.MEDIUM,
        original_exception: Optional[Exception] = None
    ):
        """
        Initialize toolkit error

        Args:
            code: Error code from ErrorCode enum
            message: Human-readable error message
            context: Additional context about the error
            severity: Error severity level
            original_exception: Original exception if wrapped
        """
        self.code = code
        self.message = message
        self.context = context or {}
        self.severity = severity
        self.original_exception = original_exception
        self.timestamp = datetime.now()
        self.traceback_str = traceback.format_exc() if original_exception else None

        full_message = f"[{code.value}] {message}"
        if context:
            full_message += f" | Context: {context}"

        super().__init__(full_message)

    @property
    def exit_code(self) -> int:
        """Process exit code for this error"""
        return EXIT_CODES.get(self.code, 1)

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary"""
        return {
            "code": self.code.value,
            "message": self.message,
            "context": self.context,
            "severity": self.severity.value,
            "exit_code": self.exit_code,
        }

    def __str__(self) -> str:
        return f"[{self.code.value}] {self.message}"


# Specific exception classes

class ConfigurationError(OpSpaceError):
    """Configuration-related errors"""
    def __init__(self, message: str, context: Optional[Dict] = None):
        super().__init__(
            code=ErrorCode.CONFIGURATION_ERROR,
            message=message,
            context=context,
            severity=ErrorSeverity.HIGH
        )


class InvalidInputError(OpSpaceError):
    """Input violates an operation's precondition"""
    def __init__(
        self,
        message: str,
        context: Optional[Dict] = None,
        code: ErrorCode = ErrorCode.INVALID_INPUT
    ):
        super().__init__(
            code=code,
            message=message,
            context=context,
            severity=ErrorSeverity.MEDIUM
        )


class UnsupportedInputError(OpSpaceError):
    """Input is valid but outside what the operation can evaluate"""
    def __init__(self, message: str, context: Optional[Dict] = None):
        super().__init__(
            code=ErrorCode.UNSUPPORTED_INPUT,
            message=message,
            context=context,
            severity=ErrorSeverity.MEDIUM
        )


class ShapeMismatchError(InvalidInputError):
    """Dimensions of inputs do not fit together"""
    def __init__(self, message: str, context: Optional[Dict] = None):
        super().__init__(message, context=context, code=ErrorCode.SHAPE_MISMATCH)


class ParseError(OpSpaceError):
    """Input file could not be parsed"""
    def __init__(
        self,
        message: str,
        context: Optional[Dict] = None,
        code: ErrorCode = ErrorCode.PARSE_ERROR,
        original_exception: Optional[Exception] = None
    ):
        super().__init__(
            code=code,
            message=message,
            context=context,
            severity=ErrorSeverity.MEDIUM,
            original_exception=original_exception
        )


class UnknownSuiteError(OpSpaceError):
    """Verification suite name not recognized"""
    def __init__(self, suite: str, known: Optional[list] = None):
        super().__init__(
            code=ErrorCode.UNKNOWN_SUITE,
            message=f"Unknown verification suite '{suite}'",
            context={"suite": suite, "known": known or []},
            severity=ErrorSeverity.LOW
        )


class EmptyInputError(OpSpaceError):
    """Nothing to process"""
    def __init__(self, message: str, context: Optional[Dict] = None):
        super().__init__(
            code=ErrorCode.EMPTY_INPUT,
            message=message,
            context=context,
            severity=ErrorSeverity.LOW
        )


def handle_exception(
    exc: Exception,
    logger,
    context: Optional[Dict[str, Any]] = None
) -> OpSpaceError:
    """
    Handle and convert exceptions to OpSpaceError

    Args:
        exc: Exception to handle
        logger: Logger instance
        context: Additional context

    Returns:
        OpSpaceError instance
    """
    if isinstance(exc, OpSpaceError):
        logger.error(f"Error occurred: {exc}")
        return exc

    wrapped = OpSpaceError(
        code=ErrorCode.UNKNOWN_ERROR,
        message=str(exc),
        context=context,
        severity=ErrorSeverity.MEDIUM,
        original_exception=exc
    )

    logger.error(f"Unhandled exception: {exc}")

    return wrapped


# Error code descriptions for documentation
ERROR_DESCRIPTIONS = {
    ErrorCode.INVALID_INPUT: "Input violates the operation's precondition",
    ErrorCode.UNSUPPORTED_INPUT: "Operation cannot evaluate this kind of input",
    ErrorCode.SHAPE_MISMATCH: "Dimensions of the inputs do not match",
    ErrorCode.DEPENDENT_BASIS: "Basis or coordinate vectors are linearly dependent",
    ErrorCode.NON_FINITE_ENTRIES: "Matrix contains NaN or infinite entries",
    ErrorCode.PARSE_ERROR: "Input file could not be parsed",
    ErrorCode.UNKNOWN_SUITE: "Verification suite name is not recognized",
    ErrorCode.EMPTY_INPUT: "Input directory or file set is empty",
    ErrorCode.CONFIGURATION_ERROR: "Configuration is invalid or missing",
}


def get_error_description(code: ErrorCode) -> str:
    """Get human-readable description for error code"""
    return ERROR_DESCRIPTIONS.get(code, "No description available")
