"""
Input Validation Framework
Pydantic schemas for space, element, map, chain and coalgebra files
"""

from enum import Enum
from typing import Any, Dict, List, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .config import Budget, Tolerances
from .error_codes import ConfigurationError, ErrorCode, ParseError

ModelT = TypeVar("ModelT", bound=BaseModel)

# [re, im] pairs or bare reals
Scalar = Any
MatrixLiteral = List[List[Scalar]]
CoordVector = List[Scalar]


def _check_scalar(value: Any) -> Any:
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, (int, float)):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in value
    ):
        return list(value)
    raise ValueError(f"expected a number or an [re, im] pair, got {value!r}"[:120])


def _check_matrix(value: Any) -> MatrixLiteral:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise ValueError("matrix literal must be a non-empty list of rows")
    width = len(value[0])
    if width == 0 or any(len(r) != width for r in value):
        raise ValueError("matrix rows must be non-empty and of equal length")
    return [[_check_scalar(v) for v in row] for row in value]


class LogLevel(str, Enum):
    """Valid log levels"""
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class SpaceKindName(str, Enum):
    """Space kinds accepted in description files"""
    CONCRETE = "concrete"
    MATRIX_ALGEBRA = "matrix_algebra"
    SCALARS = "scalars"
    ZERO = "zero"
    SUBSPACE = "subspace"
    PRODUCT = "product"
    COPRODUCT = "coproduct"
    QUOTIENT = "quotient"
    DUAL = "dual"
    MIN = "min"
    TENSOR = "tensor"
    TRACE_CLASS = "trace_class"


class SpaceSpec(BaseModel):
    """Recursive operator space description"""
    model_config = ConfigDict(extra="forbid", use_enum_values=True)

    kind: SpaceKindName
    name: Optional[str] = None
    ambient: Optional[int] = Field(None, ge=1, le=64)
    basis: Optional[List[MatrixLiteral]] = None
    n: Optional[int] = Field(None, ge=1, le=8)
    of: Optional["SpaceSpec"] = None
    vectors: Optional[List[CoordVector]] = None
    components: Optional[List["SpaceSpec"]] = None
    left: Optional["SpaceSpec"] = None
    right: Optional["SpaceSpec"] = None

    @field_validator("basis")
    @classmethod
    def validate_basis(cls, v):
        if v is None:
            return v
        return [_check_matrix(m) for m in v]

    @field_validator("vectors")
    @classmethod
    def validate_vectors(cls, v):
        if v is None:
            return v
        return [[_check_scalar(s) for s in vec] for vec in v]

    @model_validator(mode="after")
    def validate_kind_fields(self):
        """Each kind carries its own required fields"""
        required = {
            "concrete": ("ambient", "basis"),
            "matrix_algebra": ("n",),
            "trace_class": ("n",),
            "subspace": ("of", "vectors"),
            "quotient": ("of", "vectors"),
            "dual": ("of",),
            "min": ("of",),
            "product": ("components",),
            "coproduct": ("components",),
            "tensor": ("left", "right"),
        }
        missing = [f for f in required.get(self.kind, ()) if getattr(self, f) is None]
        if missing:
            raise ValueError(f"space kind '{self.kind}' requires {', '.join(missing)}")
        return self


class ElementSpec(BaseModel):
    """Level-n element given by its n x n grid of coordinate vectors"""
    model_config = ConfigDict(extra="forbid")

    level: int = Field(..., ge=1, le=16)
    coords: List[List[CoordVector]]

    @field_validator("coords")
    @classmethod
    def validate_coords(cls, v):
        return [[[_check_scalar(s) for s in cell] for cell in row] for row in v]

    @model_validator(mode="after")
    def validate_grid(self):
        if len(self.coords) != self.level or any(len(row) != self.level for row in self.coords):
            raise ValueError(f"coords must be a {self.level} x {self.level} grid")
        widths = {len(cell) for row in self.coords for cell in row}
        if len(widths) > 1:
            raise ValueError("all coordinate vectors must have the same length")
        return self


class MapSpec(BaseModel):
    """Linear map given by its coefficient matrix on coordinates"""
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    dom: SpaceSpec
    cod: SpaceSpec
    coeff: MatrixLiteral

    @field_validator("coeff")
    @classmethod
    def validate_coeff(cls, v):
        return _check_matrix(v)


class ColimitElementSpec(BaseModel):
    """Element sitting at one stage of a chain"""
    model_config = ConfigDict(extra="forbid")

    stage: int = Field(..., ge=0)
    level: int = Field(1, ge=1, le=8)
    coords: List[List[CoordVector]]

    @field_validator("coords")
    @classmethod
    def validate_coords(cls, v):
        return [[[_check_scalar(s) for s in cell] for cell in row] for row in v]


class ChainRule(str, Enum):
    """Generator rules for chains extending to any depth"""
    SCALAR_EXP = "scalar_exp"
    TRUNCATION = "truncation"


class ChainSpec(BaseModel):
    """Chain description: explicit stages and links, or a generator rule"""
    model_config = ConfigDict(extra="forbid", use_enum_values=True)

    name: Optional[str] = None
    rule: Optional[ChainRule] = None
    stages: Optional[List[SpaceSpec]] = None
    links: Optional[List[MatrixLiteral]] = None
    depth: Optional[int] = Field(None, ge=1, le=200)
    elements: List[ColimitElementSpec] = Field(default_factory=list)

    @field_validator("links")
    @classmethod
    def validate_links(cls, v):
        if v is None:
            return v
        return [_check_matrix(m) for m in v]

    @model_validator(mode="after")
    def validate_shape(self):
        if self.rule is None:
            if not self.stages:
                raise ValueError("a chain needs either a rule or explicit stages")
            if len(self.links or []) != len(self.stages) - 1:
                raise ValueError("a chain with k stages needs k - 1 links")
        return self


class CoalgebraSpec(BaseModel):
    """Coalgebra file: space, comultiplication and counit coordinates"""
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    space: SpaceSpec
    comul: MatrixLiteral
    counit: MatrixLiteral
    strict: bool = False

    @field_validator("comul", "counit")
    @classmethod
    def validate_matrices(cls, v):
        return _check_matrix(v)


class SuiteInputSpec(BaseModel):
    """Input bundle for a verification suite"""
    model_config = ConfigDict(extra="forbid")

    name: Optional[str] = None
    suite: Optional[str] = None
    spaces: List[SpaceSpec] = Field(default_factory=list)
    elements: List[ElementSpec] = Field(default_factory=list)
    maps: List[MapSpec] = Field(default_factory=list)
    chains: List[ChainSpec] = Field(default_factory=list)
    coalgebras: List[CoalgebraSpec] = Field(default_factory=list)
    trials: Optional[int] = Field(None, ge=1, le=10000)


class TolerancesModel(BaseModel):
    """Validated tolerances (all strictly positive)"""
    exactness: float = Field(1e-10, gt=0)
    report: float = Field(1e-8, gt=0)
    verdict: float = Field(1e-6, gt=0)


class BudgetsModel(BaseModel):
    """Validated search budgets"""
    restarts: int = Field(32, ge=1)
    iterations: int = Field(200, ge=1)
    level_cap: int = Field(3, ge=1, le=16)
    depth: int = Field(40, ge=1, le=200)
    factorization_cap: int = Field(0, ge=0)


class RunConfig(BaseModel):
    """Validated run configuration"""
    seed: int
    output: Optional[str] = None
    tolerances: TolerancesModel = Field(default_factory=TolerancesModel)
    budgets: BudgetsModel = Field(default_factory=BudgetsModel)
    max_workers: int = Field(1, ge=1, le=64)

    def budget(self) -> Budget:
        """Budget handed to numeric routines"""
        return Budget(
            restarts=self.budgets.restarts,
            iterations=self.budgets.iterations,
            level_cap=self.budgets.level_cap,
            depth=self.budgets.depth,
            factorization_cap=self.budgets.factorization_cap,
            max_workers=self.max_workers,
            seed=self.seed
        )

    def tolerance_set(self) -> Tolerances:
        return Tolerances(
            exactness=self.tolerances.exactness,
            report=self.tolerances.report,
            verdict=self.tolerances.verdict
        )


def _describe(exc: ValidationError) -> List[Dict[str, Any]]:
    return [
        {"loc": ".".join(str(p) for p in err["loc"]), "msg": err["msg"]}
        for err in exc.errors()
    ]


def validate_document(model: Type[ModelT], data: Any, source: str = "<input>") -> ModelT:
    """
    Validate a parsed JSON document against a schema

    Args:
        model: Pydantic model class
        data: Parsed JSON value
        source: File name used in diagnostics

    Returns:
        Validated model instance

    Raises:
        ParseError: If the document violates the schema
    """
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ParseError(
            f"{source} does not match the {model.__name__} schema",
            {"file": source, "errors": _describe(e)[:10]},
            code=ErrorCode.SCHEMA_VIOLATION,
            original_exception=e
        )


def validate_run_config(data: Dict[str, Any]) -> RunConfig:
    """
    Validate run configuration values

    Args:
        data: seed, output, tolerances, budgets, max_workers

    Returns:
        Validated RunConfig

    Raises:
        ConfigurationError: If a tolerance or budget is out of range
    """
    if data.get("seed") is None:
        raise ConfigurationError("A seed is required (run.seed, OPSPACE_SEED or --seed)")
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError("Invalid run configuration", {"errors": _describe(e)})


def validate_log_level(level: str) -> str:
    """Normalize and check a log level name"""
    try:
        return LogLevel(str(level).upper()).value
    except ValueError:
        raise ConfigurationError(f"Unknown log level '{level}'", {"known": [l.value for l in LogLevel]})


SpaceSpec.model_rebuild()
