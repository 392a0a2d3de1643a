"""
Spec Loader
Builds spaces, elements, maps, chains and coalgebras from validated description files
"""

from pathlib import Path
from typing import Any, List, Optional, Tuple, Type, TypeVar

import numpy as np
from loguru import logger
from pydantic import BaseModel

from .config import Budget, Tolerances, DEFAULT_BUDGET, DEFAULT_TOLERANCES
from .error_codes import InvalidInputError, ShapeMismatchError
from .validation import (
    ChainSpec,
    CoalgebraSpec,
    ElementSpec,
    MapSpec,
    SpaceSpec,
    SuiteInputSpec,
    validate_document,
)
from ..coalgebra.coalgebra import Coalgebra
from ..colimits.chain import ChainDiagram, ColimitElement, explicit_chain, scalar_exp_chain, truncation_chain
from ..linalg.matrix_core import matrix_from_literal, parse_scalar
from ..spaces.constructions import coproduct, dual, min_quantization, product, quotient
from ..spaces.maps import OSMap
from ..spaces.ospace import LevelElement, OSpace, make_concrete, matrix_algebra, scalars, subspace, zero_space
from ..spaces.tensor import proj_tensor
from ..spaces.trace_class import make_Tn
from ..utils.helpers import load_json

ModelT = TypeVar("ModelT", bound=BaseModel)


def coordinate_vectors(literal: Optional[List[List[Any]]]) -> np.ndarray:
    rows = [[parse_scalar(s) for s in vec] for vec in (literal or [])]
    return np.array(rows, dtype=np.complex128) if rows else np.zeros((0, 0), dtype=np.complex128)


class SpecLoader:
    """
    Turns description files into toolkit objects

    Every space built here carries the loader's budget and tolerances, so
    norm oracles deep inside constructions honour the run configuration.
    """

    def __init__(self, budget: Budget = DEFAULT_BUDGET, tolerances: Tolerances = DEFAULT_TOLERANCES):
        """
        Initialize loader

        Args:
            budget: Search budget handed to every space
            tolerances: Tolerances handed to every space
        """
        self.budget = budget
        self.tolerances = tolerances

    # Files

    def read(self, path: str, model: Type[ModelT]) -> ModelT:
        """
        Parse and validate one JSON file

        Raises:
            ParseError: If the file is unreadable, malformed or off-schema
        """
        data = load_json(path)
        return validate_document(model, data, source=Path(path).name)

    def load_space(self, path: str) -> OSpace:
        return self.space(self.read(path, SpaceSpec))

    def load_element(self, path: str, space: Optional[OSpace] = None) -> LevelElement:
        return self.element(self.read(path, ElementSpec), space)

    def load_suite_input(self, path: str) -> SuiteInputSpec:
        return self.read(path, SuiteInputSpec)

    # Objects

    def space(self, spec: SpaceSpec) -> OSpace:
        """
        Build a (possibly nested) space description

        Raises:
            InvalidInputError: If bases or vectors are inconsistent
            UnsupportedInputError: If a construction needs a concrete input
        """
        kind = spec.kind
        b, t = self.budget, self.tolerances

        if kind == "concrete":
            basis = [matrix_from_literal(m) for m in spec.basis]
            return make_concrete(spec.ambient, basis, spec.name, b, t)
        if kind == "matrix_algebra":
            return matrix_algebra(spec.n, b, t)
        if kind == "scalars":
            return scalars(b, t)
        if kind == "zero":
            return zero_space(b, t)
        if kind == "trace_class":
            return make_Tn(spec.n, b, t)
        if kind == "subspace":
            return subspace(self.space(spec.of), coordinate_vectors(spec.vectors), spec.name)
        if kind == "quotient":
            return quotient(self.space(spec.of), coordinate_vectors(spec.vectors), spec.name)[0]
        if kind == "dual":
            return dual(self.space(spec.of))
        if kind == "min":
            return min_quantization(self.space(spec.of))
        if kind == "product":
            return product([self.space(c) for c in spec.components])[0]
        if kind == "coproduct":
            return coproduct([self.space(c) for c in spec.components])[0]
        if kind == "tensor":
            return proj_tensor(self.space(spec.left), self.space(spec.right))
        raise InvalidInputError(f"unknown space kind '{kind}'")

    def element(self, spec: ElementSpec, space: Optional[OSpace] = None) -> LevelElement:
        """
        Build an element, checked against its space when one is given

        Raises:
            ShapeMismatchError: If the coordinate length differs from the space dimension
        """
        e = LevelElement.from_literal(spec.coords)
        if space is not None:
            space.check_element(e)
        return e

    def map(self, spec: MapSpec) -> OSMap:
        dom, cod = self.space(spec.dom), self.space(spec.cod)
        return OSMap(dom, cod, matrix_from_literal(spec.coeff), spec.name)

    def chain(self, spec: ChainSpec, depth: Optional[int] = None) -> Tuple[ChainDiagram, List[ColimitElement]]:
        """
        Build a chain and the colimit elements listed with it

        Returns:
            (diagram, elements)
        """
        depth = spec.depth or depth or self.budget.depth
        if spec.rule == "scalar_exp":
            d = scalar_exp_chain(depth, self.budget)
        elif spec.rule == "truncation":
            d = truncation_chain(depth, self.budget)
        else:
            stages = [self.space(s) for s in spec.stages]
            links = [matrix_from_literal(m) for m in spec.links or []]
            d = explicit_chain(stages, links, spec.name or "chain", depth)
        if spec.name:
            d.name = spec.name

        elements = []
        for item in spec.elements:
            e = LevelElement.from_literal(item.coords)
            if e.level != item.level:
                raise ShapeMismatchError("element grid does not match its level", {"level": item.level, "grid": e.level})
            d.stage(item.stage).check_element(e)
            elements.append(ColimitElement(item.stage, e))
        logger.debug(f"Loaded chain {d.name} with {len(elements)} elements")
        return d, elements

    def coalgebra(self, spec: CoalgebraSpec) -> Coalgebra:
        X = self.space(spec.space)
        return Coalgebra(X, matrix_from_literal(spec.comul), matrix_from_literal(spec.counit), spec.strict, spec.name)
