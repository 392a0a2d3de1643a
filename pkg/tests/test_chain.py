"""
Tests for chain diagrams and colimits
"""

import math

import numpy as np
import pytest

from opspace_toolkit.colimits import (
    ColimitElement,
    amplified_chain,
    colimit_norm,
    essential_uniqueness_probe,
    explicit_chain,
    factorization_probe,
    same_class,
    scalar_exp_chain,
    truncation_chain,
)
from opspace_toolkit.colimits.chain import amplify_element, decaying_target, landing_target
from opspace_toolkit.core.config import Budget
from opspace_toolkit.core.error_codes import InvalidInputError, ShapeMismatchError
from opspace_toolkit.spaces import LevelElement, OSMap, scalars

FAST = Budget(restarts=3, iterations=40, seed=17)


def scalar_element(stage: int, value: float) -> ColimitElement:
    return ColimitElement(stage, LevelElement.from_vector([value]))


@pytest.fixture
def halving():
    C = scalars(FAST)
    return explicit_chain([C, C, C], [[[0.5]], [[1.0]]], "halving", depth=6)


class TestChainDiagram:
    """Test chain construction"""

    def test_stages_are_memoized(self):
        """Test stages are memoized"""
        d = truncation_chain(10, FAST)
        assert d.stage(3) is d.stage(3)
        assert d.stage(0).dim == 0
        assert d.stage(4).dim == 4

    def test_negative_stage(self):
        """Test negative stage"""
        with pytest.raises(InvalidInputError):
            scalar_exp_chain().stage(-1)

    def test_composite(self):
        """Test composite"""
        d = scalar_exp_chain(10, FAST)
        assert d.composite(0, 2)[0, 0] == pytest.approx(math.exp(-1.5))
        assert np.allclose(d.composite(2, 2), np.eye(1))
        with pytest.raises(InvalidInputError):
            d.composite(3, 1)

    def test_explicit_chain_needs_matching_links(self):
        """Test explicit chain needs matching links"""
        C = scalars()
        with pytest.raises(InvalidInputError):
            explicit_chain([C, C], [])
        with pytest.raises(InvalidInputError):
            explicit_chain([], [])

    def test_explicit_chain_continues_with_identities(self, halving):
        """Test explicit chain continues with identities"""
        assert np.allclose(halving.composite(2, 5), np.eye(1))

    def test_links_are_checked(self):
        """Test links are checked"""
        C = scalars(FAST)
        d = explicit_chain([C, C], [[[2.0]]], "stretch")
        with pytest.raises(InvalidInputError):
            d.verify_links(budget=FAST)

    def test_scalar_links_are_contractions(self):
        """Test scalar links are contractions"""
        verdicts = scalar_exp_chain(5, FAST).verify_links(budget=FAST)
        assert len(verdicts) == 5
        assert all(v.holds for v in verdicts)


class TestColimitNorm:
    """Test colimit norms"""

    def test_scalar_exp_limit(self):
        """Test scalar exp limit"""
        value = colimit_norm(scalar_exp_chain(40, FAST), scalar_element(0, 1.0))
        assert value.interval.is_exact
        assert value.interval.hi == pytest.approx(0.1353352832, abs=1e-6)
        assert abs(value.values[-1] - math.exp(-2)) <= 1e-6
        assert all(b <= a + 1e-12 for a, b in zip(value.values, value.values[1:]))

    def test_scalar_exp_later_stage(self):
        """Test scalar exp later stage"""
        value = colimit_norm(scalar_exp_chain(40, FAST), scalar_element(1, 2.0))
        assert value.interval.hi == pytest.approx(2.0 * math.exp(-1.0))

    def test_truncation_keeps_norms(self):
        """Test truncation keeps norms"""
        d = truncation_chain(8, FAST)
        value = colimit_norm(d, ColimitElement(2, LevelElement.from_vector([1.0, -3.0])))
        assert value.interval.hi == pytest.approx(3.0)

    def test_explicit_chain_is_attained(self, halving):
        """Test explicit chain is attained"""
        value = colimit_norm(halving, scalar_element(0, 1.0))
        assert value.interval.is_exact
        assert value.interval.hi == pytest.approx(0.5)
        assert value.attained
        assert value.values == pytest.approx([1.0, 0.5, 0.5])

    def test_depth_below_stage(self):
        """Test depth below stage"""
        with pytest.raises(InvalidInputError):
            colimit_norm(scalar_exp_chain(), scalar_element(5, 1.0), depth=2)

    def test_amplified_chain_agrees(self):
        """Test amplified chain agrees"""
        d = scalar_exp_chain(30, FAST)
        grid = ColimitElement(0, LevelElement.from_scalar_grid(np.array([[1.0, 2.0], [0.0, 1.0]]), [1.0]))
        direct = colimit_norm(d, grid)
        amplified = colimit_norm(amplified_chain(d, 2), amplify_element(grid))
        assert abs(direct.interval.hi - amplified.interval.hi) <= 1e-8

    def test_amplified_chain_level(self):
        """Test amplified chain level"""
        d = scalar_exp_chain()
        assert amplified_chain(d, 1) is d
        with pytest.raises(InvalidInputError):
            amplified_chain(d, 0)


class TestSameClass:
    """Test equality of classes"""

    def test_pushed_representative(self):
        """Test pushed representative"""
        d = scalar_exp_chain(10, FAST)
        v = same_class(d, scalar_element(0, 1.0), scalar_element(1, math.exp(-1.0)))
        assert v.holds
        assert v.detail["stage"] == 1

    def test_distinct_classes(self, halving):
        """Test distinct classes"""
        v = same_class(halving, scalar_element(0, 1.0), scalar_element(0, 0.0))
        assert v.fails

    def test_level_mismatch(self, halving):
        """Test level mismatch"""
        with pytest.raises(ShapeMismatchError):
            same_class(halving, scalar_element(0, 1.0), ColimitElement(0, LevelElement.zeros(2, 1)))


class TestPresentability:
    """Test factorization through finite stages"""

    def test_limit_vector_does_not_factor(self):
        """Test limit vector does not factor"""
        d = truncation_chain(6, FAST)
        result = factorization_probe(d, scalars(FAST), lambda k: np.ones((k, 1)), depth=6, budget=FAST)
        assert not result.found
        assert result.obstruction["depth"] == 6

    def test_decaying_tail_does_not_factor(self):
        """Test decaying tail does not factor"""
        d = truncation_chain(6, FAST)
        at = decaying_target()
        assert np.all(np.diff(np.abs(at(7)[:, 0])) < 0)
        result = factorization_probe(d, scalars(FAST), at, depth=6, budget=FAST)
        assert not result.found
        assert result.obstruction["fiber_norms"] == [None] * 7

    def test_decay_ratio_range(self):
        """Test decay ratio range"""
        for ratio in (0.0, 1.0, 1.5):
            with pytest.raises(InvalidInputError):
                decaying_target(ratio)

    def test_finite_support_factors_at_its_stage(self):
        """Test finite support factors at its stage"""
        d = truncation_chain(6, FAST)
        f = OSMap(scalars(FAST), d.stage(3), np.ones((3, 1)), "ones_3")
        result = factorization_probe(d, scalars(FAST), landing_target(d, f, 3), depth=6, budget=FAST)
        assert result.found
        assert result.stage == 3
        assert result.to_dict()["stage"] == 3

    def test_landing_target_is_forward_only(self):
        """Test landing target is forward only"""
        d = truncation_chain(6, FAST)
        at = landing_target(d, OSMap(scalars(FAST), d.stage(3), np.ones((3, 1))), 3)
        with pytest.raises(InvalidInputError):
            at(2)

    def test_essential_uniqueness(self):
        """Test essential uniqueness"""
        d = scalar_exp_chain(10, FAST)
        C = d.stage(0)
        g = OSMap(C, C, [[1.0]])
        assert essential_uniqueness_probe(d, 0, g, OSMap(C, C, [[1.0]]), depth=5) == 0
        with pytest.raises(InvalidInputError):
            essential_uniqueness_probe(d, 0, g, OSMap(C, C, [[0.0]]), depth=5)
