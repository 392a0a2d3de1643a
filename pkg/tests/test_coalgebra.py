"""
Tests for coalgebras over the projective tensor product
"""

import numpy as np
import pytest

from opspace_toolkit.coalgebra import (
    Coalgebra,
    check_laws,
    check_morphism,
    couniversality_demo,
    dual_algebra_residuals,
    trivial_coalgebra,
)
from opspace_toolkit.core.config import Budget
from opspace_toolkit.core.error_codes import InvalidInputError, ShapeMismatchError
from opspace_toolkit.spaces import OSMap, coproduct, identity_map, scalars

FAST = Budget(restarts=3, iterations=40, seed=19)

GROUPLIKE_COMUL = [[1, 0], [0, 0], [0, 0], [0, 1]]


@pytest.fixture
def grouplike():
    C = scalars(FAST)
    S, _, _ = coproduct([C, C])
    return Coalgebra(S, GROUPLIKE_COMUL, [[1, 1]], strict=True, name="grouplike_l1")


class TestCoalgebraLaws:
    """Test law residuals"""

    def test_trivial_coalgebra(self):
        """Test trivial coalgebra"""
        C = trivial_coalgebra()
        assert C.strict
        assert all(r == 0.0 for r in C.law_residuals().values())
        assert all(r == 0.0 for r in dual_algebra_residuals(C).values())

    def test_grouplike_laws(self, grouplike):
        """Test grouplike laws"""
        residuals = grouplike.law_residuals()
        assert residuals["left_counit"] == 0.0
        assert residuals["right_counit"] == 0.0
        assert residuals["coassociativity"] == 0.0
        assert residuals["cocommutativity"] == 0.0

    def test_corrupted_counit(self):
        """Test corrupted counit"""
        C = Coalgebra(scalars(FAST), [[1.0]], [[2.0]], name="corrupted")
        residuals = C.law_residuals()
        assert residuals["left_counit"] == 1.0
        assert residuals["right_counit"] == 1.0

    def test_doubled_comultiplication(self):
        """Test doubled comultiplication"""
        residuals = Coalgebra(scalars(FAST), [[2.0]], [[1.0]], name="doubled").law_residuals()
        assert residuals["left_counit"] == 1.0
        assert residuals["right_counit"] == 1.0
        assert residuals["coassociativity"] == 0.0

    def test_strict_coalgebra_must_satisfy_laws(self):
        """Test strict coalgebra must satisfy laws"""
        with pytest.raises(InvalidInputError):
            Coalgebra(scalars(), [[1.0]], [[2.0]], strict=True)

    def test_shapes(self):
        """Test shapes"""
        with pytest.raises(ShapeMismatchError):
            Coalgebra(scalars(), [[1.0], [0.0]], [[1.0]])
        with pytest.raises(ShapeMismatchError):
            Coalgebra(scalars(), [[1.0]], [[1.0, 0.0]])

    def test_to_dict(self, grouplike):
        """Test to dict"""
        data = grouplike.to_dict()
        assert data["name"] == "grouplike_l1"
        assert data["strict"] is True
        assert len(data["comul"]) == 4


class TestCheckLaws:
    """Test law reports with contraction verdicts"""

    def test_trivial_report(self):
        """Test trivial report"""
        report = check_laws(trivial_coalgebra(), 2, budget=FAST)
        assert report.laws_hold(commutative=True)
        assert report.counit_contraction.holds
        assert not report.comul_contraction.fails

    def test_corrupted_counit_is_not_contractive(self):
        """Test corrupted counit is not contractive"""
        report = check_laws(Coalgebra(scalars(FAST), [[1.0]], [[2.0]]), 1, budget=FAST)
        assert not report.laws_hold()
        assert report.counit_contraction.fails
        assert report.to_dict()["residuals"]["left_counit"] == 1.0

    def test_doubled_comultiplication_is_not_contractive(self):
        """Test doubled comultiplication is not contractive"""
        report = check_laws(Coalgebra(scalars(FAST), [[2.0]], [[1.0]]), 2, budget=FAST)
        assert report.residuals["left_counit"] == 1.0
        assert report.comul_contraction.fails
        assert report.comul_contraction.witness.achieved_ratio == pytest.approx(2.0)
        assert report.counit_contraction.holds

    def test_residuals_without_verdicts(self, grouplike):
        """Test residuals without verdicts"""
        report = check_laws(grouplike, verdicts=False)
        assert report.comul_contraction is None
        assert report.laws_hold()


class TestMorphisms:
    """Test coalgebra morphisms and the couniversality check"""

    def test_identity_is_morphism(self, grouplike):
        """Test identity is morphism"""
        report = check_morphism(identity_map(grouplike.space), grouplike, grouplike, verdicts=False)
        assert report.holds()

    def test_sum_map_onto_trivial(self, grouplike):
        """Test sum map onto trivial"""
        T = trivial_coalgebra()
        f = OSMap(grouplike.space, T.space, [[1, 1]], "sum")
        report = check_morphism(f, grouplike, T, verdicts=False)
        assert report.holds()
        assert report.to_dict()["contraction"] is None

    def test_non_morphism(self, grouplike):
        """Test non morphism"""
        T = trivial_coalgebra()
        f = OSMap(grouplike.space, T.space, [[1, 0]], "first")
        report = check_morphism(f, grouplike, T, verdicts=False)
        assert report.counit_residual == 1.0
        assert not report.holds()

    def test_morphism_dimensions(self, grouplike):
        """Test morphism dimensions"""
        with pytest.raises(InvalidInputError):
            check_morphism(identity_map(grouplike.space), grouplike, trivial_coalgebra(), verdicts=False)

    def test_couniversality(self, grouplike):
        """Test couniversality"""
        T = trivial_coalgebra()
        epsilon = OSMap(grouplike.space, T.space, [[1, 1]], "epsilon")
        f = OSMap(T.space, T.space, [[1]], "f")
        f_hat = OSMap(T.space, grouplike.space, [[1], [0]], "f_hat")
        report = couniversality_demo(T, grouplike, epsilon, f, f_hat)
        assert report.holds()
        assert report.extra["lift_residual"] == 0.0

    def test_couniversality_shapes(self, grouplike):
        """Test couniversality shapes"""
        T = trivial_coalgebra()
        with pytest.raises(InvalidInputError):
            couniversality_demo(T, grouplike, identity_map(grouplike.space), identity_map(T.space), identity_map(T.space))
