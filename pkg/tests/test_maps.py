"""
Tests for completely bounded maps
Map algebra, norm estimates and the contraction / isometry / quotient verdicts
"""

import numpy as np
import pytest

from opspace_toolkit.core.config import Budget
from opspace_toolkit.core.error_codes import InvalidInputError, ShapeMismatchError, UnsupportedInputError
from opspace_toolkit.linalg.matrix_core import matrix_unit
from opspace_toolkit.spaces import (
    LevelElement,
    OSMap,
    VerdictStatus,
    cb_norm,
    fiber_minimum,
    identity_map,
    is_complete_contraction,
    is_complete_isometry,
    is_complete_quotient,
    make_concrete,
    make_Tn,
    matrix_algebra,
    op_norm_at_level,
    scalars,
    subspace,
    zero_map,
)

FAST = Budget(restarts=4, iterations=60, seed=3)

# coordinate i*2 + j of M_2 goes to j*2 + i
TRANSPOSE = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=float)


@pytest.fixture
def M2():
    return matrix_algebra(2, FAST)


@pytest.fixture
def D2():
    return make_concrete(2, [matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)], "D_2", FAST)


class TestOSMap:
    """Test the map type"""

    def test_coefficient_shape(self, M2):
        """Test coefficient shape"""
        with pytest.raises(ShapeMismatchError):
            OSMap(M2, scalars(), np.ones((2, 4)))

    def test_non_finite_coefficients(self, M2):
        """Test non finite coefficients"""
        with pytest.raises(InvalidInputError):
            OSMap(M2, M2, np.full((4, 4), np.nan))

    def test_apply_and_compose(self, M2):
        """Test apply and compose"""
        t = OSMap(M2, M2, TRANSPOSE, "transpose")
        twice = t.compose(t)
        assert np.allclose(twice.coeff, np.eye(4))
        e12 = LevelElement.from_vector([0, 1, 0, 0])
        assert t(e12).coords[0, 0, 2] == 1

    def test_amplify_checks_level(self, M2):
        """Test amplify checks level"""
        u2 = identity_map(M2).amplify(2)
        with pytest.raises(ShapeMismatchError):
            u2(LevelElement.from_vector([1, 0, 0, 0]))

    def test_sum_and_scale_track_bounds(self, M2):
        """Test sum and scale track bounds"""
        i = identity_map(M2)
        s = i + i.scale(0.5)
        assert s.cb_bound == pytest.approx(1.5)
        assert np.allclose((i - i).coeff, 0)

    def test_sum_needs_the_same_spaces(self, M2):
        """Test sum needs the same spaces"""
        other = make_concrete(2, [matrix_unit(2, a, b) for a in range(2) for b in range(2)][::-1], "M_2 reversed")
        with pytest.raises(ShapeMismatchError):
            identity_map(M2) + OSMap(other, other, np.eye(4))
        assert (identity_map(M2) + identity_map(matrix_algebra(2))).coeff[0, 0] == 2

    def test_scalar_multiple(self, M2):
        """Test scalar multiple"""
        assert identity_map(M2).scale(2.0).scalar_multiple() == 2.0
        assert OSMap(M2, M2, TRANSPOSE).scalar_multiple() is None

    def test_zero_map(self, M2):
        """Test zero map"""
        z = zero_map(M2, scalars())
        assert z.is_zero()
        assert z.rank == 0


class TestNormEstimates:
    """Test norm intervals of maps"""

    def test_identity_is_exact(self, M2):
        """Test identity is exact"""
        est = cb_norm(identity_map(M2), FAST)
        assert est.interval.is_exact
        assert est.interval.hi == pytest.approx(1.0)

    def test_rank_one_map_from_scalars(self, M2):
        """Test rank one map from scalars"""
        u = OSMap(scalars(), M2, [[0], [3], [0], [0]])
        assert op_norm_at_level(u, 1, FAST).interval.hi == pytest.approx(3.0)

    def test_functional_norm(self, D2):
        """Test functional norm"""
        u = OSMap(D2, scalars(), [[1, 1]])
        assert op_norm_at_level(u, 1, FAST).interval.contains(2.0, slack=1e-6)

    def test_transpose_is_not_completely_contractive(self, M2):
        """Test transpose is not completely contractive"""
        est = op_norm_at_level(OSMap(M2, M2, TRANSPOSE, "transpose"), 2, FAST)
        assert est.interval.lo == pytest.approx(2.0, abs=1e-6)
        assert est.witness is not None
        assert est.witness.level == 2

    def test_cb_norm_of_transpose(self, M2):
        """Test cb norm of transpose"""
        est = cb_norm(OSMap(M2, M2, TRANSPOSE), FAST)
        assert est.level == 2
        assert est.interval.lo >= 2.0 - 1e-6

    def test_cb_norm_needs_level_for_abstract_codomain(self):
        """Test cb norm needs level for abstract codomain"""
        T2 = make_Tn(2, FAST)
        with pytest.raises(UnsupportedInputError):
            cb_norm(OSMap(T2, T2, TRANSPOSE), FAST)

    def test_level_must_be_positive(self, M2):
        """Test level must be positive"""
        with pytest.raises(InvalidInputError):
            op_norm_at_level(identity_map(M2), 0, FAST)


class TestVerdicts:
    """Test three-valued predicates"""

    def test_scaled_identity_is_contraction(self, D2):
        """Test scaled identity is contraction"""
        v = is_complete_contraction(identity_map(D2).scale(0.5), 3, budget=FAST)
        assert v.holds
        assert v.to_dict()["status"] == "holds"

    def test_transpose_fails_with_witness(self, M2):
        """Test transpose fails with witness"""
        v = is_complete_contraction(OSMap(M2, M2, TRANSPOSE, "transpose"), 2, budget=FAST)
        assert v.status == VerdictStatus.FAILS
        assert v.witness.achieved_ratio > 1.5
        assert v.witness.level == 2

    def test_subspace_inclusion_is_isometry(self, M2):
        """Test subspace inclusion is isometry"""
        S = subspace(M2, [[1, 0, 0, 0], [0, 1, 0, 0]], "row")
        inclusion = OSMap(S, M2, [[1, 0], [0, 1], [0, 0], [0, 0]])
        assert is_complete_isometry(inclusion, 2, trials=5, seed=1).holds

    def test_scaling_is_not_isometry(self, D2):
        """Test scaling is not isometry"""
        v = is_complete_isometry(identity_map(D2).scale(0.5), 1, trials=3)
        assert v.fails
        assert v.witness.achieved_ratio == pytest.approx(0.5)

    def test_identity_is_quotient(self, D2):
        """Test identity is quotient"""
        v = is_complete_quotient(identity_map(D2), 1, samples=2, budget=FAST)
        assert v.holds

    def test_non_surjective_map_is_not_quotient(self, D2):
        """Test non surjective map is not quotient"""
        v = is_complete_quotient(zero_map(D2, scalars()), 1, budget=FAST)
        assert v.fails
        assert v.detail["reason"] == "not surjective"

    def test_fiber_minimum_of_projection(self, D2):
        """Test fiber minimum of projection"""
        u = OSMap(D2, scalars(), [[1, 0]])
        interval, preimage = fiber_minimum(u, LevelElement.from_vector([1.0]), FAST)
        assert interval.contains(1.0, slack=1e-6)
        assert np.allclose(u(preimage).coords, [[[1.0]]])

    def test_fiber_minimum_outside_image(self, D2):
        """Test fiber minimum outside image"""
        u = OSMap(scalars(), D2, [[1], [0]])
        with pytest.raises(InvalidInputError):
            fiber_minimum(u, LevelElement.from_vector([0.0, 1.0]), FAST)
