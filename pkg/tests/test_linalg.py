"""
Tests for the linear algebra kernels
Intervals, matrix helpers, literals and affine norm minimization
"""

import numpy as np
import pytest

from opspace_toolkit.core.config import Budget
from opspace_toolkit.core.error_codes import ErrorCode, InvalidInputError, ParseError, ShapeMismatchError
from opspace_toolkit.linalg import (
    AffineNormMinimizer,
    Interval,
    IntervalStatus,
    NormKind,
    as_cmat,
    direct_sum,
    functional_norm,
    min_spectral_over_affine,
    min_trace_over_affine,
    sandwich,
    spectral_norm,
    trace_norm,
)
from opspace_toolkit.linalg.matrix_core import (
    matrix_from_literal,
    matrix_to_literal,
    matrix_unit,
    parse_scalar,
    require_independent,
)

FAST = Budget(restarts=4, iterations=80, seed=7)


class TestInterval:
    """Test certified intervals"""

    def test_exact_interval(self):
        """Test exact interval"""
        i = Interval.exact(2.0)
        assert i.lo == i.hi == 2.0
        assert i.is_exact
        assert i.to_dict() == {"lo": 2.0, "hi": 2.0, "status": "exact"}

    def test_bounds_status_follows_width(self):
        """Test bounds status follows width"""
        assert Interval.bounds(1.0, 1.0 + 1e-13).is_exact
        assert Interval.bounds(1.0, 1.1).status == IntervalStatus.APPROXIMATE

    def test_wide_interval_cannot_claim_exact(self):
        """Test wide interval cannot claim exact"""
        assert Interval(1.0, 2.0, IntervalStatus.EXACT).status == IntervalStatus.APPROXIMATE

    def test_rounding_crossover_is_clamped(self):
        """Test rounding crossover is clamped"""
        i = Interval(1.0 + 1e-13, 1.0)
        assert i.lo == i.hi == 1.0

    def test_inverted_bounds_rejected(self):
        """Test inverted bounds rejected"""
        with pytest.raises(InvalidInputError):
            Interval(2.0, 1.0)

    def test_nan_rejected(self):
        """Test nan rejected"""
        with pytest.raises(InvalidInputError):
            Interval(float("nan"), 1.0)

    def test_negative_lower_bound_clamped(self):
        """Test negative lower bound clamped"""
        assert Interval(-0.5, 1.0).lo == 0.0

    def test_gap_and_overlap(self):
        """Test gap and overlap"""
        a, b = Interval(0.0, 1.0), Interval(1.5, 2.0)
        assert a.gap(b) == pytest.approx(0.5)
        assert not a.overlaps(b)
        assert a.overlaps(b, slack=0.5)
        assert Interval(0.5, 1.6).gap(b) == 0.0

    def test_max_and_sum(self):
        """Test max and sum"""
        items = [Interval(1.0, 2.0), Interval.exact(1.5)]
        assert Interval.max_of(items) == Interval(1.5, 2.0)
        total = Interval.sum_of(items)
        assert (total.lo, total.hi) == (2.5, 3.5)
        assert Interval.max_of([]) == Interval.zero()

    def test_scale_and_intersect(self):
        """Test scale and intersect"""
        assert Interval(1.0, 2.0).scale(-2.0) == Interval(2.0, 4.0)
        both = Interval(1.0, 3.0).intersect(Interval(2.0, 4.0))
        assert (both.lo, both.hi) == (2.0, 3.0)


class TestMatrixCore:
    """Test matrix helpers"""

    def test_spectral_and_trace_norms(self):
        """Test spectral and trace norms"""
        a = np.diag([3.0, -4.0])
        assert spectral_norm(a) == pytest.approx(4.0)
        assert trace_norm(a) == pytest.approx(7.0)

    def test_empty_matrix_has_zero_norm(self):
        """Test empty matrix has zero norm"""
        assert spectral_norm(np.zeros((0, 0))) == 0.0

    def test_non_finite_entries(self):
        """Test non finite entries"""
        with pytest.raises(InvalidInputError) as exc:
            as_cmat([[np.inf]])
        assert exc.value.code == ErrorCode.NON_FINITE_ENTRIES

    def test_three_dimensional_input(self):
        """Test three dimensional input"""
        with pytest.raises(ShapeMismatchError):
            as_cmat(np.zeros((2, 2, 2)))

    def test_trace_norm_needs_square(self):
        """Test trace norm needs square"""
        with pytest.raises(InvalidInputError):
            trace_norm(np.zeros((2, 3)))

    def test_direct_sum_and_sandwich(self):
        """Test direct sum and sandwich"""
        s = direct_sum(np.eye(1), 2 * np.eye(2))
        assert s.shape == (3, 3)
        assert spectral_norm(s) == pytest.approx(2.0)
        assert np.allclose(sandwich(np.ones((1, 2)), np.eye(2), np.ones((2, 1))), [[2.0]])
        with pytest.raises(InvalidInputError):
            sandwich(np.ones((1, 3)), np.eye(2), np.ones((2, 1)))

    def test_dependent_basis(self):
        """Test dependent basis"""
        with pytest.raises(InvalidInputError) as exc:
            require_independent([matrix_unit(2, 0, 0), 2 * matrix_unit(2, 0, 0)])
        assert exc.value.code == ErrorCode.DEPENDENT_BASIS


class TestLiterals:
    """Test JSON matrix literals"""

    def test_parse_scalar_forms(self):
        """Test parse scalar forms"""
        assert parse_scalar(2) == 2 + 0j
        assert parse_scalar([1.0, -2.0]) == 1 - 2j
        with pytest.raises(ParseError):
            parse_scalar(True)
        with pytest.raises(ParseError):
            parse_scalar("1")

    def test_matrix_literal(self):
        """Test matrix literal"""
        m = matrix_from_literal([[1, [0, 1]], [0, 2]])
        assert m[0, 1] == 1j
        assert matrix_to_literal(m)[1][1] == [2.0, 0.0]

    def test_ragged_literal(self):
        """Test ragged literal"""
        with pytest.raises(ParseError):
            matrix_from_literal([[1, 2], [3]])
        with pytest.raises(ParseError):
            matrix_from_literal([])


class TestAffineMinimization:
    """Test certified affine norm minimization"""

    def test_spectral_minimum_of_diagonal(self):
        """Test spectral minimum of diagonal"""
        # min_c ||diag(1, c)|| = 1 for any c with |c| <= 1
        i = min_spectral_over_affine(matrix_unit(2, 0, 0), [matrix_unit(2, 1, 1)], FAST)
        assert i.lo <= 1.0 + 1e-9
        assert i.hi == pytest.approx(1.0, abs=1e-6)

    def test_spectral_minimum_cancels_direction(self):
        """Test spectral minimum cancels direction"""
        target = np.array([[1.0, 1.0], [0.0, 0.0]])
        i = min_spectral_over_affine(target, [matrix_unit(2, 0, 1)], FAST)
        assert i.hi == pytest.approx(1.0, abs=1e-6)
        assert i.lo <= i.hi

    def test_trace_minimum(self):
        """Test trace minimum"""
        i = min_trace_over_affine(np.eye(2), [matrix_unit(2, 0, 0)], FAST)
        assert i.hi == pytest.approx(1.0, abs=1e-6)
        assert i.lo <= 1.0 + 1e-9

    def test_empty_basis_is_exact(self):
        """Test empty basis is exact"""
        i = min_spectral_over_affine(np.diag([2.0, 1.0]), [], FAST)
        assert i.is_exact
        assert i.hi == pytest.approx(2.0)

    def test_minimizer_reports_coefficients(self):
        """Test minimizer reports coefficients"""
        result = AffineNormMinimizer(NormKind.SPECTRAL, FAST).minimize(np.eye(2), [matrix_unit(2, 0, 0)])
        assert len(result.coefficients) == 1
        assert spectral_norm(result.minimizer) == pytest.approx(result.interval.hi, abs=1e-9)

    def test_functional_norm_on_diagonal(self):
        """Test functional norm on diagonal"""
        # a + b on l_inf^2 has norm 2
        basis = [matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)]
        i = functional_norm(basis, [1.0, 1.0], FAST)
        assert i.contains(2.0, slack=1e-6)

    def test_functional_norm_weight_mismatch(self):
        """Test functional norm weight mismatch"""
        with pytest.raises(ShapeMismatchError):
            functional_norm([matrix_unit(2, 0, 0)], [1.0, 2.0], FAST)

    def test_zero_functional(self):
        """Test zero functional"""
        assert functional_norm([matrix_unit(2, 0, 0)], [0.0], FAST) == Interval.zero()
