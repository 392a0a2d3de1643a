"""
Tests for the projective tensor product
Cross norms, bilinear maps, linearization and monoidal structure maps
"""

import numpy as np
import pytest

from opspace_toolkit.core.config import Budget
from opspace_toolkit.core.error_codes import InvalidInputError, ShapeMismatchError
from opspace_toolkit.linalg.matrix_core import matrix_unit
from opspace_toolkit.spaces import (
    BilinMap,
    LevelElement,
    OSMap,
    identity_map,
    jcb_norm,
    linearize,
    make_concrete,
    proj_tensor,
    quotient,
    scalars,
    structure_maps,
    tensor_maps,
)
from opspace_toolkit.spaces.tensor import (
    canonical_bilinear,
    delinearize,
    elementary,
    projectivity_probe,
    scalar_multiplication,
    symmetry,
)

FAST = Budget(restarts=3, iterations=40, seed=9)


@pytest.fixture
def C():
    return scalars(FAST)


@pytest.fixture
def D2():
    return make_concrete(2, [matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)], "D_2", FAST)


class TestTensorSpace:
    """Test norms on X (x)^ Y"""

    def test_elementary_shape(self):
        """Test elementary shape"""
        x = LevelElement.from_vector([2.0])
        y = LevelElement.from_scalar_grid(np.eye(2), [1.0, 0.0])
        t = elementary(x, y)
        assert (t.level, t.dim) == (2, 2)
        assert np.allclose(t.coords[:, :, 0], 2 * np.eye(2))

    def test_cross_norm(self, C, D2):
        """Test cross norm"""
        T = proj_tensor(C, D2)
        value = T.norm(elementary(LevelElement.from_vector([1.0]), LevelElement.from_vector([1.0, 3.0])))
        assert value.hi <= 3.0 * (1 + 1e-6)
        assert value.lo >= 3.0 / 1.05

    def test_dimension(self, C, D2):
        """Test dimension"""
        T = proj_tensor(D2, D2)
        assert T.dim == 4
        assert T.left is D2 and T.right is D2


class TestBilinearMaps:
    """Test bilinear maps and linearization"""

    def test_coefficient_shape(self, C, D2):
        """Test coefficient shape"""
        with pytest.raises(ShapeMismatchError):
            BilinMap(C, D2, C, np.ones((1, 2, 2)))

    def test_evaluation(self, C, D2):
        """Test evaluation"""
        u = BilinMap(D2, D2, C, np.eye(2).reshape(1, 2, 2), "pairing")
        out = u(LevelElement.from_vector([1.0, 2.0]), LevelElement.from_vector([3.0, 4.0]))
        assert out.coords[0, 0, 0] == pytest.approx(11.0)

    def test_linearize_round_trip(self, D2, C):
        """Test linearize round trip"""
        u = BilinMap(D2, D2, C, np.arange(4.0).reshape(1, 2, 2))
        assert np.allclose(delinearize(linearize(u)).coeff, u.coeff)

    def test_delinearize_needs_tensor_domain(self, D2):
        """Test delinearize needs tensor domain"""
        with pytest.raises(InvalidInputError):
            delinearize(identity_map(D2))

    def test_canonical_bilinear_is_elementary(self, C, D2):
        """Test canonical bilinear is elementary"""
        pi = canonical_bilinear(C, D2)
        x, y = LevelElement.from_vector([2.0]), LevelElement.from_vector([1.0, -1.0])
        assert np.allclose(pi(x, y).coords, elementary(x, y).coords)

    def test_scalar_multiplication_jcb_norm(self):
        """Test scalar multiplication jcb norm"""
        value = jcb_norm(scalar_multiplication(), budget=FAST)
        assert value.is_exact
        assert value.hi == pytest.approx(1.0)

    def test_jcb_caps_must_be_positive(self):
        """Test jcb caps must be positive"""
        with pytest.raises(InvalidInputError):
            jcb_norm(scalar_multiplication(), caps=(0, 1), budget=FAST)


class TestMonoidalStructure:
    """Test functoriality, structure maps and coherence"""

    def test_tensor_maps(self, C, D2):
        """Test tensor maps"""
        u = tensor_maps(identity_map(C), identity_map(D2).scale(0.5))
        assert np.allclose(u.coeff, 0.5 * np.eye(2))
        assert u.cb_bound == pytest.approx(0.5)

    def test_coherence_residuals_vanish(self, C, D2):
        """Test coherence residuals vanish"""
        maps = structure_maps(C, D2, C)
        assert set(maps.coherence) == {"pentagon", "triangle", "hexagon", "involution", "unit"}
        assert maps.max_residual() == 0.0
        assert len(maps.all_maps()) == 4

    def test_symmetry_swaps_factors(self, D2):
        """Test symmetry swaps factors"""
        s = symmetry(D2, proj_tensor(D2, scalars(FAST)))
        assert np.allclose(symmetry(s.cod.left, s.cod.right).coeff @ s.coeff, np.eye(4))

    def test_projectivity_of_quotient_map(self, C, D2):
        """Test projectivity of quotient map"""
        Q, q = quotient(D2, [[1, -1]])
        report = projectivity_probe(q, C, samples=2, seed=1)
        assert report.samples == 2
        assert report.max_image_hi < 1.0 + 1e-6
        assert report.to_dict()["quotient_verdict"] == "undecided"
