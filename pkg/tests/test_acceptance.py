"""
Acceptance tests
End-to-end identities on random instances, with fixed seeds
"""

import json
import math

import numpy as np
import pytest

from opspace_toolkit.coalgebra import Coalgebra, check_laws, trivial_coalgebra
from opspace_toolkit.colimits import (
    ColimitElement,
    amplified_chain,
    colimit_norm,
    explicit_chain,
    factorization_probe,
    scalar_exp_chain,
    truncation_chain,
)
from opspace_toolkit.colimits.chain import amplify_element, decaying_target, landing_target
from opspace_toolkit.core.config import Budget
from opspace_toolkit.linalg.matrix_core import complex_gaussian, matrix_unit
from opspace_toolkit.spaces import (
    LevelElement,
    OSMap,
    TensorSpace,
    coequaliser,
    coproduct,
    equaliser,
    is_complete_contraction,
    is_complete_isometry,
    is_complete_quotient,
    make_concrete,
    product,
    quotient,
    random_concrete,
    scalars,
    structure_maps,
    verify_universal,
)
from opspace_toolkit.spaces.ospace import check_ruan
from opspace_toolkit.spaces.tensor import elementary, left_unitor, right_unitor, symmetry
from opspace_toolkit.spaces.trace_class import identity_grid, lemma_contraction
from opspace_toolkit.testing import SuiteRunner

SEED = 20240601
ACCEPT = Budget(restarts=4, iterations=60, level_cap=3, depth=40, seed=SEED)


def rng_for(*key: int) -> np.random.Generator:
    return np.random.default_rng([SEED, *key])


def unit_ball_element(X, rng, level):
    x = X.random_element(rng, level)
    return x * (0.999 / X.norm(x).hi)


class TestRuanAxioms:
    """Direct sums of levels are isometric on random concrete spaces"""

    def test_m1_equality(self):
        """Test m1 equality"""
        for t in range(10):
            rng = rng_for(1, t)
            ambient = int(rng.integers(2, 5))
            X = random_concrete(rng, ambient, int(rng.integers(1, 5)), budget=ACCEPT)
            report = check_ruan(X, 3, 200, SEED + t)
            assert report.max_m1_violation <= 1e-8, X.name
            assert report.passed()


class TestCrossNorm:
    """Elementary tensors have norm ||x|| ||y||"""

    def test_elementary_tensors(self):
        """Test elementary tensors"""
        for t in range(25):
            rng = rng_for(2, t)
            X = random_concrete(rng, 2, int(rng.integers(1, 4)), budget=ACCEPT)
            Y = random_concrete(rng, 2, int(rng.integers(1, 4)), budget=ACCEPT)
            x, y = X.random_element(rng, 1), Y.random_element(rng, 1)
            expected = X.norm(x).hi * Y.norm(y).hi
            value = TensorSpace(X, Y).norm(elementary(x, y))
            assert value.contains(expected, slack=1e-6 * max(1.0, expected))
            assert value.hi <= 1.05 * value.lo


class TestTraceClassLemma:
    """Unit-ball grids come from complete contractions out of T_2"""

    def test_recovery_and_contraction(self):
        """Test recovery and contraction"""
        t_id = identity_grid(2)
        for t in range(20):
            rng = rng_for(3, t)
            X = random_concrete(rng, 2, int(rng.integers(1, 5)), budget=ACCEPT)
            x = unit_ball_element(X, rng, 2)
            u = lemma_contraction(X, x)
            assert (u(t_id) - x).max_abs() <= 1e-12
            bare = OSMap(u.dom, u.cod, u.coeff)
            assert is_complete_contraction(bare, 4, budget=ACCEPT).holds
            assert is_complete_contraction(OSMap(u.dom, u.cod, 3 * u.coeff), 4, budget=ACCEPT).fails


class TestProducts:
    """Product norms are maxima of block norms"""

    def test_block_maximum(self):
        """Test block maximum"""
        rng = rng_for(4)
        spaces = [random_concrete(rng, 2, 2, budget=ACCEPT), random_concrete(rng, 3, 2, budget=ACCEPT)]
        P, projections, inclusions = product(spaces)
        for t in range(100):
            x = P.random_element(rng, 1 + t % 3)
            blocks = max(X.norm(P.block(x, i)).hi for i, X in enumerate(spaces))
            assert P.norm(x).hi == pytest.approx(blocks, rel=1e-9, abs=1e-12)
        for p in projections:
            assert is_complete_quotient(p, 3, 4, 1e-6, ACCEPT).holds
        for j in inclusions:
            assert is_complete_isometry(j, 3, 8, 1e-6, SEED).holds

    def test_coproduct_l1_and_universal_property(self):
        """Test coproduct l1 and universal property"""
        rng = rng_for(5)
        spaces = [scalars(ACCEPT), random_concrete(rng, 2, 2, budget=ACCEPT)]
        C, _, _ = coproduct(spaces)
        for t in range(20):
            x = C.random_element(rng, 1)
            parts = sum(X.norm(C.block(x, i)).hi for i, X in enumerate(spaces))
            assert C.norm(x).hi == pytest.approx(parts, rel=1e-8)
        report = verify_universal("coproduct", spaces, 50, SEED)
        assert report.residual_commute <= 1e-9
        assert report.residual_unique <= 1e-9
        assert report.unique


class TestQuotients:
    """Quotient norms against a grid over the coset"""

    GRID = np.arange(-2.0, 2.0 + 1e-4, 1e-4)

    def test_against_grid(self):
        """Test against grid"""
        D2 = make_concrete(2, [matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)], "D_2", ACCEPT)
        for t in range(20):
            rng = rng_for(6, t)
            direction = rng.uniform(0.5, 1.5, 2) * rng.choice([-1.0, 1.0], 2)
            x = rng.uniform(-1.0, 1.0, 2)
            Q, q = quotient(D2, [direction])
            value = Q.norm(q(LevelElement.from_vector(x)))
            # diagonal entries are real, so the best coset coefficient is real
            grid = np.max(np.abs(x[:, None] + direction[:, None] * self.GRID[None, :]), axis=0).min()
            assert abs(value.hi - grid) <= 1e-3
            assert value.lo <= grid + 1e-3

    def test_quotient_maps_are_complete_quotients(self):
        """Test quotient maps are complete quotients"""
        D2 = make_concrete(2, [matrix_unit(2, 0, 0), matrix_unit(2, 1, 1)], "D_2", ACCEPT)
        rng = rng_for(6, 100)
        X = random_concrete(rng, 2, 3, budget=ACCEPT)
        cases = [(D2, [rng.uniform(0.5, 1.5, 2) * rng.choice([-1.0, 1.0], 2)]) for _ in range(2)]
        cases.append((X, [complex_gaussian(rng, (3,))]))
        for base, kernel in cases:
            _, q = quotient(base, kernel)
            assert is_complete_quotient(q, 3, 3, 1e-6, ACCEPT).holds, base.name


class TestEqualisersAndCoequalisers:
    """Factorization residuals on random parallel pairs"""

    def test_random_pairs(self):
        """Test random pairs"""
        for t in range(50):
            rng = rng_for(7, t)
            wide = random_concrete(rng, 2, 4, budget=ACCEPT)
            narrow = random_concrete(rng, 2, 2, budget=ACCEPT)

            f = OSMap(wide, narrow, complex_gaussian(rng, (2, 4)), "f")
            g = OSMap(wide, narrow, complex_gaussian(rng, (2, 4)), "g")
            E, e = equaliser(f, g)
            assert E.dim == 2
            assert np.max(np.abs((f.coeff - g.coeff) @ e.coeff)) <= 1e-12
            assert verify_universal("equaliser", [f, g], 2, SEED + t).residual_commute <= 1e-12

            f = OSMap(narrow, wide, complex_gaussian(rng, (4, 2)), "f")
            g = OSMap(narrow, wide, complex_gaussian(rng, (4, 2)), "g")
            Q, q = coequaliser(f, g)
            assert Q.dim == 2
            assert np.max(np.abs(q.coeff @ (f.coeff - g.coeff))) <= 1e-12
            assert verify_universal("coequaliser", [f, g], 2, SEED + t).residual_commute <= 1e-12


class TestColimits:
    """Scalar limits, amplification and presentability"""

    def test_scalar_chain_limit(self):
        """Test scalar chain limit"""
        value = colimit_norm(scalar_exp_chain(40, ACCEPT), ColimitElement(0, LevelElement.from_vector([1.0])))
        assert value.interval.contains(0.1353352832, slack=1e-6)
        assert abs(value.values[-1] - math.exp(-2.0)) <= 1e-6
        assert all(b <= a + 1e-10 for a, b in zip(value.values, value.values[1:]))

    def test_amplified_chains_agree(self):
        """Test amplified chains agree"""
        for t in range(10):
            rng = rng_for(8, t)
            X = random_concrete(rng, 2, 2, budget=ACCEPT)
            factors = rng.uniform(0.2, 1.0, 2)
            d = explicit_chain([X, X, X], [f * np.eye(2) for f in factors], f"chain_{t}", depth=3)
            grid = ColimitElement(0, X.random_element(rng, 2))
            direct = colimit_norm(d, grid)
            amplified = colimit_norm(amplified_chain(d, 2), amplify_element(grid))
            assert abs(direct.interval.hi - amplified.interval.hi) <= 1e-8
            assert direct.interval.hi == pytest.approx(factors.prod() * X.norm(grid.element).hi, rel=1e-9)
            assert all(b <= a + 1e-10 for a, b in zip(direct.values, direct.values[1:]))

    @pytest.mark.parametrize("depth", range(1, 51))
    def test_limit_vector_never_factors(self, depth):
        """Test limit vector never factors"""
        d = truncation_chain(depth, ACCEPT)
        result = factorization_probe(d, scalars(ACCEPT), lambda k: np.ones((k, 1)), depth=depth, budget=ACCEPT)
        assert not result.found

    @pytest.mark.parametrize("depth", range(1, 51))
    def test_decaying_tail_never_factors(self, depth):
        """Test decaying tail never factors"""
        d = truncation_chain(depth, ACCEPT)
        result = factorization_probe(d, scalars(ACCEPT), decaying_target(), depth=depth, budget=ACCEPT)
        assert not result.found
        assert result.obstruction["depth"] == depth

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_finite_support_factors(self, k):
        """Test finite support factors"""
        d = truncation_chain(8, ACCEPT)
        f = OSMap(scalars(ACCEPT), d.stage(k), np.ones((k, 1)), f"ones_{k}")
        result = factorization_probe(d, scalars(ACCEPT), landing_target(d, f, k), depth=8, budget=ACCEPT)
        assert result.stage == k


class TestCoalgebras:
    """Trivial coalgebra passes, corrupted counits fail predictably"""

    def test_trivial(self):
        """Test trivial"""
        report = check_laws(trivial_coalgebra(), 2, budget=ACCEPT)
        assert all(r == 0.0 for r in report.residuals.values())
        assert report.counit_contraction.holds

    def test_doubled_counit(self):
        """Test doubled counit"""
        report = check_laws(Coalgebra(scalars(ACCEPT), [[1.0]], [[2.0]]), 1, budget=ACCEPT)
        assert report.residuals["left_counit"] == 1.0
        assert report.residuals["right_counit"] == 1.0

    def test_doubled_comultiplication(self):
        """Test doubled comultiplication"""
        report = check_laws(Coalgebra(scalars(ACCEPT), [[2.0]], [[1.0]]), 2, budget=ACCEPT)
        assert report.residuals["left_counit"] == 1.0
        assert report.comul_contraction.fails


class TestMonoidalCoherence:
    """Structure maps satisfy coordinate identities and are isometric"""

    def test_coherence_residuals(self):
        """Test coherence residuals"""
        rng = rng_for(9)
        X = random_concrete(rng, 2, 2, budget=ACCEPT)
        assert structure_maps(X, scalars(ACCEPT), X).max_residual() == 0.0

    @pytest.mark.parametrize("slot", [0, 1, 2])
    def test_structure_maps_are_complete_isometries(self, slot):
        """Test structure maps are complete isometries"""
        rng = rng_for(9, slot)
        X = random_concrete(rng, 2, 2, budget=ACCEPT)
        factors = [scalars(ACCEPT)] * 3
        factors[slot] = X
        maps = structure_maps(*factors)
        assert maps.max_residual() == 0.0
        C = scalars(ACCEPT)
        for u in [*maps.all_maps(), left_unitor(X), right_unitor(X), symmetry(X, C), symmetry(C, X)]:
            assert is_complete_isometry(u, 3, 6, 1e-6, SEED).holds, u.name


class TestDeterminism:
    """Same seed, same bytes"""

    @pytest.mark.parametrize("suite", ["ruan", "coproduct", "colimit"])
    def test_suite_reports_are_identical(self, suite):
        """Test suite reports are identical"""
        budget = Budget(restarts=4, iterations=60, level_cap=2, depth=40, seed=SEED)
        a = json.dumps(SuiteRunner(budget).run(suite).to_dict(), sort_keys=True)
        b = json.dumps(SuiteRunner(budget).run(suite).to_dict(), sort_keys=True)
        assert a == b
