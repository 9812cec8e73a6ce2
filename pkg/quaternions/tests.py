"""
quaternions/tests.py

Covers:
  - phi / phi_inverse       : basis table and real-algebra isomorphism
  - sigma_det               : squared quaternion length, multiplicativity
  - block_det               : Schur-complement determinant against a generic oracle
  - same_similarity_orbit   : orbit invariants, equivalence relation
  - jordan_block            : block bidiagonal shape, Jordan chains
  - is_sigma                : membership test and odd shapes
"""

import numpy as np
import scipy.linalg
from django.test import SimpleTestCase

from quaternions.models import SIGMA_2, Quaternion, SigmaBlockMatrix, SigmaMatrix
from quaternions.services import (
    QuaternionError,
    block_det,
    block_det_detail,
    direct_sum,
    is_sigma,
    jordan_block,
    phi,
    phi_inverse,
    same_similarity_orbit,
    sigma_det,
)


# ── Helpers ────────────────────────────────────────────────────────────────────

def _make_sigma(rng, box: float = 1.0) -> SigmaMatrix:
    re1, im1, re2, im2 = rng.uniform(-box, box, size=4)
    return SigmaMatrix(complex(re1, im1), complex(re2, im2))


def _make_block_matrix(rng, p: int) -> SigmaBlockMatrix:
    return SigmaBlockMatrix(tuple(tuple(_make_sigma(rng) for _ in range(p)) for _ in range(p)))


# ── phi / phi_inverse ──────────────────────────────────────────────────────────

class PhiTests(SimpleTestCase):
    def test_identity_maps_to_one(self):
        self.assertEqual(phi(SigmaMatrix.identity()), Quaternion(1.0, 0.0, 0.0, 0.0))

    def test_i_sigma3_maps_to_i(self):
        self.assertEqual(phi(SigmaMatrix(1j, 0)), Quaternion(0.0, 1.0, 0.0, 0.0))

    def test_mapping_formula(self):
        self.assertEqual(phi(SigmaMatrix(2 + 3j, 4 + 5j)), Quaternion(2.0, 3.0, -4.0, 5.0))

    def test_basis_table_matches_pauli_matrices(self):
        i_sigma2 = 1j * SIGMA_2
        j_image = phi_inverse(Quaternion(0, 0, 1, 0)).as_array()
        np.testing.assert_allclose(j_image, i_sigma2)
        k_image = phi_inverse(Quaternion(0, 0, 0, 1)).as_array()
        np.testing.assert_allclose(k_image, 1j * np.array([[0, 1], [1, 0]]))

    def test_inverse_of_j(self):
        s = phi_inverse(Quaternion(0, 0, 1, 0))
        self.assertEqual((s.s1, s.s2), (0j, -1 + 0j))

    def test_inverse_of_example(self):
        s = phi_inverse(Quaternion(2, 3, -4, 5))
        self.assertEqual((s.s1, s.s2), (2 + 3j, 4 + 5j))

    def test_round_trip_is_exact(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            q = Quaternion(*rng.normal(size=4))
            self.assertEqual(phi(phi_inverse(q)), q)

    def test_multiplicative(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            s, t = _make_sigma(rng), _make_sigma(rng)
            lhs = np.array(phi(s @ t).as_tuple())
            rhs = np.array((phi(s) * phi(t)).as_tuple())
            np.testing.assert_allclose(lhs, rhs, atol=1e-14)

    def test_real_linear(self):
        rng = np.random.default_rng(3)
        s, t = _make_sigma(rng), _make_sigma(rng)
        alpha, beta = 0.7, -2.5
        lhs = np.array(phi(s.scale(alpha) + t.scale(beta)).as_tuple())
        rhs = np.array((phi(s) * alpha + phi(t) * beta).as_tuple())
        np.testing.assert_allclose(lhs, rhs, atol=1e-14)

    def test_matrix_product_matches_realization(self):
        rng = np.random.default_rng(4)
        s, t = _make_sigma(rng), _make_sigma(rng)
        np.testing.assert_allclose((s @ t).as_array(), s.as_array() @ t.as_array(), atol=1e-14)


# ── sigma_det ──────────────────────────────────────────────────────────────────

class SigmaDetTests(SimpleTestCase):
    def test_identity(self):
        self.assertEqual(sigma_det(SigmaMatrix.identity()), 1.0)

    def test_three_i_four(self):
        s = SigmaMatrix(3j, 4)
        self.assertAlmostEqual(sigma_det(s), 25.0)
        self.assertAlmostEqual(np.linalg.det(s.as_array()).real, 25.0)

    def test_zero(self):
        self.assertEqual(sigma_det(SigmaMatrix.zero()), 0.0)

    def test_equals_quaternion_length(self):
        s = SigmaMatrix(1 - 2j, 0.5 + 3j)
        self.assertAlmostEqual(sigma_det(s), phi(s).norm_squared())

    def test_multiplicative(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            s, t = _make_sigma(rng), _make_sigma(rng)
            self.assertAlmostEqual(sigma_det(s @ t), sigma_det(s) * sigma_det(t), places=12)

    def test_inverse(self):
        s = SigmaMatrix(1 + 1j, 2 - 1j)
        np.testing.assert_allclose((s @ s.inverse()).as_array(), np.eye(2), atol=1e-14)


# ── block_det ──────────────────────────────────────────────────────────────────

class BlockDetTests(SimpleTestCase):
    def test_identity(self):
        for p in range(1, 5):
            self.assertAlmostEqual(block_det(SigmaBlockMatrix.identity(p)), 1.0)

    def test_block_diagonal(self):
        s = SigmaMatrix(3j, 4)
        m = direct_sum(jordan_block(s, 1), SigmaBlockMatrix.identity(1))
        self.assertAlmostEqual(block_det(m), 25.0, places=10)

    def test_zero_first_column(self):
        rng = np.random.default_rng(6)
        m = _make_block_matrix(rng, 3).as_array()
        m[:, 0:2] = 0.0
        result = block_det_detail(m)
        self.assertEqual(result.value, 0.0)
        self.assertTrue(result.near_singular)

    def test_pivot_when_leading_block_vanishes(self):
        s, t = SigmaMatrix(1 + 2j, 0.5), SigmaMatrix(-1, 1j)
        m = SigmaBlockMatrix(((SigmaMatrix.zero(), s), (t, SigmaMatrix.identity())))
        oracle = np.linalg.det(m.as_array()).real
        self.assertAlmostEqual(block_det(m), oracle, places=10)
        self.assertGreater(block_det(m), 0.0)

    def test_random_against_generic_determinant(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            p = int(rng.integers(1, 6))
            m = _make_block_matrix(rng, p)
            realized = m.as_array()
            oracle = scipy.linalg.det(realized)
            bound = float(np.prod(np.linalg.norm(realized, axis=0)))
            result = block_det_detail(m)
            self.assertGreaterEqual(result.value, -1e-8 * bound)
            self.assertLess(abs(oracle.imag), 1e-10 * bound)
            if not result.near_singular:
                self.assertLessEqual(
                    abs(result.value - oracle.real),
                    1e-10 * abs(oracle.real) + 1e-13 * bound,
                )


# ── same_similarity_orbit ──────────────────────────────────────────────────────

class SimilarityOrbitTests(SimpleTestCase):
    def test_reflexive(self):
        s = SigmaMatrix(1 + 2j, 3 - 1j)
        self.assertTrue(same_similarity_orbit(s, s))

    def test_orbit_condition(self):
        self.assertTrue(same_similarity_orbit(SigmaMatrix(1 + 2j, 0), SigmaMatrix(1, 2)))

    def test_different_real_part(self):
        self.assertFalse(same_similarity_orbit(SigmaMatrix(1, 0), SigmaMatrix(2, 0)))

    def test_conjugation_stays_in_orbit(self):
        rng = np.random.default_rng(8)
        s, g = _make_sigma(rng), _make_sigma(rng)
        t = g @ s @ g.inverse()
        self.assertTrue(same_similarity_orbit(s, t, tol=1e-12))

    def test_equivalence_relation_on_exact_inputs(self):
        sample = [
            SigmaMatrix(1 + 2j, 0),
            SigmaMatrix(1, 2),
            SigmaMatrix(1 + 0j, 2j),
            SigmaMatrix(2, 0),
            SigmaMatrix(1 - 2j, 0),
        ]
        for s in sample:
            self.assertTrue(same_similarity_orbit(s, s))
            for t in sample:
                self.assertEqual(same_similarity_orbit(s, t), same_similarity_orbit(t, s))
                for u in sample:
                    if same_similarity_orbit(s, t) and same_similarity_orbit(t, u):
                        self.assertTrue(same_similarity_orbit(s, u))

    def test_negative_tol_rejected(self):
        with self.assertRaises(ValueError):
            same_similarity_orbit(SigmaMatrix(1), SigmaMatrix(1), tol=-1.0)


# ── jordan_block ───────────────────────────────────────────────────────────────

class JordanBlockTests(SimpleTestCase):
    def test_order_one(self):
        a = SigmaMatrix(2 + 1j, 0.5)
        j = jordan_block(a, 1)
        self.assertEqual(j.p, 1)
        self.assertEqual(j.block(0, 0), a)

    def test_order_two_layout(self):
        a = SigmaMatrix(2 + 1j, 0.5)
        j = jordan_block(a, 2)
        self.assertEqual(j.block(0, 0), a)
        self.assertEqual(j.block(1, 1), a)
        self.assertEqual(j.block(0, 1), SigmaMatrix.identity())
        self.assertEqual(j.block(1, 0), SigmaMatrix.zero())

    def test_scalar_block_has_two_chains_of_length_two(self):
        a = 1.5
        realized = jordan_block(SigmaMatrix(a), 2).as_array()
        shifted = realized - a * np.eye(4)
        self.assertEqual(np.linalg.matrix_rank(shifted), 2)
        np.testing.assert_allclose(shifted @ shifted, np.zeros((4, 4)), atol=1e-14)

    def test_rejects_zero_order(self):
        with self.assertRaises(ValueError):
            jordan_block(SigmaMatrix(1), 0)


# ── is_sigma ───────────────────────────────────────────────────────────────────

class IsSigmaTests(SimpleTestCase):
    def test_identity(self):
        self.assertTrue(is_sigma(np.eye(4)))

    def test_distinct_real_diagonal(self):
        self.assertFalse(is_sigma(np.diag([1.0, 2.0])))

    def test_built_from_blocks(self):
        rng = np.random.default_rng(9)
        self.assertTrue(is_sigma(_make_block_matrix(rng, 3).as_array(), tol=0.0))

    def test_rectangular_block_columns(self):
        column = np.vstack([SigmaMatrix(1, 2j).as_array(), SigmaMatrix(-1j, 3).as_array()])
        self.assertTrue(is_sigma(column))

    def test_odd_dimension(self):
        with self.assertRaises(QuaternionError):
            is_sigma(np.eye(3))

    def test_from_array_round_trip(self):
        rng = np.random.default_rng(10)
        m = _make_block_matrix(rng, 2)
        self.assertEqual(SigmaBlockMatrix.from_array(m.as_array(), tol=0.0), m)
