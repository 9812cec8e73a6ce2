"""
matrices/tests.py

Covers:
  - matrix_exp             : identity, diagonal, rotation-scaling pair, semigroup law
  - solve_sylvester        : scalar case, quadrature oracle, spectrum conflict
  - branched_sqrt          : ℂ⁺ → ℂ⁺, k² = λ² − μ², cut rejection
  - time_generator         : scalar cases, eig vs contour, Jordan input, commutation
  - matrix_inverse / det   : simple cases, residual, singular input
  - as_complex_matrix      : shape and finiteness validation
"""

import numpy as np
from django.test import SimpleTestCase

from matrices.models import BranchedSqrtMap
from matrices.services import (
    BranchCutError,
    MatrixError,
    SingularMatrixError,
    SpectrumConflictError,
    as_complex_matrix,
    branched_sqrt,
    generator_symbol,
    matrix_det,
    matrix_exp,
    matrix_inverse,
    smallest_singular_value,
    solve_sylvester,
    sylvester_quadrature,
    time_evolution,
    time_generator,
)


def _make_stable(rng, n: int, shift: float = 3.0) -> np.ndarray:
    """Random complex matrix with spectrum pushed into the right half-plane."""
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m / np.sqrt(n) + shift * np.eye(n)


# ── matrix_exp ─────────────────────────────────────────────────────────────────

class MatrixExpTests(SimpleTestCase):
    def test_zero_time_is_identity(self):
        a = _make_stable(np.random.default_rng(0), 4)
        np.testing.assert_array_equal(matrix_exp(a, 0.0), np.eye(4))

    def test_diagonal(self):
        d = np.array([0.5, -1.0 + 2j, 3.0])
        np.testing.assert_allclose(matrix_exp(np.diag(d), 0.7), np.diag(np.exp(0.7 * d)), rtol=1e-12)

    def test_rotation_scaling_pair(self):
        a, omega, x = 0.8, 1.3, 0.9
        mat = np.array([[a, omega], [-omega, a]])
        c, s = np.cos(omega * x), np.sin(omega * x)
        expected = np.exp(-a * x) * np.array([[c, -s], [s, c]])
        np.testing.assert_allclose(matrix_exp(mat, -x), expected, rtol=1e-12, atol=1e-14)

    def test_semigroup(self):
        rng = np.random.default_rng(1)
        for _ in range(10):
            a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            s, u = rng.uniform(-1, 1, size=2)
            lhs = matrix_exp(a, s + u)
            rhs = matrix_exp(a, s) @ matrix_exp(a, u)
            self.assertLess(np.linalg.norm(lhs - rhs), 1e-9 * np.linalg.norm(lhs))

    def test_non_square(self):
        with self.assertRaises(MatrixError):
            matrix_exp(np.ones((2, 3)))


# ── solve_sylvester ────────────────────────────────────────────────────────────

class SolveSylvesterTests(SimpleTestCase):
    def test_scalar_multiple_of_identity(self):
        rng = np.random.default_rng(2)
        a = 1.7
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        np.testing.assert_allclose(solve_sylvester(a * np.eye(4), m), m / (2 * a), rtol=1e-12)

    def test_residual(self):
        rng = np.random.default_rng(3)
        a = _make_stable(rng, 6)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        p = solve_sylvester(a, m)
        residual = np.linalg.norm(a @ p + p @ a - m)
        bound = 1e-10 * (np.linalg.norm(a) * np.linalg.norm(p) + np.linalg.norm(m))
        self.assertLessEqual(residual, bound)

    def test_matches_quadrature(self):
        rng = np.random.default_rng(4)
        a = _make_stable(rng, 6)
        m = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        p = solve_sylvester(a, m)
        oracle = sylvester_quadrature(a, m)
        self.assertLess(np.linalg.norm(p - oracle), 1e-8 * np.linalg.norm(p))

    def test_spectrum_conflict(self):
        with self.assertRaises(SpectrumConflictError):
            solve_sylvester(np.diag([1.0, -1.0]), np.eye(2))

    def test_shape_mismatch(self):
        with self.assertRaises(MatrixError):
            solve_sylvester(np.eye(2), np.eye(4))


# ── branched_sqrt ──────────────────────────────────────────────────────────────

class BranchedSqrtTests(SimpleTestCase):
    def test_zero_amplitude_is_identity_map(self):
        branch = BranchedSqrtMap(0.0)
        for lam in (1 + 1j, -2 + 0.5j, 3j):
            self.assertAlmostEqual(branched_sqrt(branch, lam), lam)

    def test_imaginary_axis(self):
        mu, scale = 1.5, 0.8
        k = branched_sqrt(BranchedSqrtMap(mu), 1j * mu * scale)
        self.assertAlmostEqual(k, 1j * mu * np.sqrt(scale**2 + 1), places=12)

    def test_asymptotic(self):
        mu, radius = 1.0, 1e4
        lam = radius * np.exp(1j * np.pi / 4)
        k = branched_sqrt(BranchedSqrtMap(mu), lam)
        self.assertLess(abs(k / lam - 1), 10 * mu**2 / radius**2)

    def test_upper_half_plane_and_square(self):
        rng = np.random.default_rng(5)
        branch = BranchedSqrtMap(1.2)
        for _ in range(200):
            lam = complex(rng.uniform(-5, 5), rng.uniform(1e-3, 5))
            k = branched_sqrt(branch, lam)
            self.assertGreater(k.imag, 0.0)
            self.assertLess(abs(k**2 - (lam**2 - branch.mu**2)), 1e-12 * (abs(lam) ** 2 + 1))

    def test_odd(self):
        branch = BranchedSqrtMap(0.7)
        lam = 0.3 + 1.1j
        self.assertAlmostEqual(branched_sqrt(branch, -lam), -branched_sqrt(branch, lam))

    def test_on_cut(self):
        with self.assertRaises(BranchCutError):
            branched_sqrt(BranchedSqrtMap(1.0), 0.5)

    def test_negative_amplitude_rejected(self):
        with self.assertRaises(ValueError):
            BranchedSqrtMap(-1.0)


# ── time_generator ─────────────────────────────────────────────────────────────

class TimeGeneratorTests(SimpleTestCase):
    def test_zero_amplitude_scalar(self):
        a = 0.9
        h = time_generator(a * np.eye(2), BranchedSqrtMap(0.0))
        np.testing.assert_allclose(h, -2j * a**2 * np.eye(2), atol=1e-13)

    def test_scalar_with_background(self):
        a, mu = 0.9, 1.3
        h = time_generator(a * np.eye(2), BranchedSqrtMap(mu))
        expected = -1j * (2 * a * np.sqrt(a**2 + mu**2) + mu**2) * np.eye(2)
        np.testing.assert_allclose(h, expected, atol=1e-12)

    def test_scalar_symbol(self):
        a, mu = 0.9, 1.3
        value = generator_symbol(BranchedSqrtMap(mu), 1j * a)
        self.assertAlmostEqual(value, -1j * (2 * a * np.sqrt(a**2 + mu**2) + mu**2))

    def test_contour_matches_eigendecomposition(self):
        rng = np.random.default_rng(6)
        branch = BranchedSqrtMap(0.8)
        for _ in range(5):
            a = _make_stable(rng, 4, shift=2.0)
            by_eig = time_generator(a, branch, method="eig")
            by_contour = time_generator(a, branch, method="contour")
            self.assertLess(np.linalg.norm(by_eig - by_contour), 1e-8 * np.linalg.norm(by_eig))

    def test_jordan_input_uses_derivative(self):
        a, mu = 1.1, 0.6
        branch = BranchedSqrtMap(mu)
        nilpotent = np.zeros((4, 4))
        nilpotent[0, 2] = nilpotent[1, 3] = 1.0
        mat = a * np.eye(4) + nilpotent
        h = time_generator(mat, branch)
        lam = 1j * a
        k = branched_sqrt(branch, lam)
        derivative = 2j * (k + lam**2 / k)
        expected = generator_symbol(branch, lam) * np.eye(4) + derivative * 1j * nilpotent
        np.testing.assert_allclose(h, expected, atol=1e-8)

    def test_commutes_with_a(self):
        rng = np.random.default_rng(7)
        a = _make_stable(rng, 6)
        h = time_generator(a, BranchedSqrtMap(1.0))
        self.assertLessEqual(
            np.linalg.norm(h @ a - a @ h), 1e-8 * np.linalg.norm(h) * np.linalg.norm(a)
        )

    def test_spectrum_on_cut(self):
        # iA has eigenvalue 0.5, inside [−1, 1].
        with self.assertRaises(BranchCutError):
            time_generator(np.array([[-0.5j]]), BranchedSqrtMap(1.0))

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            time_generator(np.eye(2), BranchedSqrtMap(1.0), method="pade")

    def test_time_evolution_of_scalar(self):
        a, mu, t = 0.9, 1.3, 0.4
        phase = -1j * (2 * a * np.sqrt(a**2 + mu**2) + mu**2)
        np.testing.assert_allclose(
            time_evolution(a * np.eye(2), BranchedSqrtMap(mu), t), np.exp(t * phase) * np.eye(2), atol=1e-12
        )


# ── matrix_inverse / matrix_det ────────────────────────────────────────────────

class InverseAndDeterminantTests(SimpleTestCase):
    def test_identity(self):
        np.testing.assert_allclose(matrix_inverse(np.eye(3)), np.eye(3))
        self.assertAlmostEqual(matrix_det(np.eye(3)), 1.0)

    def test_diagonal(self):
        np.testing.assert_allclose(matrix_inverse(np.diag([2.0, 4.0])), np.diag([0.5, 0.25]))
        self.assertAlmostEqual(matrix_det(np.diag([2.0, 4.0])), 8.0)

    def test_random_well_conditioned(self):
        a = _make_stable(np.random.default_rng(8), 8)
        self.assertLess(np.linalg.norm(a @ matrix_inverse(a) - np.eye(8)), 1e-10)

    def test_singular(self):
        with self.assertRaises(SingularMatrixError):
            matrix_inverse(np.array([[1.0, 2.0], [2.0, 4.0]]))

    def test_smallest_singular_value(self):
        self.assertAlmostEqual(smallest_singular_value(np.diag([3.0, 0.25])), 0.25)


# ── as_complex_matrix ──────────────────────────────────────────────────────────

class AsComplexMatrixTests(SimpleTestCase):
    def test_rejects_nan(self):
        with self.assertRaises(MatrixError):
            as_complex_matrix([[1.0, np.nan]])

    def test_rejects_vector(self):
        with self.assertRaises(MatrixError):
            as_complex_matrix([1.0, 2.0])

    def test_rejects_text(self):
        with self.assertRaises(MatrixError):
            as_complex_matrix([["a", "b"]])

    def test_square_requirement(self):
        with self.assertRaises(MatrixError):
            as_complex_matrix(np.ones((2, 4)), square=True)
