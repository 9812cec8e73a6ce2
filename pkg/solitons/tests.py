"""
solitons/tests.py

Covers:
  - build                  : scalar example (P = BC/2a, q_l = q_r), rotation example
                             (closed-form P and det P), rejection, automatic phase
  - eval_q                 : both asymptotic limits, scalar closed form
  - eval_Q                 : Σ-structure at t = 0, decay, off-diagonal equals q_x
  - kernel_K               : rescaled vs bracket form, K(x, x) = ½∫Q, Σ-structure
  - transmission           : inverse pair, determinant ratio, large-λ limit, poles
  - gauge_transform        : simple values
  - singular_locus         : negative-multiple example, empty locus, endpoints
  - sample_grid            : NaN handling at singular points
"""

import math
from dataclasses import replace

import numpy as np
import scipy.integrate
from django.test import SimpleTestCase

from matrices.services import solve_sylvester
from quaternions.models import SIGMA_2, SigmaMatrix
from quaternions.services import is_sigma
from solitons.services import (
    SingularPointError,
    TransmissionPoleError,
    build,
    eval_Q,
    eval_q,
    gauge_transform,
    jost_closed_form,
    kernel_K,
    kernel_K_direct,
    omega_r,
    perturb_sylvester_solution,
    sample_grid,
    singular_locus,
    singularity_measure,
    transmission,
)
from triplets.factories import random_sigma, random_sigma_triplet, rotation_triplet, scalar_triplet
from triplets.services import TripletValidationError, contraction


# ── Helpers ────────────────────────────────────────────────────────────────────

def _make_scalar_solution(a=0.7, b=SigmaMatrix(1 + 0.5j, 0.3 - 0.2j), c=SigmaMatrix(0.8, -0.4 + 0.1j), mu=1.0, theta_r=0.3):
    return build(scalar_triplet(a, b, c, mu=mu, theta_r=theta_r))


def _make_rotation_solution(a=0.8, omega=1.1, b=SigmaMatrix(1 + 0.2j, 0.4), c=SigmaMatrix(0.7, 1j)):
    trial = rotation_triplet(a, omega, b, c, mu=1.0)
    gamma = contraction(trial, solve_sylvester(trial.A, trial.B @ trial.C))
    return build(replace(trial, mu=2.0 * abs(gamma) + 0.1, theta_r=None))


def _negative_multiple_solution(a=0.5, c=3.0):
    """B = I, C = −cI, so BC = −cI and the bracket vanishes at x = ln(c/2a)/(2a) when t = 0."""
    return build(scalar_triplet(a, SigmaMatrix(1.0), SigmaMatrix(-c), mu=1.0, theta_r=0.0))


def _conj_sym_defect(m: np.ndarray) -> float:
    """‖M* − σ₂Mσ₂‖ for a 2×2 matrix."""
    return float(np.linalg.norm(np.conj(m) - SIGMA_2 @ m @ SIGMA_2))


def _scalar_example_q(a, b, c, mu, theta_r, x, t):
    """Hand-expanded q for A = aI₂ with D = BC = [[d1, −conj d2], [d2, conj d1]]."""
    b1, b2, c1, c2 = b.s1, b.s2, c.s1, c.s2
    d = b.as_array() @ c.as_array()
    d1, d2 = d[0, 0], d[1, 0]
    phase = -1j * (2 * a * math.sqrt(a**2 + mu**2) + mu**2)
    kappa = math.exp(-2 * a * x) * np.exp(t * phase)
    det_m = (1 + kappa * d1 / (2 * a)) * (1 + kappa * np.conj(d1) / (2 * a)) + kappa**2 * abs(d2) ** 2 / (4 * a**2)
    bracket = -(c1 * np.conj(b2) + np.conj(c2) * np.conj(b1)) * kappa + (kappa**2 / (2 * a)) * (
        -c1 * np.conj(d1) * np.conj(b2)
        + c1 * np.conj(d2) * np.conj(b1)
        - np.conj(c2) * d2 * np.conj(b2)
        - np.conj(c2) * d1 * np.conj(b1)
    )
    q_r = mu * np.exp(1j * theta_r)
    return q_r + 2 * bracket / det_m


def _rotation_example_p(a, omega, d1, d2):
    """Closed-form P for A = [[a, ω], [−ω, a]] and D = BC."""
    w = -omega
    r1, r2 = 2 * d1.real, 2 * d2.real
    s = 4 * (a**2 + w**2)
    p11 = (d1 - np.conj(d1)) / (4 * a) + (a * r1 + w * r2) / s
    p21 = (d2 - np.conj(d2)) / (4 * a) + (a * r2 - w * r1) / s
    p12 = (d2 - np.conj(d2)) / (4 * a) + (-a * r2 + w * r1) / s
    return np.array([[p11, p12], [p21, np.conj(p11)]])


# ── build ──────────────────────────────────────────────────────────────────────

class BuildTests(SimpleTestCase):
    def test_scalar_example_sylvester_solution(self):
        b, c, a = SigmaMatrix(1 + 0.5j, 0.3 - 0.2j), SigmaMatrix(0.8, -0.4 + 0.1j), 0.7
        sol = _make_scalar_solution(a=a, b=b, c=c)
        np.testing.assert_allclose(sol.P, b.as_array() @ c.as_array() / (2 * a), atol=1e-14)

    def test_scalar_example_boundary_values_agree(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            mu = rng.uniform(0.5, 2.0)
            sol = build(scalar_triplet(rng.uniform(0.2, 3.0), random_sigma(rng), random_sigma(rng), mu=mu, theta_r=rng.uniform(-3, 3)))
            self.assertLessEqual(abs(sol.q_l - sol.q_r), 1e-10 * mu)

    def test_rotation_example_closed_form(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, omega = rng.uniform(0.3, 2.0), rng.uniform(0.2, 2.0) * rng.choice([-1, 1])
            b, c = random_sigma(rng), random_sigma(rng)
            cfg = rotation_triplet(a, omega, b, c, mu=1.0)
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            d = cfg.B @ cfg.C
            d1, d2 = d[0, 0], d[1, 0]
            expected = _rotation_example_p(a, omega, d1, d2)
            self.assertLess(np.abs(p - expected).max(), 1e-10 * np.abs(expected).max())
            det_expected = ((d1 + np.conj(d1)) ** 2 + (d2 + np.conj(d2)) ** 2).real / (16 * (a**2 + omega**2)) - (
                (d1 - np.conj(d1)) ** 2 + (d2 - np.conj(d2)) ** 2
            ).real / (16 * a**2)
            self.assertGreater(det_expected, 0.0)
            self.assertAlmostEqual(np.linalg.det(p).real / det_expected, 1.0, places=10)

    def test_rotation_solution_det_p(self):
        sol = _make_rotation_solution()
        self.assertAlmostEqual(sol.det_P, np.linalg.det(sol.P).real, places=12)
        self.assertGreater(sol.det_P, 0.0)

    def test_rejects_non_minimal(self):
        with self.assertRaises(TripletValidationError):
            build(scalar_triplet(1.0, SigmaMatrix.zero(), SigmaMatrix(1), mu=1.0))

    def test_automatic_phase_lands_on_circle(self):
        sol = _make_rotation_solution()
        self.assertAlmostEqual(abs(sol.q_l), sol.mu, places=10)
        self.assertAlmostEqual(abs(sol.q_r), sol.mu, places=12)
        self.assertNotAlmostEqual(sol.q_l, sol.q_r, places=3)

    def test_invariants(self):
        rng = np.random.default_rng(2)
        for p in (1, 2, 3):
            sol = build(random_sigma_triplet(rng, p))
            residual = np.linalg.norm(sol.A @ sol.P + sol.P @ sol.A - sol.B @ sol.C)
            self.assertLess(residual, 1e-10 * (np.linalg.norm(sol.A) * np.linalg.norm(sol.P) + np.linalg.norm(sol.B @ sol.C)))
            self.assertTrue(is_sigma(sol.P, tol=1e-9))
            commutator = np.linalg.norm(sol.H @ sol.A - sol.A @ sol.H)
            self.assertLess(commutator, 1e-8 * np.linalg.norm(sol.H) * np.linalg.norm(sol.A))

    def test_generator_is_anti_sigma(self):
        sol = build(random_sigma_triplet(np.random.default_rng(3), 2))
        self.assertTrue(is_sigma(1j * sol.H, tol=1e-8 * np.abs(sol.H).max()))

    def test_perturbed_p_breaks_sylvester(self):
        sol = _make_scalar_solution()
        broken = perturb_sylvester_solution(sol, 1e-3)
        residual = np.linalg.norm(broken.A @ broken.P + broken.P @ broken.A - broken.B @ broken.C)
        self.assertGreater(residual, 1e-6)
        self.assertFalse(is_sigma(broken.P, tol=1e-9))


# ── eval_q ─────────────────────────────────────────────────────────────────────

class EvalQTests(SimpleTestCase):
    def test_right_limit(self):
        sol = _make_rotation_solution()
        x = 25.0 / sol.alpha
        self.assertLess(abs(eval_q(sol, x, 0.3) - sol.q_r), 1e-10)

    def test_left_limit(self):
        sol = _make_rotation_solution()
        x = -25.0 / sol.alpha
        self.assertLess(abs(eval_q(sol, x, 0.3) - sol.q_l), 1e-10)

    def test_scalar_closed_form(self):
        rng = np.random.default_rng(4)
        a, mu, theta_r = 0.7, 1.2, 0.4
        b, c = SigmaMatrix(1 + 0.5j, 0.3 - 0.2j), SigmaMatrix(0.8, -0.4 + 0.1j)
        sol = build(scalar_triplet(a, b, c, mu=mu, theta_r=theta_r))
        for x, t in rng.uniform(-3, 3, size=(20, 2)):
            expected = _scalar_example_q(a, b, c, mu, theta_r, x, t)
            self.assertLess(abs(eval_q(sol, x, t) - expected), 1e-10 * max(1.0, abs(expected)))

    def test_singular_point_raises(self):
        sol = _negative_multiple_solution()
        with self.assertRaises(SingularPointError) as ctx:
            eval_q(sol, math.log(3.0), 0.0)
        self.assertAlmostEqual(ctx.exception.x, math.log(3.0))


# ── eval_Q ─────────────────────────────────────────────────────────────────────

class EvalBigQTests(SimpleTestCase):
    def test_sigma_structure_at_time_zero(self):
        rng = np.random.default_rng(5)
        sol = build(random_sigma_triplet(rng, 2))
        for x in rng.uniform(-4, 4, size=10):
            big_q = eval_Q(sol, x, 0.0)
            self.assertLess(_conj_sym_defect(big_q), 1e-9 * max(1.0, np.abs(big_q).max()))

    def test_decay(self):
        sol = _make_rotation_solution()
        near, far = (np.linalg.norm(eval_Q(sol, x, 0.0)) for x in (8.0, 12.0))
        self.assertLess(far, near * math.exp(-2 * sol.alpha * 4.0) * 2.0)

    def test_off_diagonal_is_x_derivative(self):
        sol = _make_rotation_solution()
        h = 1e-4
        for x, t in ((-1.0, 0.0), (0.3, 0.2), (1.5, -0.4)):
            q_x = (eval_q(sol, x + h, t) - eval_q(sol, x - h, t)) / (2 * h)
            self.assertLess(abs(eval_Q(sol, x, t)[0, 1] - q_x), 1e-6)


# ── kernel_K ───────────────────────────────────────────────────────────────────

class KernelTests(SimpleTestCase):
    def _assert_forms_agree(self, sol, limit, rng):
        for x in np.linspace(-limit, limit, 9):
            y = x + rng.uniform(0, 2)
            t = rng.uniform(-0.5, 0.5)
            rescaled = kernel_K(sol, x, y, t)
            direct = kernel_K_direct(sol, x, y, t)
            self.assertLess(np.abs(rescaled - direct).max(), 1e-9 * max(1.0, np.abs(direct).max()))

    def test_rescaled_matches_bracket_form(self):
        sol = _make_rotation_solution()
        self._assert_forms_agree(sol, 20.0 / sol.alpha, np.random.default_rng(6))

    def test_rescaled_matches_bracket_form_for_larger_blocks(self):
        # e^{−xA} is far from normal here, so the bracket form loses digits for large |x|.
        rng = np.random.default_rng(10)
        sol = build(random_sigma_triplet(rng, 2))
        self._assert_forms_agree(sol, 2.0 / sol.alpha, rng)

    def test_diagonal_is_half_integral_of_q(self):
        sol = _make_rotation_solution()
        x, t = -0.5, 0.2
        upper = x + 40.0 / sol.alpha
        integral, _ = scipy.integrate.quad_vec(lambda s: eval_Q(sol, s, t), x, upper, epsabs=1e-13, epsrel=1e-11)
        self.assertLess(np.abs(kernel_K(sol, x, x, t) - 0.5 * integral).max(), 1e-8)

    def test_sigma_structure_at_time_zero(self):
        sol = build(random_sigma_triplet(np.random.default_rng(7), 2))
        kernel = kernel_K(sol, 0.2, 0.9, 0.0)
        self.assertLess(_conj_sym_defect(kernel), 1e-9 * max(1.0, np.abs(kernel).max()))

    def test_omega_sigma_structure(self):
        sol = build(random_sigma_triplet(np.random.default_rng(8), 2))
        self.assertTrue(is_sigma(omega_r(sol, 0.7, 0.0), tol=1e-9))

    def test_rejects_y_below_x(self):
        with self.assertRaises(ValueError):
            kernel_K(_make_scalar_solution(), 1.0, 0.0, 0.0)

    def test_jost_closed_form_limits(self):
        sol = _make_rotation_solution()
        lam = 0.7 + 0.2j
        np.testing.assert_allclose(jost_closed_form(sol, 40.0 / sol.alpha, lam), np.eye(2), atol=1e-10)
        a_l, _ = transmission(sol, lam)
        np.testing.assert_allclose(jost_closed_form(sol, -40.0 / sol.alpha, lam), a_l, atol=1e-10)


# ── transmission ───────────────────────────────────────────────────────────────

class TransmissionTests(SimpleTestCase):
    def test_inverse_pair_and_determinant_ratio(self):
        rng = np.random.default_rng(9)
        for p in (1, 2, 3):
            sol = build(random_sigma_triplet(rng, p))
            n = 2 * p
            for _ in range(20):
                lam = complex(rng.uniform(-5, 5), rng.uniform(0.0, 0.5))
                a_l, a_l_inv = transmission(sol, lam)
                np.testing.assert_allclose(a_l @ a_l_inv, np.eye(2), atol=1e-9)
                ratio = np.linalg.det(lam * np.eye(n) + 1j * sol.A) / np.linalg.det(lam * np.eye(n) - 1j * sol.A)
                self.assertLess(abs(np.linalg.det(a_l_inv) - ratio), 1e-8 * max(1.0, abs(ratio)))

    def test_large_lambda(self):
        sol = _make_rotation_solution()
        a_l, _ = transmission(sol, 1e8 + 1e8j)
        np.testing.assert_allclose(a_l, np.eye(2), atol=1e-7)

    def test_pole(self):
        sol = _make_scalar_solution(a=0.7)
        with self.assertRaises(TransmissionPoleError):
            transmission(sol, -0.7j)


# ── gauge_transform ────────────────────────────────────────────────────────────

class GaugeTransformTests(SimpleTestCase):
    def test_time_zero(self):
        self.assertEqual(gauge_transform(2 + 1j, 0.0, 1.3), 2 + 1j)

    def test_modulus(self):
        self.assertAlmostEqual(abs(gauge_transform(2 + 1j, 0.77, 1.3)), abs(2 + 1j))

    def test_half_turn(self):
        self.assertAlmostEqual(gauge_transform(1.0, math.pi / 2, 1.0), -1.0)


# ── singular_locus ─────────────────────────────────────────────────────────────

class SingularLocusTests(SimpleTestCase):
    def test_negative_multiple_has_one_point(self):
        a, c = 0.5, 3.0
        sol = _negative_multiple_solution(a, c)
        report = singular_locus(sol, 0.0)
        self.assertEqual(report.count, 1)
        self.assertLess(abs(report.singular_points[0] - math.log(c / (2 * a)) / (2 * a)), 1e-6)

    def test_full_period_returns_the_same_point(self):
        a, c, mu = 0.5, 3.0, 1.0
        sol = _negative_multiple_solution(a, c)
        period = 2 * math.pi / (2 * a * math.sqrt(a**2 + mu**2) + mu**2)
        report = singular_locus(sol, period)
        self.assertEqual(report.count, 1)
        self.assertLess(abs(report.singular_points[0] - math.log(c / (2 * a)) / (2 * a)), 1e-6)

    def test_half_period_is_regular(self):
        a, c, mu = 0.5, 3.0, 1.0
        sol = _negative_multiple_solution(a, c)
        half = math.pi / (2 * a * math.sqrt(a**2 + mu**2) + mu**2)
        self.assertEqual(singular_locus(sol, half).count, 0)

    def test_nonzero_d2_is_regular(self):
        sol = build(scalar_triplet(0.5, SigmaMatrix(1.0), SigmaMatrix(-3.0, 0.5), mu=1.0, theta_r=0.0))
        self.assertEqual(singular_locus(sol, 0.0).count, 0)

    def test_endpoints_are_positive(self):
        sol = _negative_multiple_solution()
        report = singular_locus(sol, 0.0)
        self.assertGreater(min(report.endpoint_measures), report.threshold)

    def test_measure_vanishes_at_both_ends(self):
        sol = _make_rotation_solution()
        self.assertAlmostEqual(singularity_measure(sol, 60.0 / sol.alpha, 0.0), 0.0, places=8)
        self.assertAlmostEqual(singularity_measure(sol, -60.0 / sol.alpha, 0.0), 0.0, places=8)

    def test_too_few_samples(self):
        with self.assertRaises(ValueError):
            singular_locus(_make_scalar_solution(), 0.0, n_samples=1)


# ── sample_grid ────────────────────────────────────────────────────────────────

class SampleGridTests(SimpleTestCase):
    def test_shape_and_values(self):
        sol = _make_rotation_solution()
        xs, ts = np.linspace(-2, 2, 7), np.array([0.0, 0.5])
        grid = sample_grid(sol, xs, ts, workers=2)
        self.assertEqual(grid.q.shape, (2, 7))
        self.assertEqual(grid.singular_count, 0)
        self.assertAlmostEqual(grid.q[1, 3], eval_q(sol, xs[3], 0.5))

    def test_singular_point_is_nan(self):
        sol = _negative_multiple_solution()
        xs = np.array([-1.0, math.log(3.0), 2.0])
        grid = sample_grid(sol, xs, [0.0])
        self.assertEqual(grid.singular_count, 1)
        self.assertTrue(np.isnan(grid.q[0, 1]))
        self.assertFalse(np.isnan(grid.q[0, 0]))
