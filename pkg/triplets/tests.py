"""
triplets/tests.py

Covers:
  - check_spectrum                 : right half-plane test
  - controllability/observability  : rank oracle, Jordan-chain dichotomy, zero data
  - minimality                     : invariance under Σ-similarity
  - validate_triplet               : each rejection reason
  - compatible_phase / admissibility : γ = 0, antipodal phase, no-soliton, phase mismatch
"""

import math

import numpy as np
from django.test import SimpleTestCase

from matrices.services import matrix_inverse, smallest_singular_value, solve_sylvester
from quaternions.models import SigmaBlockMatrix, SigmaMatrix
from triplets.factories import (
    jordan_triplet,
    random_sigma,
    random_sigma_triplet,
    rotation_triplet,
    scalar_triplet,
)
from triplets.models import TripletConfig
from triplets.services import (
    NoSolitonError,
    PhaseInconsistentError,
    TripletValidationError,
    admissibility,
    check_spectrum,
    compatible_phase,
    contraction,
    controllability,
    minimality,
    observability,
    validate_triplet,
)


def _make_jordan_pair(rng, zero_last_b=False, zero_first_c=False):
    a0 = SigmaMatrix(1.0 + 0.4j, 0.3)
    b_blocks = [random_sigma(rng), random_sigma(rng)]
    c_blocks = [random_sigma(rng), random_sigma(rng)]
    if zero_last_b:
        b_blocks[-1] = SigmaMatrix.zero()
    if zero_first_c:
        c_blocks[0] = SigmaMatrix.zero()
    return jordan_triplet(a0, 2, b_blocks, c_blocks, mu=1.0)


# ── check_spectrum ─────────────────────────────────────────────────────────────

class CheckSpectrumTests(SimpleTestCase):
    def test_scalar(self):
        self.assertTrue(check_spectrum(np.eye(2)))

    def test_rotation_pair(self):
        cfg = rotation_triplet(0.5, 2.0, SigmaMatrix(1), SigmaMatrix(1), mu=1.0)
        self.assertTrue(check_spectrum(cfg.A))

    def test_negative_eigenvalue(self):
        self.assertFalse(check_spectrum(np.diag([1.0, -1.0])))


# ── controllability / observability ────────────────────────────────────────────

class RankTests(SimpleTestCase):
    def test_scalar_nonsingular_is_minimal(self):
        m = SigmaMatrix(1 + 1j, 0.5).as_array()
        self.assertTrue(controllability(2.0 * np.eye(2), m).full)
        self.assertTrue(observability(m, 2.0 * np.eye(2)).full)

    def test_zero_data(self):
        ctrl = controllability(np.eye(2), np.zeros((2, 2)))
        obs = observability(np.zeros((2, 2)), np.eye(2))
        self.assertEqual(ctrl.rank, 0)
        self.assertFalse(ctrl.full)
        self.assertFalse(obs.full)

    def test_jordan_chain_with_nontrivial_ends_is_minimal(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            cfg = _make_jordan_pair(rng)
            self.assertTrue(minimality(cfg.A, cfg.B @ cfg.C).minimal)

    def test_zero_last_b_block_breaks_controllability(self):
        rng = np.random.default_rng(1)
        cfg = _make_jordan_pair(rng, zero_last_b=True)
        report = minimality(cfg.A, cfg.B @ cfg.C)
        self.assertFalse(report.controllable)
        self.assertEqual(report.controllability_rank, 2)

    def test_zero_first_c_block_breaks_observability(self):
        rng = np.random.default_rng(2)
        cfg = _make_jordan_pair(rng, zero_first_c=True)
        report = minimality(cfg.A, cfg.B @ cfg.C)
        self.assertTrue(report.controllable)
        self.assertFalse(report.observable)

    def test_invariant_under_sigma_similarity(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            cfg = random_sigma_triplet(rng, 2)
            s = SigmaBlockMatrix(tuple(tuple(random_sigma(rng, 0.3) for _ in range(2)) for _ in range(2)))
            s = s.as_array() + 2.0 * np.eye(4)
            s_inv = matrix_inverse(s)
            before = minimality(cfg.A, cfg.B @ cfg.C)
            after = minimality(s @ cfg.A @ s_inv, s @ cfg.B @ cfg.C @ s_inv)
            self.assertEqual(before, after)


# ── non-minimal Sylvester solutions ────────────────────────────────────────────

class NonMinimalSylvesterTests(SimpleTestCase):
    def test_minimal_triplets_have_invertible_p(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            cfg = random_sigma_triplet(rng, int(rng.integers(1, 4)))
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            self.assertLess(np.linalg.cond(p), 1e12)

    def test_broken_chains_have_singular_p(self):
        rng = np.random.default_rng(5)
        for i in range(20):
            cfg = _make_jordan_pair(rng, zero_last_b=i % 2 == 0, zero_first_c=i % 2 == 1)
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            scale = max(np.linalg.norm(p, 2), 1.0)
            self.assertLess(smallest_singular_value(p), 1e-8 * scale)


# ── validate_triplet ───────────────────────────────────────────────────────────

class ValidateTripletTests(SimpleTestCase):
    def test_example_passes(self):
        cfg = scalar_triplet(1.0, SigmaMatrix(1 + 1j, 0.5), SigmaMatrix(2, -1j), mu=1.0)
        self.assertTrue(validate_triplet(cfg).minimal)

    def test_bad_shape(self):
        cfg = TripletConfig(A=np.eye(3), B=np.ones((3, 2)), C=np.ones((2, 3)), mu=1.0)
        with self.assertRaisesMessage(TripletValidationError, "2p×2p"):
            validate_triplet(cfg)

    def test_non_positive_mu(self):
        cfg = scalar_triplet(1.0, SigmaMatrix(1), SigmaMatrix(1), mu=0.0)
        with self.assertRaisesMessage(TripletValidationError, "mu"):
            validate_triplet(cfg)

    def test_not_sigma(self):
        cfg = TripletConfig(A=np.diag([1.0, 2.0]), B=np.eye(2), C=np.eye(2), mu=1.0)
        with self.assertRaisesMessage(TripletValidationError, "Σ-structured"):
            validate_triplet(cfg)

    def test_left_half_plane(self):
        cfg = scalar_triplet(-1.0, SigmaMatrix(1), SigmaMatrix(1), mu=1.0)
        with self.assertRaisesMessage(TripletValidationError, "spectrum"):
            validate_triplet(cfg)

    def test_zero_b_is_not_minimal(self):
        cfg = scalar_triplet(1.0, SigmaMatrix.zero(), SigmaMatrix(1), mu=1.0)
        with self.assertRaisesMessage(TripletValidationError, "not minimal"):
            validate_triplet(cfg)


# ── compatible_phase / admissibility ───────────────────────────────────────────

class AdmissibilityTests(SimpleTestCase):
    def test_scalar_example_has_zero_gamma(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            a = rng.uniform(0.2, 3.0)
            cfg = scalar_triplet(a, random_sigma(rng), random_sigma(rng), mu=rng.uniform(0.5, 2.0))
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            result = admissibility(cfg, p)
            self.assertLessEqual(abs(result.q_l - result.q_r), 1e-10 * cfg.mu)
            self.assertAlmostEqual(result.theta_l, result.theta_r)

    def test_antipodal_phase_is_accepted(self):
        cfg = rotation_triplet(0.8, 1.1, SigmaMatrix(1 + 0.2j, 0.4), SigmaMatrix(0.7, 1j), mu=1.0)
        p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
        gamma = contraction(cfg, p)
        self.assertGreater(abs(gamma), 0.0)
        theta_r = math.atan2(-gamma.imag, -gamma.real)
        antipodal = TripletConfig(A=cfg.A, B=cfg.B, C=cfg.C, mu=abs(gamma), theta_r=theta_r)
        result = admissibility(antipodal, p)
        self.assertAlmostEqual(result.q_l, -result.q_r, places=12)
        self.assertAlmostEqual(math.cos(result.theta_l - result.theta_r), -1.0, places=10)

    def test_no_soliton_is_distinguishable(self):
        rng = np.random.default_rng(7)
        rejected = 0
        while rejected < 50:
            cfg = random_sigma_triplet(rng, int(rng.integers(1, 3)))
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            gamma = contraction(cfg, p)
            if abs(gamma) < 1e-6:
                continue
            mu = abs(gamma) * rng.uniform(0.1, 0.9)
            engineered = TripletConfig(A=cfg.A, B=cfg.B, C=cfg.C, mu=mu, theta_r=rng.uniform(-3, 3))
            with self.assertRaises(NoSolitonError):
                admissibility(engineered, p)
            rejected += 1

    def test_phase_mismatch(self):
        cfg = rotation_triplet(0.8, 1.1, SigmaMatrix(1 + 0.2j, 0.4), SigmaMatrix(0.7, 1j), mu=1.0)
        p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
        gamma = contraction(cfg, p)
        mu = 4.0 * abs(gamma)
        # θ_r parallel to γ puts |q_l| = μ + 2|γ|.
        theta_r = math.atan2(gamma.imag, gamma.real)
        mismatched = TripletConfig(A=cfg.A, B=cfg.B, C=cfg.C, mu=mu, theta_r=theta_r)
        with self.assertRaises(PhaseInconsistentError):
            admissibility(mismatched, p)

    def test_phase_mismatch_is_not_no_soliton(self):
        self.assertFalse(issubclass(PhaseInconsistentError, NoSolitonError))

    def test_auto_phase(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            cfg = random_sigma_triplet(rng, 2, theta_r=None)
            p = solve_sylvester(cfg.A, cfg.B @ cfg.C)
            result = admissibility(cfg, p)
            self.assertAlmostEqual(abs(result.q_l), cfg.mu, places=10)

    def test_compatible_phase(self):
        gamma, mu = 0.3 - 0.2j, 1.0
        theta = compatible_phase(gamma, mu)
        self.assertAlmostEqual(abs(mu * complex(math.cos(theta), math.sin(theta)) + 2 * gamma), mu)

    def test_compatible_phase_zero_gamma(self):
        self.assertEqual(compatible_phase(0j, 1.0), 0.0)

    def test_compatible_phase_rejects_large_gamma(self):
        with self.assertRaises(NoSolitonError):
            compatible_phase(2.0, 1.0)
