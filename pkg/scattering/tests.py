"""
scattering/tests.py

Covers:
  - sample_potential           : end decay, undecayed box
  - refine_potential           : grid doubling until A_l settles, round trip at t = 0.5
  - solve_jost                 : zero potential, threshold, closed-form agreement, λ ↦ −λ* symmetry
  - scattering_coefficients    : zero potential, round trip against the closed form, time invariance
  - reflection                 : zero B, spectral singularity, symmetry on a reflecting potential
  - classify_case              : superexceptional scalar example, Δ symmetry, inconclusive limit
  - time_symbols               : conjugation symmetry
  - nls_residual_of            : constant background, plane wave, dark profile, gauge transform,
                                 non-convergence on the scalar example
  - potential/kernel identities: off-diagonal relation, static diagonal defect, Marchenko order, trace formula, Ω evolution stencil
  - run_checks                 : fast and full suites, corrupted P_r, reported diagonal defect
"""

import functools
import math

import numpy as np
from django.test import SimpleTestCase

from matrices.services import matrix_exp
from quaternions.models import SIGMA_2, SIGMA_3, SigmaMatrix
from quatnls.constants import JOST_GRID_POINTS, NLS_ABS_TOL, NLS_STEP, POTENTIAL_RELATION_TOL
from scattering.models import SpectralCase, VerificationLevel
from scattering.services import (
    InconclusiveLimitError,
    SpectralSingularityError,
    ThresholdError,
    UndecayedPotentialError,
    classify_case,
    gaussian_potential,
    kernel_evolution_residual,
    marchenko_residual,
    nls_convergence,
    nls_residual,
    nls_residual_of,
    potential_relation_defect,
    refine_potential,
    reflection,
    round_trip_lambdas,
    run_checks,
    sample_potential,
    scattering_coefficients,
    solve_jost,
    time_symbols,
    trace_formula_residual,
)
from solitons.services import (
    build,
    eval_q,
    gauge_transform,
    jost_closed_form,
    omega_r,
    perturb_sylvester_solution,
    transmission,
    truncation_box,
)
from triplets.factories import rotation_triplet, scalar_triplet


# ── Helpers ────────────────────────────────────────────────────────────────────

@functools.cache
def _make_example_solution():
    """A = I₂ with generic Σ-blocks B and C; built once per test run."""
    cfg = scalar_triplet(1.0, SigmaMatrix(1 + 0.5j, 0.3 - 0.2j), SigmaMatrix(0.8, -0.4 + 0.1j), mu=1.0, theta_r=0.3)
    return build(cfg)


def _make_zero_potential():
    return gaussian_potential(np.linspace(-5.0, 5.0, 201), np.zeros((2, 2)))


def _make_reflecting_potential():
    amplitude = SigmaMatrix(0.6 + 0.2j, 0.3 - 0.1j).as_array()
    return gaussian_potential(np.linspace(-10.0, 10.0, 2001), amplitude, width=1.0)


def _twist(m):
    return SIGMA_2 @ np.conj(m) @ SIGMA_2


# ── sample_potential ───────────────────────────────────────────────────────────

class SamplePotentialTests(SimpleTestCase):
    def test_ends_have_decayed(self):
        pot = sample_potential(_make_example_solution(), 0.0)
        self.assertLess(max(pot.end_norms), 1e-10)
        self.assertEqual(pot.Q_values.shape, (pot.n, 2, 2))

    def test_narrow_box_is_rejected(self):
        with self.assertRaises(UndecayedPotentialError):
            sample_potential(_make_example_solution(), 0.0, n=101, x_range=(-1.0, 1.0))


# ── refine_potential ───────────────────────────────────────────────────────────

class RefinePotentialTests(SimpleTestCase):
    def test_settles_after_one_doubling_at_time_zero(self):
        sol = _make_example_solution()
        pot = refine_potential(sol, 0.0, round_trip_lambdas(sol))
        self.assertEqual(pot.n, 2 * JOST_GRID_POINTS - 1)

    def test_round_trip_at_later_time(self):
        sol = _make_example_solution()
        lams = round_trip_lambdas(sol)
        pot = refine_potential(sol, 0.5, lams, workers=2)
        self.assertGreater(pot.n, 2 * JOST_GRID_POINTS - 1)
        for lam in lams[:4]:
            coeffs = scattering_coefficients(pot, lam)
            self.assertLess(np.abs(coeffs.A_l - transmission(sol, lam)[0]).max(), 1e-6)
            self.assertLess(np.abs(coeffs.B_l).max(), 1e-6)

    def test_grid_cap(self):
        sol = _make_example_solution()
        pot = refine_potential(sol, 0.5, [0.7], tol=0.0, n=201, n_max=801)
        self.assertEqual(pot.n, 801)


# ── solve_jost ─────────────────────────────────────────────────────────────────

class SolveJostTests(SimpleTestCase):
    def test_zero_potential_gives_identity(self):
        pot = _make_zero_potential()
        for side in ("left", "right"):
            samples = solve_jost(pot, 1.3, side)
            np.testing.assert_allclose(samples.m, np.broadcast_to(np.eye(2), samples.m.shape), atol=1e-15)

    def test_threshold_is_rejected(self):
        with self.assertRaises(ThresholdError):
            solve_jost(_make_zero_potential(), 0.0)

    def test_lower_half_plane_is_rejected(self):
        with self.assertRaises(ValueError):
            solve_jost(_make_zero_potential(), 1.0 - 0.5j)

    def test_undecayed_potential(self):
        pot = gaussian_potential(np.linspace(-2.0, 2.0, 101), np.eye(2), width=3.0)
        with self.assertRaises(UndecayedPotentialError):
            solve_jost(pot, 1.0)

    def test_left_function_is_identity_at_start(self):
        pot = sample_potential(_make_example_solution(), 0.0)
        samples = solve_jost(pot, 0.8)
        np.testing.assert_allclose(samples.m[-1], np.eye(2), atol=1e-14)

    def test_matches_closed_form(self):
        sol = _make_example_solution()
        for t, lam in ((0.0, 0.8), (0.3, -1.6), (0.0, 0.5 + 0.4j)):
            pot = sample_potential(sol, t)
            samples = solve_jost(pot, lam)
            for index in range(0, pot.n, 500):
                expected = jost_closed_form(sol, pot.xs[index], lam, t)
                self.assertLess(np.abs(samples.m[index] - expected).max(), 1e-6)

    def test_symmetry_under_negated_lambda(self):
        pot = sample_potential(_make_example_solution(), 0.0)
        plus, minus = solve_jost(pot, 1.1), solve_jost(pot, -1.1)
        twisted = SIGMA_2 @ np.conj(minus.m) @ SIGMA_2
        self.assertLess(np.abs(plus.m - twisted).max(), 1e-6)
        np.testing.assert_allclose(plus.jost(), SIGMA_2 @ np.conj(minus.jost()) @ SIGMA_2, atol=1e-6)


# ── scattering_coefficients ────────────────────────────────────────────────────

class ScatteringCoefficientsTests(SimpleTestCase):
    def test_zero_potential(self):
        coeffs = scattering_coefficients(_make_zero_potential(), 0.9)
        np.testing.assert_allclose(coeffs.A_l, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(coeffs.B_r, np.zeros((2, 2)), atol=1e-15)

    def test_threshold_is_rejected(self):
        with self.assertRaises(ThresholdError):
            scattering_coefficients(_make_zero_potential(), 0.0)

    def test_round_trip_and_reflectionless(self):
        sol = _make_example_solution()
        pot = sample_potential(sol, 0.0)
        for lam in round_trip_lambdas(sol):
            coeffs = scattering_coefficients(pot, lam)
            self.assertLess(np.abs(coeffs.A_l - transmission(sol, lam)[0]).max(), 1e-6)
            self.assertLess(np.abs(coeffs.B_l).max(), 1e-6)

    def test_transmission_is_time_invariant(self):
        sol = _make_example_solution()
        early = scattering_coefficients(refine_potential(sol, 0.0, [0.7]), 0.7)
        late = scattering_coefficients(refine_potential(sol, 0.5, [0.7]), 0.7)
        self.assertLess(np.abs(early.A_l - late.A_l).max(), 1e-6)


# ── reflection ─────────────────────────────────────────────────────────────────

class ReflectionTests(SimpleTestCase):
    def test_zero_b(self):
        np.testing.assert_array_equal(reflection(np.eye(2), np.zeros((2, 2))), np.zeros((2, 2)))

    def test_spectral_singularity(self):
        with self.assertRaises(SpectralSingularityError):
            reflection(np.array([[1.0, 1.0], [1.0, 1.0]]), np.eye(2))

    def test_symmetry_on_reflecting_potential(self):
        pot = _make_reflecting_potential()
        for lam in (0.7, 1.9):
            plus = scattering_coefficients(pot, lam)
            minus = scattering_coefficients(pot, -lam)
            r_plus = reflection(plus.A_l, plus.B_l)
            r_minus = reflection(minus.A_l, minus.B_l)
            self.assertGreater(np.abs(r_plus).max(), 1e-3)
            self.assertLess(np.abs(r_plus - _twist(r_minus)).max(), 1e-6)


# ── classify_case ──────────────────────────────────────────────────────────────

class ClassifyCaseTests(SimpleTestCase):
    def test_scalar_example_is_superexceptional(self):
        # A_l(0) = I − 2I = −I for A = aI₂.
        result = classify_case(_make_example_solution())
        self.assertEqual(result.case, SpectralCase.SUPEREXCEPTIONAL)
        self.assertAlmostEqual(result.det_a_l_zero, 1.0, places=10)

    def test_never_generic(self):
        sol = build(rotation_triplet(0.8, 1.1, SigmaMatrix(1 + 0.2j, 0.4), SigmaMatrix(0.7, 1j), mu=5.0))
        self.assertNotEqual(classify_case(sol).case, SpectralCase.GENERIC)

    def test_delta_symmetry(self):
        delta = classify_case(_make_example_solution()).delta
        self.assertLess(np.abs(delta - _twist(delta)).max(), 1e-12)

    def test_inconclusive(self):
        with self.assertRaises(InconclusiveLimitError):
            classify_case(_make_example_solution(), epsilons=(1e-1, 1e-2), tol=1e-12)


# ── time_symbols ───────────────────────────────────────────────────────────────

class TimeSymbolsTests(SimpleTestCase):
    def test_conjugation_symmetry(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            q = complex(*rng.normal(size=2))
            lam = complex(*rng.normal(size=2))
            for current, mirrored in zip(time_symbols(q, lam), time_symbols(q, -np.conj(lam))):
                np.testing.assert_allclose(current, _twist(mirrored), atol=1e-14)

    def test_difference(self):
        q, lam = 0.3 - 0.8j, 1.7
        up, dn = time_symbols(q, lam)
        calq = np.array([[0, q], [-np.conj(q), 0]])
        np.testing.assert_allclose(up - dn, 4 * lam * SIGMA_3 @ calq)


# ── nls_residual_of ────────────────────────────────────────────────────────────

class NlsResidualTests(SimpleTestCase):
    xs = np.linspace(-3.0, 3.0, 25)
    ts = np.linspace(0.0, 0.5, 5)

    def test_constant_background(self):
        mu, theta = 1.3, 0.7
        value = mu * complex(math.cos(theta), math.sin(theta))
        residual = nls_residual_of(lambda x, t: value, self.xs, self.ts, mu, 0.1, 0.01)
        self.assertLess(residual, 1e-12)

    def test_plane_wave_converges_at_second_order(self):
        mu, k = 1.0, 1.0
        result = nls_convergence(lambda x, t: mu * np.exp(1j * (k * x - k**2 * t)), self.xs, self.ts, mu, 0.1, 0.1)
        self.assertGreater(result.coarse, 1e-6)
        self.assertTrue(3.5 <= result.ratio <= 4.5)

    def test_dark_profile_converges_at_second_order(self):
        mu = 1.2
        result = nls_convergence(lambda x, t: mu * math.tanh(mu * x) + 0j, self.xs, self.ts, mu, 0.1, 0.01)
        self.assertTrue(3.5 <= result.ratio <= 4.5)

    def test_gauge_transformed_wave_solves_the_background_free_equation(self):
        mu, k = 0.8, 1.0

        def q_tilde(x, t):
            return gauge_transform(mu * np.exp(1j * (k * x - k**2 * t)), t, mu)

        result = nls_convergence(q_tilde, self.xs, self.ts, 0.0, 0.1, 0.1)
        self.assertTrue(3.5 <= result.ratio <= 4.5)

    def test_scalar_example_residual_does_not_shrink(self):
        sol = _make_example_solution()
        x_min, x_max = truncation_box(sol, 0.0)
        center = 0.5 * (x_min + x_max)
        xs = np.linspace(center - 4.0 / sol.alpha, center + 4.0 / sol.alpha, 9)
        ts = np.linspace(0.0, 0.5, 3)
        scale = max(float(np.abs(sol.spectrum).max()), sol.mu)
        hx, ht = NLS_STEP / scale, NLS_STEP / scale**2
        result = nls_convergence(lambda x, t: eval_q(sol, x, t), xs, ts, sol.mu, hx, ht, workers=2)
        self.assertGreater(result.fine, NLS_ABS_TOL)
        self.assertTrue(0.9 <= result.ratio <= 1.1, result.ratio)
        self.assertAlmostEqual(nls_residual(sol, xs, ts, hx, ht, workers=2), result.coarse)


# ── Potential and kernel identities ────────────────────────────────────────────

class KernelIdentityTests(SimpleTestCase):
    def test_potential_relation_off_diagonal(self):
        sol = _make_example_solution()
        for x in (-1.0, 0.0, 0.7, 2.0):
            off_diagonal, _ = potential_relation_defect(sol, x, 0.0)
            self.assertLess(off_diagonal, 1e-6)

    def test_diagonal_defect_is_present_at_time_zero(self):
        sol = _make_example_solution()
        x_min, x_max = truncation_box(sol, 0.0)
        center = 0.5 * (x_min + x_max)
        xs = np.linspace(center - 3.0 / sol.alpha, center + 3.0 / sol.alpha, 7)
        worst = max(potential_relation_defect(sol, x, 0.0)[1] for x in xs)
        self.assertGreater(worst, 1.0)

    def test_marchenko_fourth_order(self):
        sol = _make_example_solution()
        x_min, x_max = truncation_box(sol, 0.0)
        x = 0.5 * (x_min + x_max) + 1.0
        coarse = marchenko_residual(sol, x, x + 0.5, 0.0, 64)
        fine = marchenko_residual(sol, x, x + 0.5, 0.0, 128)
        self.assertLess(coarse, 1e-4)
        self.assertGreater(coarse / fine, 8.0)

    def test_trace_formula(self):
        self.assertLess(trace_formula_residual(_make_example_solution(), 0.2, 0.0), 1e-8)

    def test_omega_is_sigma_at_time_zero(self):
        sol = _make_example_solution()
        omega = omega_r(sol, 0.4, 0.0)
        self.assertLess(np.abs(omega - _twist(omega)).max(), 1e-12)

    def test_kernel_evolution_stencil_matches_exact_derivatives(self):
        sol = _make_example_solution()
        w, t = 0.3, 0.2
        evolve = matrix_exp(sol.H, t)
        decay = matrix_exp(sol.A, -w)
        omega_t = sol.C @ decay @ sol.H @ evolve @ sol.B
        omega_w = -sol.C @ sol.A @ decay @ evolve @ sol.B
        omega_ww = sol.C @ sol.A @ sol.A @ decay @ evolve @ sol.B
        q_l = np.array([[0, sol.q_l], [-np.conj(sol.q_l), 0]])
        exact = np.linalg.norm(
            omega_t
            + 2j * (omega_ww @ SIGMA_3 - SIGMA_3 @ omega_ww + omega_w @ SIGMA_3 @ q_l - q_l @ SIGMA_3 @ omega_w)
        )
        self.assertAlmostEqual(kernel_evolution_residual(sol, w, t, 1e-3), exact, delta=1e-4 * max(1.0, exact))


# ── round_trip_lambdas ─────────────────────────────────────────────────────────

class RoundTripLambdaTests(SimpleTestCase):
    def test_samples(self):
        sol = _make_example_solution()
        lams = round_trip_lambdas(sol, 10)
        self.assertEqual(len(lams), 10)
        self.assertTrue(all(lams[::2] > 0) and all(lams[1::2] < 0))
        for lam in lams:
            self.assertGreaterEqual(abs(abs(lam) - sol.mu), 0.05 * sol.mu)


# ── run_checks ─────────────────────────────────────────────────────────────────

class RunChecksTests(SimpleTestCase):
    def test_fast_suite_passes(self):
        report = run_checks(_make_example_solution(), VerificationLevel.FAST)
        self.assertTrue(report.passed, [check.name for check in report.failed])
        names = {check.name for check in report.checks}
        self.assertIn("symmetry:Q", names)
        self.assertIn("nls:convergence", names)

    def test_dynamics_are_advisory_unless_strict(self):
        lenient = run_checks(_make_example_solution(), VerificationLevel.FAST)
        strict = run_checks(_make_example_solution(), VerificationLevel.FAST, strict=True)
        self.assertFalse(next(c for c in lenient.checks if c.name == "nls:convergence").gating)
        self.assertTrue(next(c for c in strict.checks if c.name == "nls:convergence").gating)

    def test_diagonal_defect_is_reported(self):
        report = run_checks(_make_example_solution(), VerificationLevel.FAST)
        checks = {check.name: check for check in report.checks}
        self.assertLess(checks["potential-relation:off-diagonal"].residual, POTENTIAL_RELATION_TOL)
        diagonal = checks["potential-relation:diagonal"]
        self.assertFalse(diagonal.passed)
        self.assertFalse(diagonal.gating)
        self.assertAlmostEqual(diagonal.residual, 1.758, delta=0.01)
        self.assertFalse(checks["nls:convergence"].passed)
        ratio = float(checks["nls:convergence"].detail.split()[-1])
        self.assertTrue(0.9 <= ratio <= 1.1, ratio)
        self.assertTrue(report.passed)

    def test_corrupted_p_fails(self):
        broken = perturb_sylvester_solution(_make_example_solution(), 1e-3)
        report = run_checks(broken, VerificationLevel.FAST)
        self.assertFalse(report.passed)
        self.assertIn("sylvester", [check.name for check in report.failed])

    def test_full_suite_passes(self):
        report = run_checks(_make_example_solution(), VerificationLevel.FULL, workers=2)
        self.assertTrue(report.passed, [(check.name, check.residual) for check in report.failed])
        self.assertEqual(report.case, SpectralCase.SUPEREXCEPTIONAL)
        self.assertIn("round-trip:t=0.5", {check.name for check in report.checks})

    def test_unknown_level(self):
        with self.assertRaises(ValueError):
            run_checks(_make_example_solution(), "thorough")
