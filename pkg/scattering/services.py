"""
scattering/services.py

Public services:
  sample_potential(sol, t, ...)                      → SampledPotential
  refine_potential(sol, t, lams)                     → SampledPotential on a converged grid
  gaussian_potential(xs, amplitude, width, ...)      → SampledPotential
  solve_jost(pot, λ, side, xs=None)                  → JostSamples
  scattering_coefficients(pot, λ)                    → ScatteringCoefficients
  reflection(A, B)                                   → R = BA⁻¹
  classify_case(sol)                                 → CaseClassification
  time_symbols(q, λ)                                 → (Λ^up, Λ^dn)
  nls_residual(sol, xs, ts, hx, ht)                  → max |r(x, t)|
  nls_residual_of(q_fn, xs, ts, mu, hx, ht)          → max |r(x, t)| for any callable
  nls_convergence(q_fn, xs, ts, mu, hx, ht)          → ConvergenceResult
  marchenko_residual(sol, x, y, t, n)                → ‖K + Ω_r + ∫KΩ_r‖
  trace_formula_residual(sol, x, t)                  → ‖K(x, x) − ½∫Q‖
  potential_relation_defect(sol, x, t, h)            → (off-diagonal, diagonal)
  kernel_evolution_residual(sol, w, t, h)            → ‖Ω_t + 2i(…)‖
  round_trip_lambdas(sol, n)                         → real λ samples
  run_checks(sol, level, strict, workers)            → VerificationReport

Jost solutions come from the ODE −ψ'' + Qψ = λ²ψ written for the Faddeev
function: m'' = ∓2iλm' + Qm, integrated from the decayed end with m = I,
m' = 0 (upper sign for the left function, started at x_max).
"""

import logging
import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.integrate
import scipy.linalg

from matrices.services import SingularMatrixError, matrix_solve, smallest_singular_value
from quatnls.constants import (
    CLOSED_FORM_SYMMETRY_TOL,
    DELTA_EPSILONS,
    DELTA_ZERO_TOL,
    JOST_ATOL,
    JOST_GRID_MAX,
    JOST_GRID_POINTS,
    JOST_REFINE_TOL,
    JOST_RTOL,
    KERNEL_PDE_STEP,
    LAMBDA_MU_GUARD,
    MARCHENKO_FLOOR,
    MARCHENKO_MIN_RATIO,
    MARCHENKO_NODES,
    MARCHENKO_SPAN,
    MARCHENKO_TOL,
    NLS_ABS_TOL,
    NLS_GRID_FAST,
    NLS_GRID_FULL,
    NLS_STEP,
    ORDER2_RATIO_RANGE,
    POTENTIAL_RELATION_STEP,
    POTENTIAL_RELATION_TOL,
    QUAD_PHASE_STEP,
    ROUND_TRIP_SAMPLES,
    ROUND_TRIP_TIME,
    ROUND_TRIP_TOL,
    SINGULAR_DET_RTOL,
    SPECTRAL_SINGULARITY_RTOL,
    SYLVESTER_RESIDUAL_RTOL,
    TRACE_FORMULA_TOL,
    TRUNCATION_TOL,
    VOLTERRA_SYMMETRY_TOL,
)
from quaternions.models import SIGMA_2, SIGMA_3
from quaternions.services import sigma_defect
from scattering.models import (
    CaseClassification,
    ConvergenceResult,
    JostSamples,
    JostSide,
    SampledPotential,
    ScatteringCoefficients,
    SpectralCase,
    VerificationCheck,
    VerificationLevel,
    VerificationReport,
)
from solitons.models import SolitonSolution
from solitons.services import (
    SingularPointError,
    eval_Q,
    eval_q,
    kernel_K,
    omega_r,
    transmission,
    truncation_box,
)

logger = logging.getLogger(__name__)

EYE2 = np.eye(2, dtype=complex)


# ── Custom exceptions ──────────────────────────────────────────────────────────

class ScatteringError(Exception):
    """Raised when the direct scattering computation cannot be carried out."""


class ThresholdError(ScatteringError):
    """Raised for λ = 0, where the Faddeev normalization degenerates."""


class UndecayedPotentialError(ScatteringError):
    """Raised when ‖Q‖ at a truncation end exceeds the decay tolerance."""


class SpectralSingularityError(ScatteringError):
    """Raised when det A(λ) vanishes at a real λ."""


class InconclusiveLimitError(ScatteringError):
    """Raised when 2iλA_l(λ) has not settled along λ = iε."""


# ── Potentials ─────────────────────────────────────────────────────────────────

def check_decay(pot: SampledPotential, tol: float = TRUNCATION_TOL) -> None:
    left, right = pot.end_norms
    if max(left, right) > tol:
        raise UndecayedPotentialError(
            f"potential has not decayed at the truncation ends: ‖Q(x_min)‖={left:.3e}, "
            f"‖Q(x_max)‖={right:.3e}, tolerance {tol:.1e}"
        )


def sample_potential(
    sol: SolitonSolution,
    t: float = 0.0,
    n: int = JOST_GRID_POINTS,
    x_range: tuple[float, float] | None = None,
    tol: float = TRUNCATION_TOL,
) -> SampledPotential:
    """Q(x; t) of ``sol`` on ``n`` points of the truncation box; raises if the ends have not decayed."""
    x_min, x_max = x_range if x_range is not None else truncation_box(sol, t)
    xs = np.linspace(x_min, x_max, n)
    values = np.array([eval_Q(sol, x, t) for x in xs])
    pot = SampledPotential(xs=xs, t=float(t), Q_values=values, mu=sol.mu)
    check_decay(pot, tol)
    logger.debug("sample_potential: t=%.6g box [%.6g, %.6g], n=%d, end norms %s", t, x_min, x_max, n, pot.end_norms)
    return pot


def refine_potential(
    sol: SolitonSolution,
    t: float,
    lams,
    tol: float = JOST_REFINE_TOL,
    n: int = JOST_GRID_POINTS,
    n_max: int = JOST_GRID_MAX,
    workers: int = 1,
) -> SampledPotential:
    """
    Q(x; t) on a grid fine enough for the scattering data.

    Starting from ``n`` points, the grid interval is halved until A_l(λ)
    recovered at the smallest, median and largest |λ| of ``lams`` changes by
    at most ``tol``. Past ``n_max`` points the finest grid is returned with a
    warning; the round-trip checks then report the residual.
    """
    ordered = sorted(np.asarray(lams, dtype=float), key=abs)
    watched = [ordered[0], ordered[len(ordered) // 2], ordered[-1]]

    def a_l(pot: SampledPotential) -> list[np.ndarray]:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            return [coeffs.A_l for coeffs in pool.map(lambda lam: scattering_coefficients(pot, lam), watched)]

    pot = sample_potential(sol, t, n)
    previous = a_l(pot)
    while True:
        finer = sample_potential(sol, t, 2 * pot.n - 1, x_range=(pot.x_min, pot.x_max))
        current = a_l(finer)
        change = max(float(np.abs(a - b).max()) for a, b in zip(previous, current))
        logger.debug("refine_potential: t=%.6g n=%d change %.3e", t, finer.n, change)
        if change <= tol:
            return finer
        if finer.n >= n_max:
            logger.warning(
                "refine_potential: t=%.6g still moving by %.3e at n=%d; using the finest grid", t, change, finer.n
            )
            return finer
        pot, previous = finer, current


def gaussian_potential(
    xs,
    amplitude: np.ndarray,
    width: float = 1.0,
    center: float = 0.0,
    t: float = 0.0,
    mu: float = 0.0,
) -> SampledPotential:
    """Q(x) = amplitude·exp(−((x − center)/width)²); a reflecting test potential."""
    xs = np.asarray(xs, dtype=float)
    profile = np.exp(-(((xs - center) / width) ** 2))
    values = profile[:, None, None] * np.asarray(amplitude, dtype=complex)[None, :, :]
    return SampledPotential(xs=xs, t=t, Q_values=values, mu=mu)


# ── Jost solutions ─────────────────────────────────────────────────────────────

def solve_jost(
    pot: SampledPotential,
    lam: complex,
    side: str = JostSide.LEFT,
    xs=None,
    rtol: float = JOST_RTOL,
    atol: float = JOST_ATOL,
    tol: float = TRUNCATION_TOL,
) -> JostSamples:
    """
    Faddeev function m_l (side="left") or m_r (side="right") on ``xs``
    (default: the potential's own grid), with Im λ ≥ 0 and λ ≠ 0.
    """
    lam = complex(lam)
    side = JostSide(side)
    if lam == 0:
        raise ThresholdError("threshold λ = 0 is not supported numerically")
    if lam.imag < 0:
        raise ValueError(f"solve_jost needs Im λ ≥ 0, got λ={lam}")
    check_decay(pot, tol)

    eval_xs = pot.xs if xs is None else np.asarray(xs, dtype=float)
    if eval_xs[0] < pot.x_min or eval_xs[-1] > pot.x_max:
        raise ValueError("evaluation grid leaves the sampled potential")

    left = side == JostSide.LEFT
    drift = -2j * lam if left else 2j * lam

    def rhs(x: float, y: np.ndarray) -> np.ndarray:
        m = y[:4].reshape(2, 2)
        dm = y[4:]
        ddm = drift * dm + (pot.at(x) @ m).ravel()
        return np.concatenate([dm, ddm])

    y0 = np.concatenate([EYE2.ravel(), np.zeros(4, dtype=complex)])
    span = (pot.x_max, pot.x_min) if left else (pot.x_min, pot.x_max)
    t_eval = eval_xs[::-1] if left else eval_xs
    result = scipy.integrate.solve_ivp(rhs, span, y0, method="DOP853", t_eval=t_eval, rtol=rtol, atol=atol)
    if not result.success:
        raise ScatteringError(f"Jost integration failed at λ={lam}: {result.message}")

    values = result.y.T[::-1] if left else result.y.T
    return JostSamples(
        side=str(side),
        lam=lam,
        xs=eval_xs,
        m=values[:, :4].reshape(-1, 2, 2),
        dm=values[:, 4:].reshape(-1, 2, 2),
    )


def scattering_coefficients(pot: SampledPotential, lam: float, **jost_kwargs) -> ScatteringCoefficients:
    """
    A_{r,l}(λ) = I − (1/2iλ)∫Q m_{r,l} and B_{r,l}(λ) = (1/2iλ)∫e^{∓2iλy}Q m_{r,l}
    for real λ ≠ 0, by Simpson quadrature on a grid fine enough for e^{±2iλy}.
    """
    if complex(lam).imag != 0:
        raise ValueError(f"scattering_coefficients needs a real λ, got {lam}")
    lam = float(complex(lam).real)
    if lam == 0:
        raise ThresholdError("threshold λ = 0 is not supported numerically")

    length = pot.x_max - pot.x_min
    n = max(pot.n, int(math.ceil(length * 2.0 * abs(lam) / QUAD_PHASE_STEP)) + 1)
    n += 1 - n % 2
    xs = np.linspace(pot.x_min, pot.x_max, n)
    q_values = pot.spline(xs).reshape(-1, 2, 2)

    m_l = solve_jost(pot, lam, JostSide.LEFT, xs, **jost_kwargs).m
    m_r = solve_jost(pot, lam, JostSide.RIGHT, xs, **jost_kwargs).m
    q_m_l = q_values @ m_l
    q_m_r = q_values @ m_r
    phase = np.exp(2j * lam * xs)[:, None, None]
    factor = 1.0 / (2j * lam)

    def integrate(values: np.ndarray) -> np.ndarray:
        return scipy.integrate.simpson(values, x=xs, axis=0)

    return ScatteringCoefficients(
        lam=lam,
        A_l=EYE2 - factor * integrate(q_m_l),
        B_l=factor * integrate(phase * q_m_l),
        A_r=EYE2 - factor * integrate(q_m_r),
        B_r=factor * integrate(np.conj(phase) * q_m_r),
    )


def reflection(a: np.ndarray, b: np.ndarray, rtol: float = SPECTRAL_SINGULARITY_RTOL) -> np.ndarray:
    """R = BA⁻¹."""
    det = abs(np.linalg.det(a))
    if det < rtol * max(1.0, np.linalg.norm(a, 2) ** 2):
        raise SpectralSingularityError(f"spectral singularity encountered: |det A| = {det:.3e}")
    return scipy.linalg.solve(a.T, b.T).T


# ── Small-λ behaviour ──────────────────────────────────────────────────────────

def classify_case(
    sol: SolitonSolution,
    epsilons=DELTA_EPSILONS,
    tol: float = DELTA_ZERO_TOL,
) -> CaseClassification:
    """Generic / exceptional / superexceptional from Δ = lim 2iλA_l(λ) along λ = iε."""
    limits, a_l = [], None
    for eps in epsilons:
        lam = 1j * eps
        a_l = transmission(sol, lam)[0]
        limits.append(2j * lam * a_l)
    scale = max(1.0, float(np.linalg.norm(a_l)))
    drift = float(np.linalg.norm(limits[-1] - limits[-2]))
    if drift > tol * scale:
        raise InconclusiveLimitError(f"2iλA_l(λ) still moves by {drift:.3e} at ε={epsilons[-1]:.1e}")

    delta = limits[-1]
    a_l_zero = transmission(sol, 0.0)[0]
    det_zero = float(abs(np.linalg.det(a_l_zero)))
    if np.linalg.norm(delta) <= tol * scale:
        regular = det_zero > SINGULAR_DET_RTOL * max(1.0, np.linalg.norm(a_l_zero, 2) ** 2)
        case = SpectralCase.SUPEREXCEPTIONAL if regular else SpectralCase.EXCEPTIONAL
    elif smallest_singular_value(delta) <= tol * np.linalg.norm(delta, 2):
        case = SpectralCase.EXCEPTIONAL
    else:
        case = SpectralCase.GENERIC
    logger.info("classify_case: %s is %s (|det A_l(0)|=%.6g)", sol.cfg.label, case, det_zero)
    return CaseClassification(case=str(case), delta=delta, det_a_l_zero=det_zero)


def time_symbols(q: complex, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """Λ^up = 2iλ²σ₃ + 2λσ₃𝒬 and Λ^dn = 2iλ²σ₃ − 2λσ₃𝒬 with 𝒬 = [[0, q], [−q*, 0]]."""
    big_q = _calq(q)
    head = 2j * lam**2 * SIGMA_3
    tail = 2 * lam * SIGMA_3 @ big_q
    return head + tail, head - tail


def _calq(q: complex) -> np.ndarray:
    return np.array([[0.0, q], [-np.conj(q), 0.0]], dtype=complex)


# ── Dynamics ───────────────────────────────────────────────────────────────────

def nls_residual_of(
    q_fn: Callable[[float, float], complex],
    xs,
    ts,
    mu: float,
    hx: float,
    ht: float,
    workers: int = 1,
) -> float:
    """
    max |i q_t + q_xx − 2|q|²q + 2μ²q| over the grid, by central differences.

    μ = 0 gives the residual of the focusing equation without background term.
    """
    xs = np.asarray(xs, dtype=float)

    def row(t: float) -> float:
        worst = 0.0
        for x in xs:
            q0 = q_fn(x, t)
            q_xx = (q_fn(x + hx, t) - 2.0 * q0 + q_fn(x - hx, t)) / hx**2
            q_t = (q_fn(x, t + ht) - q_fn(x, t - ht)) / (2.0 * ht)
            r = 1j * q_t + q_xx - 2.0 * abs(q0) ** 2 * q0 + 2.0 * mu**2 * q0
            worst = max(worst, abs(r))
        return worst

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        return max(pool.map(row, np.asarray(ts, dtype=float)), default=0.0)


def nls_residual(sol: SolitonSolution, xs, ts, hx: float, ht: float, workers: int = 1) -> float:
    return nls_residual_of(lambda x, t: eval_q(sol, x, t), xs, ts, sol.mu, hx, ht, workers)


def nls_convergence(q_fn, xs, ts, mu: float, hx: float, ht: float, workers: int = 1) -> ConvergenceResult:
    coarse = nls_residual_of(q_fn, xs, ts, mu, hx, ht, workers)
    fine = nls_residual_of(q_fn, xs, ts, mu, hx / 2.0, ht / 2.0, workers)
    return ConvergenceResult(coarse=coarse, fine=fine)


def _order2(result: ConvergenceResult, floor: float) -> bool:
    low, high = ORDER2_RATIO_RANGE
    return result.fine <= floor or low <= result.ratio <= high


def potential_relation_defect(
    sol: SolitonSolution,
    x: float,
    t: float,
    h: float = POTENTIAL_RELATION_STEP,
) -> tuple[float, float]:
    """
    Q − (𝒬² + 𝒬_x + μ²I), split into its largest off-diagonal and diagonal entries.

    The off-diagonal part is q_x for every Σ-triplet. The diagonal part asks
    for diag Q = μ² − |q|², which the closed form does not give for a general
    Σ-triplet: on the scalar example the defect is O(1) already at t = 0,
    where e^{tH} = I. The condition is not implied by Σ-structure,
    minimality and admissibility, so the diagonal defect is reported rather
    than gated.
    """
    q = eval_q(sol, x, t)
    q_x = (eval_q(sol, x + h, t) - eval_q(sol, x - h, t)) / (2.0 * h)
    big_q = _calq(q)
    expected = big_q @ big_q + _calq(q_x) + sol.mu**2 * EYE2
    diff = np.abs(eval_Q(sol, x, t) - expected)
    return float(max(diff[0, 1], diff[1, 0])), float(max(diff[0, 0], diff[1, 1]))


def kernel_evolution_residual(sol: SolitonSolution, w: float, t: float, h: float = KERNEL_PDE_STEP) -> float:
    """‖Ω_t + 2i(Ω_ww σ₃ − σ₃Ω_ww + Ω_w σ₃𝒬_l − 𝒬_l σ₃Ω_w)‖ by central differences."""
    omega = omega_r(sol, w, t)
    omega_t = (omega_r(sol, w, t + h) - omega_r(sol, w, t - h)) / (2.0 * h)
    ahead, behind = omega_r(sol, w + h, t), omega_r(sol, w - h, t)
    omega_w = (ahead - behind) / (2.0 * h)
    omega_ww = (ahead - 2.0 * omega + behind) / h**2
    q_l = _calq(sol.q_l)
    bracket = omega_ww @ SIGMA_3 - SIGMA_3 @ omega_ww + omega_w @ SIGMA_3 @ q_l - q_l @ SIGMA_3 @ omega_w
    return float(np.linalg.norm(omega_t + 2j * bracket))


# ── Kernel identities ──────────────────────────────────────────────────────────

def marchenko_residual(
    sol: SolitonSolution,
    x: float,
    y: float,
    t: float,
    n: int = MARCHENKO_NODES,
    span: float = MARCHENKO_SPAN,
) -> float:
    """‖K(x, y) + Ω_r(x + y) + ∫ₓ^∞ K(x, z)Ω_r(z + y) dz‖, Simpson with ``n`` intervals."""
    zs = np.linspace(x, x + span / sol.alpha, n + 1)
    values = np.array([kernel_K(sol, x, z, t) @ omega_r(sol, z + y, t) for z in zs])
    integral = scipy.integrate.simpson(values, x=zs, axis=0)
    return float(np.linalg.norm(kernel_K(sol, x, y, t) + omega_r(sol, x + y, t) + integral))


def trace_formula_residual(sol: SolitonSolution, x: float, t: float, span: float = 2.0 * MARCHENKO_SPAN) -> float:
    """‖K(x, x) − ½∫ₓ^∞ Q‖."""
    integral, _ = scipy.integrate.quad_vec(
        lambda s: eval_Q(sol, s, t), x, x + span / sol.alpha, epsabs=1e-13, epsrel=1e-11
    )
    return float(np.linalg.norm(kernel_K(sol, x, x, t) - 0.5 * integral))


# ── λ samples ──────────────────────────────────────────────────────────────────

def round_trip_lambdas(sol: SolitonSolution, n: int = ROUND_TRIP_SAMPLES, guard: float = LAMBDA_MU_GUARD) -> np.ndarray:
    """Logarithmically spread real λ in [0.1, 10]·ρ(A) with alternating signs, kept off ±μ."""
    rho = float(np.abs(sol.spectrum).max())
    lams = []
    for k, magnitude in enumerate(rho * np.logspace(-1.0, 1.0, n)):
        while abs(magnitude - sol.mu) < guard * sol.mu:
            magnitude *= 1.0 + 3.0 * guard
        lams.append(magnitude if k % 2 == 0 else -magnitude)
    return np.array(lams)


# ── Check suite ────────────────────────────────────────────────────────────────

def _record(
    report: VerificationReport,
    name: str,
    residual: float,
    tolerance: float,
    gating: bool = True,
    passed: bool | None = None,
    detail: str = "",
) -> VerificationCheck:
    if passed is None:
        passed = bool(residual <= tolerance)
    check = report.add(VerificationCheck(name, float(residual), float(tolerance), passed, gating, detail))
    if passed:
        logger.debug("check %s: residual %.3e ≤ %.1e", name, residual, tolerance)
    elif gating:
        logger.info("check %s FAILED: residual %.3e > %.1e %s", name, residual, tolerance, detail)
    else:
        logger.warning("advisory check %s failed: residual %.3e > %.1e %s", name, residual, tolerance, detail)
    return check


def _rel_sigma_defect(m: np.ndarray) -> float:
    return sigma_defect(m) / max(1.0, float(np.abs(m).max()))


def _conj_twist(m: np.ndarray) -> np.ndarray:
    """σ₂M*σ₂ for a 2×2 matrix."""
    return SIGMA_2 @ np.conj(m) @ SIGMA_2


def _sample_points(sol: SolitonSolution, t: float, count: int = 7, width: float = 3.0) -> np.ndarray:
    x_min, x_max = truncation_box(sol, t)
    center = 0.5 * (x_min + x_max)
    return np.linspace(center - width / sol.alpha, center + width / sol.alpha, count)


def _regular(fn, *args):
    try:
        return fn(*args)
    except SingularPointError:
        return None


def _algebraic_checks(sol: SolitonSolution, report: VerificationReport) -> None:
    a, p, bc = sol.A, sol.P, sol.B @ sol.C
    scale = np.linalg.norm(a) * np.linalg.norm(p) + np.linalg.norm(bc)
    _record(report, "sylvester", np.linalg.norm(a @ p + p @ a - bc) / scale, SYLVESTER_RESIDUAL_RTOL)
    _record(report, "sigma:P", _rel_sigma_defect(p), CLOSED_FORM_SYMMETRY_TOL)
    _record(report, "boundary:modulus", abs(abs(sol.q_l) - sol.mu) / sol.mu, 1e-8)

    inverse_defect, ratio_defect = 0.0, 0.0
    n = 2 * sol.p
    for lam in np.linspace(-3.0, 3.0, 7):
        a_l, a_l_inv = transmission(sol, lam)
        inverse_defect = max(inverse_defect, float(np.abs(a_l @ a_l_inv - EYE2).max()))
        ratio = np.linalg.det(lam * np.eye(n) + 1j * a) / np.linalg.det(lam * np.eye(n) - 1j * a)
        ratio_defect = max(ratio_defect, abs(np.linalg.det(a_l_inv) - ratio) / max(1.0, abs(ratio)))
    _record(report, "transmission:inverse", inverse_defect, 1e-9)
    _record(report, "transmission:det-ratio", ratio_defect, 1e-8)


def _symmetry_checks(sol: SolitonSolution, report: VerificationReport) -> None:
    """Σ-structure of the closed-form quantities on the t = 0 slice."""
    q_defect, k_defect = 0.0, 0.0
    for x in _sample_points(sol, 0.0):
        big_q = _regular(eval_Q, sol, x, 0.0)
        if big_q is None:
            continue
        q_defect = max(q_defect, _rel_sigma_defect(big_q))
        k_defect = max(k_defect, _rel_sigma_defect(kernel_K(sol, x, x + 0.5 / sol.alpha, 0.0)))
    _record(report, "symmetry:Q", q_defect, CLOSED_FORM_SYMMETRY_TOL)
    _record(report, "symmetry:K", k_defect, CLOSED_FORM_SYMMETRY_TOL)

    omega_defect = max(_rel_sigma_defect(omega_r(sol, w, 0.0)) for w in np.linspace(0.0, 4.0 / sol.alpha, 5))
    _record(report, "symmetry:Omega", omega_defect, CLOSED_FORM_SYMMETRY_TOL)

    a_defect, lambda_defect = 0.0, 0.0
    for lam in (0.4, -1.7, 2.5):
        a_l = transmission(sol, lam)[0]
        twisted = _conj_twist(transmission(sol, -np.conj(lam))[0])
        a_defect = max(a_defect, float(np.abs(a_l - twisted).max()) / max(1.0, float(np.abs(a_l).max())))
        for q in (sol.q_r, sol.q_l):
            for current, mirrored in zip(time_symbols(q, lam), time_symbols(q, -np.conj(lam))):
                lambda_defect = max(lambda_defect, float(np.abs(current - _conj_twist(mirrored)).max()))
    _record(report, "symmetry:A_l", a_defect, CLOSED_FORM_SYMMETRY_TOL)
    _record(report, "symmetry:Lambda", lambda_defect, CLOSED_FORM_SYMMETRY_TOL)


def _dynamics_checks(
    sol: SolitonSolution,
    report: VerificationReport,
    level: str,
    strict: bool,
    workers: int,
) -> None:
    off_diagonal, diagonal = 0.0, 0.0
    for x in _sample_points(sol, 0.0):
        defect = _regular(potential_relation_defect, sol, x, 0.0)
        if defect is not None:
            off_diagonal, diagonal = max(off_diagonal, defect[0]), max(diagonal, defect[1])
    _record(report, "potential-relation:off-diagonal", off_diagonal, POTENTIAL_RELATION_TOL)
    _record(report, "potential-relation:diagonal", diagonal, POTENTIAL_RELATION_TOL, gating=strict)

    nx, nt = NLS_GRID_FULL if level == VerificationLevel.FULL else NLS_GRID_FAST
    scale = max(float(np.abs(sol.spectrum).max()), sol.mu)
    hx, ht = NLS_STEP / scale, NLS_STEP / scale**2
    xs = _sample_points(sol, 0.0, count=nx, width=4.0)
    ts = np.linspace(0.0, ROUND_TRIP_TIME, nt)
    try:
        result = nls_convergence(lambda x, t: eval_q(sol, x, t), xs, ts, sol.mu, hx, ht, workers)
    except SingularPointError as exc:
        _record(report, "nls:convergence", math.inf, NLS_ABS_TOL, gating=strict, passed=False, detail=str(exc))
        return
    _record(
        report,
        "nls:convergence",
        result.coarse,
        NLS_ABS_TOL,
        gating=strict,
        passed=_order2(result, NLS_ABS_TOL),
        detail=f"h→h/2 ratio {result.ratio:.3g}",
    )


def _kernel_checks(sol: SolitonSolution, report: VerificationReport, strict: bool) -> None:
    x_min, x_max = truncation_box(sol, 0.0)
    x = 0.5 * (x_min + x_max) + 1.0 / sol.alpha
    y = x + 0.5 / sol.alpha
    try:
        coarse = marchenko_residual(sol, x, y, 0.0, MARCHENKO_NODES)
        fine = marchenko_residual(sol, x, y, 0.0, 2 * MARCHENKO_NODES)
        trace = trace_formula_residual(sol, x, 0.0)
    except SingularPointError as exc:
        _record(report, "marchenko", math.inf, MARCHENKO_TOL, passed=False, detail=str(exc))
        return
    _record(report, "marchenko", coarse, MARCHENKO_TOL)
    ratio = coarse / fine if fine > 0 else math.inf
    _record(
        report,
        "marchenko:order",
        fine,
        MARCHENKO_FLOOR,
        passed=fine <= MARCHENKO_FLOOR or ratio >= MARCHENKO_MIN_RATIO,
        detail=f"n→2n ratio {ratio:.3g}",
    )
    _record(report, "trace-formula", trace, TRACE_FORMULA_TOL)

    h = KERNEL_PDE_STEP / max(float(np.abs(sol.spectrum).max()), sol.mu)
    points = [(w, t) for w in np.linspace(0.0, 2.0 / sol.alpha, 3) for t in (0.0, 0.3)]
    result = ConvergenceResult(
        coarse=max(kernel_evolution_residual(sol, w, t, h) for w, t in points),
        fine=max(kernel_evolution_residual(sol, w, t, h / 2.0) for w, t in points),
    )
    _record(
        report,
        "kernel-evolution",
        result.coarse,
        NLS_ABS_TOL,
        gating=strict,
        passed=_order2(result, NLS_ABS_TOL),
        detail=f"h→h/2 ratio {result.ratio:.3g}",
    )


def _volterra_checks(sol: SolitonSolution, report: VerificationReport, workers: int, t1: float) -> None:
    lams = round_trip_lambdas(sol)
    recovered: dict[float, list[np.ndarray]] = {}
    for t in (0.0, t1):
        try:
            pot = refine_potential(sol, t, lams, workers=workers)
        except (SingularPointError, UndecayedPotentialError) as exc:
            _record(report, f"round-trip:t={t:g}", math.inf, ROUND_TRIP_TOL, passed=False, detail=str(exc))
            return
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            coefficients = list(pool.map(lambda lam: scattering_coefficients(pot, lam), lams))

        round_trip, reflectionless, singular = 0.0, 0.0, 0
        for coeffs in coefficients:
            closed = transmission(sol, coeffs.lam)[0]
            round_trip = max(round_trip, float(np.abs(coeffs.A_l - closed).max()))
            reflectionless = max(reflectionless, float(np.abs(coeffs.B_l).max()))
            try:
                reflection(coeffs.A_l, coeffs.B_l)
            except SpectralSingularityError:
                singular += 1
        recovered[t] = [coeffs.A_l for coeffs in coefficients]
        _record(report, f"round-trip:t={t:g}", round_trip, ROUND_TRIP_TOL)
        _record(report, f"reflectionless:t={t:g}", reflectionless, ROUND_TRIP_TOL)
        _record(report, f"no-spectral-singularity:t={t:g}", singular, 0)

        if t == 0.0:
            lam = float(abs(lams[len(lams) // 2]))
            plus, minus = solve_jost(pot, lam), solve_jost(pot, -lam)
            jost_defect = float(np.abs(plus.m - SIGMA_2 @ np.conj(minus.m) @ SIGMA_2).max())
            _record(report, "symmetry:Jost", jost_defect, VOLTERRA_SYMMETRY_TOL)
            mirror = scattering_coefficients(pot, -lam)
            direct = scattering_coefficients(pot, lam)
            ab_defect = max(
                float(np.abs(direct.A_l - _conj_twist(mirror.A_l)).max()),
                float(np.abs(direct.B_l - _conj_twist(mirror.B_l)).max()),
            )
            _record(report, "symmetry:A/B", ab_defect, VOLTERRA_SYMMETRY_TOL)

    drift = max(float(np.abs(a0 - a1).max()) for a0, a1 in zip(recovered[0.0], recovered[t1]))
    _record(report, "time-invariance:A_l", drift, ROUND_TRIP_TOL)


def _case_checks(sol: SolitonSolution, report: VerificationReport) -> None:
    try:
        result = classify_case(sol)
    except InconclusiveLimitError as exc:
        _record(report, "classify-case", math.inf, DELTA_ZERO_TOL, passed=False, detail=str(exc))
        return
    report.case = result.case
    defect = float(np.abs(result.delta - _conj_twist(result.delta)).max())
    _record(report, "symmetry:Delta", defect, CLOSED_FORM_SYMMETRY_TOL, detail=result.case)


def run_checks(
    sol: SolitonSolution,
    level: str = VerificationLevel.FAST,
    strict: bool = False,
    workers: int = 1,
    t1: float = ROUND_TRIP_TIME,
) -> VerificationReport:
    """
    Run the verification suite on a built solution.

    ``fast``: algebraic identities, Σ-symmetries and the NLS residual.
    ``full``: additionally Marchenko, trace formula, Volterra round trip,
    case classification and the Ω evolution PDE. The dynamical checks gate
    the verdict only when ``strict`` is set.
    """
    level = VerificationLevel(level)
    report = VerificationReport(label=sol.cfg.label, level=str(level), strict=strict)
    _algebraic_checks(sol, report)
    _symmetry_checks(sol, report)
    _dynamics_checks(sol, report, level, strict, workers)
    if level == VerificationLevel.FULL:
        _kernel_checks(sol, report, strict)
        _volterra_checks(sol, report, workers, t1)
        _case_checks(sol, report)

    logger.info(
        "run_checks: %s level=%s %s (%d checks, %d gating failures, %d advisory failures)",
        report.label, report.level, "PASS" if report.passed else "FAIL",
        len(report.checks), len(report.failed), len(report.advisory_failures),
    )
    return report
