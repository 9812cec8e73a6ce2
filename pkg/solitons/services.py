"""
solitons/services.py

Public services:
  build(cfg, ...)                     → SolitonSolution
  eval_q(sol, x, t)                   → q(x, t)
  eval_Q(sol, x, t)                   → Q(x; t), 2×2
  kernel_K(sol, x, y, t)              → K(x, y; t), 2×2 (rescaled form)
  kernel_K_direct(sol, x, y, t)       → K(x, y; t), 2×2 (bracket form)
  omega_r(sol, w, t)                  → Ω_r(w; t) = C e^{−wA} e^{tH} B
  jost_closed_form(sol, x, λ, t)      → m_l(x, λ; t)
  transmission(sol, λ)                → (A_l(λ), A_l(λ)⁻¹)
  gauge_transform(q, t, mu)           → e^{−2iμ²t} q
  singularity_measure(sol, x, t)      → log relative |det(E + P_r)|
  truncation_box(sol, t)              → (x_min, x_max)
  singular_locus(sol, t, ...)         → SingularLocusReport
  sample_grid(sol, xs, ts, workers)   → GridSample
  perturb_sylvester_solution(sol, s)  → SolitonSolution with a corrupted P_r

Throughout, E = e^{2xA}e^{−tH}. For x < 0 the bracket E + P_r is inverted as
is; for x ≥ 0 it is rewritten with F = E⁻¹ = e^{−2xA}e^{tH} as
(E + P_r)⁻¹ = (I + FP_r)⁻¹F, which never forms the growing exponential.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg
import scipy.optimize

from matrices.models import BranchedSqrtMap
from matrices.services import (
    SingularMatrixError,
    matrix_exp,
    matrix_inverse,
    matrix_solve,
    solve_sylvester,
    time_generator,
)
from quatnls.constants import (
    ADMISSIBILITY_TOL,
    COMMUTATOR_RTOL,
    SCAN_SAMPLES,
    SIGMA_TOL,
    SINGULAR_DET_RTOL,
    TRUNCATION_SPAN,
)
from quaternions.services import block_det, is_sigma
from solitons.models import GridSample, SingularLocusReport, SolitonSolution
from triplets.models import TripletConfig
from triplets.services import TripletValidationError, admissibility, validate_triplet

logger = logging.getLogger(__name__)


# ── Custom exceptions ──────────────────────────────────────────────────────────

class SolitonError(Exception):
    """Raised when a built solution violates one of its defining identities."""


class SingularPointError(SolitonError):
    """Raised when det(E + P_r) vanishes numerically at the requested (x, t)."""

    def __init__(self, x: float, t: float, measure: float):
        self.x = x
        self.t = t
        self.measure = measure
        super().__init__(f"singular point at x={x:.12g}, t={t:.12g} (log relative det {measure:.3g})")


class TransmissionPoleError(SolitonError):
    """Raised when λ hits the spectrum of ±iA."""


# ── Build ──────────────────────────────────────────────────────────────────────

def build(
    cfg: TripletConfig,
    sigma_tol: float = SIGMA_TOL,
    admissibility_tol: float = ADMISSIBILITY_TOL,
    generator_method: str = "auto",
) -> SolitonSolution:
    """
    Validate ``cfg`` and assemble its solution.

    Raises TripletValidationError (or its NoSoliton / PhaseInconsistent
    subclasses) for rejected input, BranchCutError when iA meets the cut and
    SolitonError when H fails to commute with A.
    """
    validate_triplet(cfg, sigma_tol=sigma_tol)

    p_r = solve_sylvester(cfg.A, cfg.B @ cfg.C)
    try:
        matrix_inverse(p_r)
    except SingularMatrixError as exc:
        raise TripletValidationError(f"P_r singular for a triplet that passed minimality: {exc}") from exc
    if not is_sigma(p_r, tol=sigma_tol * max(1.0, float(np.abs(p_r).max()))):
        logger.warning("build: P_r of %s is not Σ-structured within %.1e", cfg.label, sigma_tol)

    boundary = admissibility(cfg, p_r, tol=admissibility_tol)

    h = time_generator(cfg.A, BranchedSqrtMap(cfg.mu), method=generator_method)
    commutator = np.linalg.norm(h @ cfg.A - cfg.A @ h)
    if commutator > COMMUTATOR_RTOL * max(np.linalg.norm(h) * np.linalg.norm(cfg.A), 1e-300):
        raise SolitonError(f"time generator does not commute with A: ‖HA − AH‖ = {commutator:.3e}")

    sol = SolitonSolution(
        cfg=cfg,
        P=p_r,
        H=h,
        q_r=boundary.q_r,
        q_l=boundary.q_l,
        theta_r=boundary.theta_r,
        theta_l=boundary.theta_l,
        gamma=boundary.gamma,
        det_P=block_det(p_r),
    )
    logger.info(
        "build: %s p=%d q_r=%s q_l=%s theta_l=%.12g det P_r=%.12g",
        cfg.label, cfg.p, sol.q_r, sol.q_l, sol.theta_l, sol.det_P,
    )
    return sol


def perturb_sylvester_solution(sol: SolitonSolution, scale: float) -> SolitonSolution:
    """
    Copy of ``sol`` whose P_r has ``scale``·max(‖P_r‖, 1) added to its top-right entry.

    The perturbation is not a multiple of the identity and breaks both the
    Sylvester identity and the Σ-structure; negative controls use it.
    """
    delta = np.zeros_like(sol.P)
    delta[0, -1] = scale * max(np.linalg.norm(sol.P, 2), 1.0)
    logger.warning("perturb_sylvester_solution: P_r[0, -1] shifted by %.3e", delta[0, -1])
    return replace(sol, P=sol.P + delta)


# ── The bracket E + P_r ────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class _Bracket:
    left: bool          # True: ``factor`` is E; False: ``factor`` is F = E⁻¹
    factor: np.ndarray
    P: np.ndarray
    measure: float

    def resolvents(self) -> tuple[np.ndarray, np.ndarray]:
        """((E + P)⁻¹, E(E + P)⁻¹)."""
        eye = np.eye(self.P.shape[0], dtype=complex)
        if self.left:
            g = scipy.linalg.solve(self.factor + self.P, eye)
            return g, self.factor @ g
        g = scipy.linalg.solve(eye + self.factor @ self.P, self.factor)
        eg = scipy.linalg.solve(eye + self.P @ self.factor, eye)
        return g, eg


def _bracket(sol: SolitonSolution, x: float, t: float) -> _Bracket:
    sv_p = sol.p_singular_values
    eye = np.eye(sol.P.shape[0], dtype=complex)
    with np.errstate(divide="ignore"):
        if x < 0:
            e = matrix_exp(sol.A, 2.0 * x) @ matrix_exp(sol.H, -t)
            logdet = np.linalg.slogdet(e + sol.P)[1]
            sv_e = np.linalg.svd(e, compute_uv=False)
            measure = logdet - np.sum(np.log(sv_e + sv_p))
            return _Bracket(True, e, sol.P, float(measure))
        f = matrix_exp(sol.A, -2.0 * x) @ matrix_exp(sol.H, t)
        logdet = np.linalg.slogdet(eye + f @ sol.P)[1]
        # σ_j(E) = 1/σ_{n−j}(F); pair descending σ(P) with descending σ(E).
        sv_f_ascending = np.linalg.svd(f, compute_uv=False)[::-1]
        measure = logdet - np.sum(np.log1p(sv_p * sv_f_ascending))
        return _Bracket(False, f, sol.P, float(measure))


def singularity_measure(sol: SolitonSolution, x: float, t: float) -> float:
    """
    log |det(E + P_r)| − Σ_j log(σ_j(E) + σ_j(P_r)).

    Tends to 0 as x → +∞ and to log(|det P_r| / Π σ_j(P_r)) = 0 as x → −∞;
    −∞ exactly on the singular locus. With equal singular values, as for
    p = 1 Σ data, the scale reduces to (‖E‖ + ‖P_r‖)^{2p}.
    """
    return _bracket(sol, x, t).measure


def _resolve(sol: SolitonSolution, x: float, t: float, rtol: float) -> tuple[np.ndarray, np.ndarray]:
    br = _bracket(sol, x, t)
    if not br.measure >= math.log(rtol):
        raise SingularPointError(x, t, br.measure)
    return br.resolvents()


# ── Potentials and kernels ─────────────────────────────────────────────────────

def eval_q(sol: SolitonSolution, x: float, t: float, rtol: float = SINGULAR_DET_RTOL) -> complex:
    """q(x, t) = q_r + 2·C_{r,1}(E + P_r)⁻¹B_{r,2}."""
    g, _ = _resolve(sol, x, t, rtol)
    return complex(sol.q_r + 2.0 * sol.C[0, :] @ g @ sol.B[:, 1])


def eval_Q(sol: SolitonSolution, x: float, t: float, rtol: float = SINGULAR_DET_RTOL) -> np.ndarray:
    """Q(x; t) = −4C(E + P_r)⁻¹ A E(E + P_r)⁻¹ B."""
    g, eg = _resolve(sol, x, t, rtol)
    return -4.0 * sol.C @ g @ sol.A @ eg @ sol.B


def kernel_K(sol: SolitonSolution, x: float, y: float, t: float, rtol: float = SINGULAR_DET_RTOL) -> np.ndarray:
    """K(x, y; t) = −C(E + P_r)⁻¹e^{(x−y)A}B for y ≥ x."""
    if y < x:
        raise ValueError(f"kernel_K needs y ≥ x, got x={x}, y={y}")
    g, _ = _resolve(sol, x, t, rtol)
    return -sol.C @ g @ matrix_exp(sol.A, x - y) @ sol.B


def kernel_K_direct(sol: SolitonSolution, x: float, y: float, t: float, rtol: float = SINGULAR_DET_RTOL) -> np.ndarray:
    """K(x, y; t) = −Ce^{−xA}[I + e^{−xA}e^{tH}P_re^{−xA}]⁻¹e^{−yA}e^{tH}B."""
    if y < x:
        raise ValueError(f"kernel_K_direct needs y ≥ x, got x={x}, y={y}")
    measure = singularity_measure(sol, x, t)
    if not measure >= math.log(rtol):
        raise SingularPointError(x, t, measure)
    decay = matrix_exp(sol.A, -x)
    evolve = matrix_exp(sol.H, t)
    inner = np.eye(2 * sol.p) + decay @ evolve @ sol.P @ decay
    rhs = matrix_exp(sol.A, -y) @ evolve @ sol.B
    return -sol.C @ decay @ scipy.linalg.solve(inner, rhs)


def omega_r(sol: SolitonSolution, w: float, t: float) -> np.ndarray:
    return sol.C @ matrix_exp(sol.A, -w) @ matrix_exp(sol.H, t) @ sol.B


def jost_closed_form(
    sol: SolitonSolution,
    x: float,
    lam: complex,
    t: float = 0.0,
    rtol: float = SINGULAR_DET_RTOL,
) -> np.ndarray:
    """Left Faddeev function m_l(x, λ; t) = I − iC(E + P_r)⁻¹(λI + iA)⁻¹B."""
    g, _ = _resolve(sol, x, t, rtol)
    try:
        shifted = matrix_solve(lam * np.eye(2 * sol.p) + 1j * sol.A, sol.B)
    except SingularMatrixError as exc:
        raise TransmissionPoleError(f"pole of transmission data at λ={lam}") from exc
    return np.eye(2, dtype=complex) - 1j * sol.C @ g @ shifted


def transmission(sol: SolitonSolution, lam: complex) -> tuple[np.ndarray, np.ndarray]:
    """
    A_l(λ) = I − iC P_r⁻¹(λI + iA)⁻¹B and A_l(λ)⁻¹ = I + iC(λI − iA)⁻¹P_r⁻¹B.

    Poles sit on the spectra of −iA and iA respectively.
    """
    lam = complex(lam)
    n = 2 * sol.p
    eye2 = np.eye(2, dtype=complex)
    try:
        a_l = eye2 - 1j * sol.C @ matrix_solve(sol.P, matrix_solve(lam * np.eye(n) + 1j * sol.A, sol.B))
        a_l_inv = eye2 + 1j * sol.C @ matrix_solve(lam * np.eye(n) - 1j * sol.A, matrix_solve(sol.P, sol.B))
    except SingularMatrixError as exc:
        raise TransmissionPoleError(f"pole of transmission data at λ={lam}") from exc
    return a_l, a_l_inv


def gauge_transform(q, t, mu: float):
    """q̃ = e^{−2iμ²t}q; maps the NLS-like equation back to focusing NLS. Works on arrays."""
    return np.exp(-2j * mu**2 * np.asarray(t)) * q


# ── Singular locus and grids ───────────────────────────────────────────────────

def truncation_box(sol: SolitonSolution, t: float = 0.0, span: float = TRUNCATION_SPAN) -> tuple[float, float]:
    """
    x-window centred where ‖E‖ ≈ ‖P_r‖, with half-width ``span``/α.

    α = min Re eig A sets the exponential decay of Q on both sides.
    """
    log_p = math.log(np.linalg.norm(sol.P, 2))
    log_h = math.log(np.linalg.norm(matrix_exp(sol.H, -t), 2))
    center = (log_p - log_h) / (2.0 * sol.alpha)
    half = span / sol.alpha
    return center - half, center + half


def singular_locus(
    sol: SolitonSolution,
    t: float,
    x_range: tuple[float, float] | None = None,
    n_samples: int = SCAN_SAMPLES,
    rtol: float = SINGULAR_DET_RTOL,
) -> SingularLocusReport:
    """
    Scan the singularity measure on a grid at fixed t and refine its local
    minima with bounded Brent minimization.
    """
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    x_min, x_max = x_range if x_range is not None else truncation_box(sol, t)
    if not x_min < x_max:
        raise ValueError(f"empty x range ({x_min}, {x_max})")

    xs = np.linspace(x_min, x_max, n_samples)
    values = np.array([singularity_measure(sol, x, t) for x in xs])
    log_threshold = math.log(rtol)

    points: list[float] = []
    minima: list[float] = []
    for i in range(1, n_samples - 1):
        if not (values[i] < values[i - 1] and values[i] <= values[i + 1]):
            continue
        result = scipy.optimize.minimize_scalar(
            lambda x: singularity_measure(sol, x, t),
            bounds=(xs[i - 1], xs[i + 1]),
            method="bounded",
            options={"xatol": 1e-12},
        )
        x_star, value = (float(result.x), float(result.fun)) if result.fun <= values[i] else (float(xs[i]), float(values[i]))
        if value < log_threshold and all(abs(x_star - other) > 1e-9 for other in points):
            points.append(x_star)
            minima.append(math.exp(value))

    report = SingularLocusReport(
        t=float(t),
        x_range=(float(x_min), float(x_max)),
        singular_points=tuple(points),
        minima=tuple(minima),
        endpoint_measures=(math.exp(values[0]), math.exp(values[-1])),
        threshold=rtol,
    )
    logger.info("singular_locus: t=%.6g found %d point(s) in [%.6g, %.6g]", t, report.count, x_min, x_max)
    return report


def sample_grid(
    sol: SolitonSolution,
    xs,
    ts,
    workers: int = 1,
    rtol: float = SINGULAR_DET_RTOL,
) -> GridSample:
    """Evaluate q on every (x, t); rows run in parallel, singular points become NaN."""
    xs = np.asarray(xs, dtype=float)
    ts = np.asarray(ts, dtype=float)

    def row(t: float) -> tuple[np.ndarray, int]:
        values = np.empty(xs.size, dtype=complex)
        singular = 0
        for j, x in enumerate(xs):
            try:
                values[j] = eval_q(sol, x, t, rtol)
            except SingularPointError:
                values[j] = complex(np.nan, np.nan)
                singular += 1
        return values, singular

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows = list(pool.map(row, ts))

    q = np.vstack([values for values, _ in rows]) if rows else np.empty((0, xs.size), dtype=complex)
    singular_count = sum(count for _, count in rows)
    if singular_count:
        logger.warning("sample_grid: %d singular grid point(s) written as NaN", singular_count)
    return GridSample(xs=xs, ts=ts, q=q, singular_count=singular_count)
