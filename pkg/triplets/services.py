"""
triplets/services.py

Public services:
  check_spectrum(A)                  → bool
  controllability(A, M)              → RankCheck
  observability(M, A)                → RankCheck
  minimality(A, M)                   → MinimalityReport
  validate_triplet(cfg, sigma_tol)   → MinimalityReport  (raises TripletValidationError)
  compatible_phase(gamma, mu)        → θ_r
  admissibility(cfg, P_r, tol)       → Admissibility     (raises NoSolitonError / PhaseInconsistentError)

Validation order: shapes → μ → Σ-structure → spectrum → minimality.
"""

import logging
import math

import numpy as np

from matrices.services import MatrixError, SingularMatrixError, as_complex_matrix, matrix_solve
from quatnls.constants import ADMISSIBILITY_TOL, RANK_RTOL, SIGMA_TOL
from quaternions.services import sigma_defect
from triplets.models import Admissibility, MinimalityReport, RankCheck, TripletConfig

logger = logging.getLogger(__name__)


# ── Custom exceptions ──────────────────────────────────────────────────────────

class TripletValidationError(Exception):
    """Raised when a triplet fails a static check (shape, Σ, spectrum, minimality)."""


class NoSolitonError(TripletValidationError):
    """Raised when |C_{r,1} P_r⁻¹ B_{r,2}| > μ, so no soliton exists for the triplet."""


class PhaseInconsistentError(TripletValidationError):
    """Raised when |γ| ≤ μ but |q_r + 2γ| misses the circle of radius μ."""


# ── Spectrum and rank tests ────────────────────────────────────────────────────

def check_spectrum(a: np.ndarray) -> bool:
    """True iff every eigenvalue of A has strictly positive real part."""
    a = as_complex_matrix(a, "A", square=True)
    return bool(np.linalg.eigvals(a).real.min() > 0)


def _krylov_rank(a: np.ndarray, m: np.ndarray, rtol: float) -> RankCheck:
    n = a.shape[0]
    norm = np.linalg.norm(a, 2)
    # Scaling A leaves the Krylov span unchanged and keeps A^{n-1} bounded.
    step = a / norm if norm > 0 else a
    columns = [m]
    for _ in range(n - 1):
        columns.append(step @ columns[-1])
    krylov = np.hstack(columns)
    singular_values = np.linalg.svd(krylov, compute_uv=False)
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return RankCheck(rank=0, dimension=n)
    rank = int(np.linalg.matrix_rank(krylov, tol=rtol * singular_values[0]))
    return RankCheck(rank=rank, dimension=n)


def controllability(a: np.ndarray, m: np.ndarray, rtol: float = RANK_RTOL) -> RankCheck:
    """Rank of [M, AM, …, A^{n−1}M]; (A, M) is controllable iff it is n."""
    a = as_complex_matrix(a, "A", square=True)
    m = as_complex_matrix(m, "M")
    if m.shape[0] != a.shape[0]:
        raise MatrixError(f"M has {m.shape[0]} rows, A has order {a.shape[0]}")
    return _krylov_rank(a, m, rtol)


def observability(m: np.ndarray, a: np.ndarray, rtol: float = RANK_RTOL) -> RankCheck:
    """Rank of [M; MA; …; MA^{n−1}], computed on the conjugate-transposed pair."""
    a = as_complex_matrix(a, "A", square=True)
    m = as_complex_matrix(m, "M")
    if m.shape[1] != a.shape[0]:
        raise MatrixError(f"M has {m.shape[1]} columns, A has order {a.shape[0]}")
    return _krylov_rank(a.conj().T, m.conj().T, rtol)


def minimality(a: np.ndarray, m: np.ndarray, rtol: float = RANK_RTOL) -> MinimalityReport:
    ctrl = controllability(a, m, rtol)
    obs = observability(m, a, rtol)
    return MinimalityReport(
        controllable=ctrl.full,
        observable=obs.full,
        controllability_rank=ctrl.rank,
        observability_rank=obs.rank,
        dimension=ctrl.dimension,
    )


# ── Static validation ──────────────────────────────────────────────────────────

def _check_shapes(cfg: TripletConfig) -> None:
    n = cfg.A.shape[0] if cfg.A.ndim == 2 else 0
    if cfg.A.ndim != 2 or cfg.A.shape != (n, n) or n == 0 or n % 2:
        raise TripletValidationError(f"A must be 2p×2p with p ≥ 1, got shape {cfg.A.shape}")
    if cfg.B.shape != (n, 2):
        raise TripletValidationError(f"B must be {n}×2, got shape {cfg.B.shape}")
    if cfg.C.shape != (2, n):
        raise TripletValidationError(f"C must be 2×{n}, got shape {cfg.C.shape}")
    for label, array in (("A", cfg.A), ("B", cfg.B), ("C", cfg.C)):
        if not np.all(np.isfinite(array)):
            raise TripletValidationError(f"{label} contains NaN or Inf entries")


def validate_triplet(
    cfg: TripletConfig,
    sigma_tol: float = SIGMA_TOL,
    rank_rtol: float = RANK_RTOL,
) -> MinimalityReport:
    """
    Run every static check on ``cfg`` and return its minimality report.

    Raises TripletValidationError naming the first check that failed.
    """
    _check_shapes(cfg)

    if not math.isfinite(cfg.mu) or cfg.mu <= 0:
        raise TripletValidationError(f"mu must be a positive real, got {cfg.mu!r}")
    if cfg.theta_r is not None and not math.isfinite(cfg.theta_r):
        raise TripletValidationError(f"theta_r must be finite, got {cfg.theta_r!r}")

    for label, array in (("A", cfg.A), ("B", cfg.B), ("C", cfg.C)):
        defect = sigma_defect(array)
        if defect > sigma_tol * max(1.0, float(np.abs(array).max())):
            raise TripletValidationError(
                f"{label} is not Σ-structured: block defect {defect:.3e} exceeds {sigma_tol:.1e}"
            )

    if not check_spectrum(cfg.A):
        eig = np.linalg.eigvals(cfg.A)
        raise TripletValidationError(
            f"spectrum of A must lie in Re λ > 0; min Re λ = {eig.real.min():.6g}"
        )

    report = minimality(cfg.A, cfg.B @ cfg.C, rank_rtol)
    if not report.minimal:
        raise TripletValidationError(
            "triplet is not minimal: controllability rank "
            f"{report.controllability_rank}/{report.dimension}, observability rank "
            f"{report.observability_rank}/{report.dimension}"
        )
    logger.debug("validate_triplet: %s passed (p=%d)", cfg.label, cfg.p)
    return report


# ── Boundary values ────────────────────────────────────────────────────────────

def compatible_phase(gamma: complex, mu: float) -> float:
    """
    A right phase θ_r with |μe^{iθ_r} + 2γ| = μ.

    Solves cos(arg γ − θ_r) = −|γ|/μ, which has a solution iff |γ| ≤ μ.
    θ_r = 0 when γ = 0.
    """
    gamma = complex(gamma)
    if abs(gamma) == 0.0:
        return 0.0
    if abs(gamma) > mu:
        raise NoSolitonError(f"no soliton: |γ| = {abs(gamma):.6g} exceeds μ = {mu:.6g}")
    theta = math.atan2(gamma.imag, gamma.real) - math.acos(-abs(gamma) / mu)
    return math.remainder(theta, 2 * math.pi)


def contraction(cfg: TripletConfig, p_r: np.ndarray) -> complex:
    """γ = C_{r,1} P_r⁻¹ B_{r,2}: first row of C against the second column of B."""
    try:
        solved = matrix_solve(p_r, cfg.B[:, 1])
    except SingularMatrixError as exc:
        raise TripletValidationError(f"P_r singular: {exc}") from exc
    return complex(cfg.C[0, :] @ solved)


def admissibility(
    cfg: TripletConfig,
    p_r: np.ndarray,
    tol: float = ADMISSIBILITY_TOL,
) -> Admissibility:
    gamma = contraction(cfg, p_r)
    mu = cfg.mu
    if abs(gamma) > mu * (1.0 + tol):
        raise NoSolitonError(f"no soliton: |γ| = {abs(gamma):.6g} exceeds μ = {mu:.6g}")

    theta_r = cfg.theta_r if cfg.theta_r is not None else compatible_phase(gamma, mu)
    q_r = mu * complex(math.cos(theta_r), math.sin(theta_r))
    q_l = q_r + 2.0 * gamma
    if abs(abs(q_l) - mu) > tol * mu:
        raise PhaseInconsistentError(
            f"phase-inconsistent triplet: |q_l| = {abs(q_l):.12g} but μ = {mu:.12g} "
            f"(|γ| = {abs(gamma):.6g}, θ_r = {theta_r:.6g})"
        )
    theta_l = math.atan2(q_l.imag, q_l.real)
    logger.debug("admissibility: γ=%s q_r=%s q_l=%s", gamma, q_r, q_l)
    return Admissibility(gamma=gamma, q_r=q_r, q_l=q_l, theta_r=theta_r, theta_l=theta_l)
