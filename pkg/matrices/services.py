"""
matrices/services.py

Public services:
  as_complex_matrix(m, name, square)    → ComplexMatrix
  matrix_exp(A, s)                      → e^{sA}
  matrix_inverse(A) / matrix_det(A)     → A⁻¹ / det A
  smallest_singular_value(M)            → float
  solve_sylvester(A, M)                 → P with AP + PA = M
  sylvester_quadrature(A, M)            → ∫₀^∞ e^{−sA} M e^{−sA} ds
  branched_sqrt(map, λ)                 → k(λ)
  generator_symbol(map, λ)              → f(λ) = i[2λk(λ) − μ²]
  time_generator(A, map, method)        → H = f(iA)
  time_evolution(A, map, t)             → e^{tH}

All functions are pure and take numpy arrays; nothing here reads settings.
"""

import logging

import numpy as np
import scipy.integrate
import scipy.linalg

from matrices.models import BranchedSqrtMap, ComplexMatrix
from quatnls.constants import (
    CLUSTER_RTOL,
    COMMUTATOR_RTOL,
    CONTOUR_NODES,
    EIGVEC_COND_LIMIT,
    SINGULAR_PIVOT_RTOL,
    SPECTRUM_CONFLICT_RTOL,
    SYLVESTER_RESIDUAL_RTOL,
)

logger = logging.getLogger(__name__)

GENERATOR_METHODS = ("auto", "eig", "contour")


# ── Custom exceptions ──────────────────────────────────────────────────────────

class MatrixError(Exception):
    """Raised when a matrix argument has the wrong shape or non-finite entries."""


class SpectrumConflictError(MatrixError):
    """Raised when λᵢ + λⱼ ≈ 0 makes the Sylvester operator singular."""


class BranchCutError(MatrixError):
    """Raised when an argument of k(λ) lies on or next to the cut [−μ, μ]."""


class SingularMatrixError(MatrixError):
    """Raised when an LU pivot falls below the singularity threshold."""


# ── Validation ─────────────────────────────────────────────────────────────────

def as_complex_matrix(m, name: str = "matrix", square: bool = False) -> ComplexMatrix:
    try:
        arr = np.array(m, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise MatrixError(f"{name}: not a numeric matrix ({exc})") from exc
    if arr.ndim != 2:
        raise MatrixError(f"{name}: expected a 2-D matrix, got {arr.ndim} dimension(s)")
    if square and arr.shape[0] != arr.shape[1]:
        raise MatrixError(f"{name}: expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixError(f"{name}: contains NaN or Inf entries")
    return arr


# ── Elementary operations ──────────────────────────────────────────────────────

def matrix_exp(a: ComplexMatrix, s: float = 1.0) -> ComplexMatrix:
    """e^{sA} by scaling and squaring with Padé approximants."""
    a = as_complex_matrix(a, "A", square=True)
    if s == 0:
        return np.eye(a.shape[0], dtype=complex)
    return scipy.linalg.expm(s * a)


def _lu(a: ComplexMatrix, rtol: float):
    a = as_complex_matrix(a, "A", square=True)
    if a.size == 0:
        raise MatrixError("A: empty matrix")
    lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if pivots.max() == 0.0 or pivots.min() <= rtol * pivots.max():
        raise SingularMatrixError(
            f"singular: smallest LU pivot {pivots.min():.3e} vs largest {pivots.max():.3e}"
        )
    return lu, piv


def matrix_inverse(a: ComplexMatrix, rtol: float = SINGULAR_PIVOT_RTOL) -> ComplexMatrix:
    lu, piv = _lu(a, rtol)
    return scipy.linalg.lu_solve((lu, piv), np.eye(lu.shape[0], dtype=complex))


def matrix_solve(a: ComplexMatrix, b: ComplexMatrix, rtol: float = SINGULAR_PIVOT_RTOL) -> ComplexMatrix:
    """A⁻¹B through one LU factorization, with the same singularity test as matrix_inverse."""
    lu, piv = _lu(a, rtol)
    return scipy.linalg.lu_solve((lu, piv), np.asarray(b, dtype=complex))


def matrix_det(a: ComplexMatrix) -> complex:
    a = as_complex_matrix(a, "A", square=True)
    return complex(scipy.linalg.det(a))


def smallest_singular_value(m: ComplexMatrix) -> float:
    m = as_complex_matrix(m, "M")
    return float(scipy.linalg.svdvals(m).min())


# ── Sylvester equation AP + PA = M ─────────────────────────────────────────────

def solve_sylvester(
    a: ComplexMatrix,
    m: ComplexMatrix,
    conflict_rtol: float = SPECTRUM_CONFLICT_RTOL,
) -> ComplexMatrix:
    """
    Solve AP + PA = M by the Kronecker form (I ⊗ A + Aᵀ ⊗ I) vec P = vec M.

    vec stacks columns, so the reshapes use Fortran order.
    """
    a = as_complex_matrix(a, "A", square=True)
    m = as_complex_matrix(m, "M", square=True)
    n = a.shape[0]
    if m.shape != a.shape:
        raise MatrixError(f"M has shape {m.shape}, A has shape {a.shape}")

    eig = scipy.linalg.eigvals(a)
    scale = max(np.linalg.norm(a, 2), 1e-300)
    gap = np.abs(eig[:, None] + eig[None, :]).min()
    if gap <= conflict_rtol * scale:
        raise SpectrumConflictError(
            f"spectrum conflict: min |λᵢ + λⱼ| = {gap:.3e} relative to ‖A‖ = {scale:.3e}"
        )

    eye = np.eye(n, dtype=complex)
    operator = np.kron(eye, a) + np.kron(a.T, eye)
    p = scipy.linalg.solve(operator, m.reshape(-1, order="F")).reshape((n, n), order="F")

    residual = np.linalg.norm(a @ p + p @ a - m)
    bound = SYLVESTER_RESIDUAL_RTOL * (np.linalg.norm(a) * np.linalg.norm(p) + np.linalg.norm(m))
    if residual > bound:
        logger.warning("solve_sylvester: residual %.3e above %.3e", residual, bound)
    else:
        logger.debug("solve_sylvester: n=%d residual %.3e", n, residual)
    return p


def sylvester_quadrature(
    a: ComplexMatrix,
    m: ComplexMatrix,
    epsabs: float = 1e-13,
    epsrel: float = 1e-11,
) -> ComplexMatrix:
    """P = ∫₀^∞ e^{−sA} M e^{−sA} ds by adaptive quadrature, for right-half-plane spectra."""
    a = as_complex_matrix(a, "A", square=True)
    m = as_complex_matrix(m, "M", square=True)

    def integrand(s: float) -> np.ndarray:
        decay = scipy.linalg.expm(-s * a)
        return (decay @ m @ decay).ravel()

    value, err = scipy.integrate.quad_vec(integrand, 0.0, np.inf, epsabs=epsabs, epsrel=epsrel)
    logger.debug("sylvester_quadrature: error estimate %.3e", err)
    return np.asarray(value).reshape(a.shape)


# ── Branched square root and the time generator ────────────────────────────────

def branched_sqrt(branch: BranchedSqrtMap, lam: complex) -> complex:
    """
    k(λ) = √(λ−μ)·√(λ+μ).

    Maps ℂ⁺ onto ℂ⁺, is odd in λ and satisfies k(λ)² = λ² − μ².
    """
    lam = complex(lam)
    if branch.cut_distance(lam) < branch.eps:
        raise BranchCutError(f"on branch cut: λ = {lam} is within {branch.eps:.1e} of [−μ, μ]")
    return complex(np.sqrt(lam - branch.mu) * np.sqrt(lam + branch.mu))


def generator_symbol(branch: BranchedSqrtMap, lam: complex) -> complex:
    """f(λ) = i[2λk(λ) − μ²], the scalar symbol of the time generator."""
    lam = complex(lam)
    return 1j * (2.0 * lam * branched_sqrt(branch, lam) - branch.mu**2)


def _symbol_values(branch: BranchedSqrtMap, z: np.ndarray) -> np.ndarray:
    k = np.sqrt(z - branch.mu) * np.sqrt(z + branch.mu)
    return 1j * (2.0 * z * k - branch.mu**2)


def _clusters(eig: np.ndarray) -> list[np.ndarray]:
    scale = max(1.0, float(np.abs(eig).max()))
    groups: list[list[complex]] = []
    for value in eig:
        for group in groups:
            if min(abs(value - member) for member in group) <= CLUSTER_RTOL * scale:
                group.append(value)
                break
        else:
            groups.append([value])
    return [np.array(group) for group in groups]


def _contour_generator(ia: np.ndarray, eig: np.ndarray, branch: BranchedSqrtMap, nodes: int) -> np.ndarray:
    n = ia.shape[0]
    eye = np.eye(n, dtype=complex)
    groups = _clusters(eig)
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    unit = np.exp(1j * theta)
    h = np.zeros((n, n), dtype=complex)

    for idx, group in enumerate(groups):
        center = complex(group.mean())
        spread = float(np.abs(group - center).max())
        others = [w for j, g in enumerate(groups) if j != idx for w in g]
        reach = [branch.cut_distance(center)] + [abs(center - w) for w in others]
        radius = 0.5 * min(reach)
        if radius <= spread:
            raise MatrixError(
                f"contour circle around {center:.6g} (radius {radius:.3e}) cannot enclose "
                f"its cluster (spread {spread:.3e})"
            )
        logger.debug("time_generator: circle at %s radius %.3e (%d eigenvalues)", center, radius, len(group))
        z = center + radius * unit
        weights = _symbol_values(branch, z) * radius * unit / nodes
        for zk, wk in zip(z, weights):
            h += wk * scipy.linalg.solve(zk * eye - ia, eye)
    return h


def time_generator(
    a: ComplexMatrix,
    branch: BranchedSqrtMap,
    method: str = "auto",
    cond_limit: float = EIGVEC_COND_LIMIT,
    nodes: int = CONTOUR_NODES,
) -> ComplexMatrix:
    """
    H = f(iA) with f(λ) = i[2λk(λ) − μ²].

    "eig" diagonalizes iA; "contour" integrates (1/2πi)∮ f(z)(z − iA)⁻¹ dz with
    the trapezoid rule on one circle per eigenvalue cluster. "auto" picks "eig"
    while the eigenvector matrix has condition number below ``cond_limit``.
    """
    if method not in GENERATOR_METHODS:
        raise ValueError(f"method must be one of {GENERATOR_METHODS}, got {method!r}")
    a = as_complex_matrix(a, "A", square=True)
    ia = 1j * a
    eig, vecs = scipy.linalg.eig(ia)

    touching = [w for w in eig if branch.cut_distance(w) < branch.eps]
    if touching:
        raise BranchCutError(
            f"spectrum touches branch cut: eigenvalue {touching[0]:.6g} of iA "
            f"is within {branch.eps:.1e} of [−μ, μ]"
        )

    cond = np.linalg.cond(vecs)
    if method == "auto":
        method = "eig" if cond < cond_limit else "contour"
    logger.debug("time_generator: method=%s eigenvector cond=%.3e", method, cond)

    if method == "eig":
        # V diag(f) V⁻¹, transposed so that a single solve against Vᵀ suffices.
        scaled = vecs * _symbol_values(branch, eig)
        h = scipy.linalg.solve(vecs.T, scaled.T).T
    else:
        h = _contour_generator(ia, eig, branch, nodes)

    commutator = np.linalg.norm(h @ a - a @ h)
    scale = np.linalg.norm(h) * np.linalg.norm(a)
    if commutator > COMMUTATOR_RTOL * max(scale, 1e-300):
        logger.warning("time_generator: ‖HA − AH‖ = %.3e exceeds %.1e·‖H‖‖A‖", commutator, COMMUTATOR_RTOL)
    return h


def time_evolution(
    a: ComplexMatrix,
    branch: BranchedSqrtMap,
    t: float,
    method: str = "auto",
) -> ComplexMatrix:
    """e^{tH} for the time generator of A."""
    return matrix_exp(time_generator(a, branch, method=method), t)
