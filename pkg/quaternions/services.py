"""
quaternions/services.py

Public services:
  phi(S)                          → Quaternion
  phi_inverse(q)                  → SigmaMatrix
  sigma_det(S)                    → float ≥ 0
  block_det(M) / block_det_detail → float ≥ 0 / DeterminantResult
  same_similarity_orbit(S, T, tol)→ bool
  jordan_block(A, m)              → SigmaBlockMatrix
  direct_sum(*blocks)             → SigmaBlockMatrix
  is_sigma(M, tol) / sigma_defect → bool / float

The isomorphism maps the basis {I₂, iσ₃, iσ₂, iσ₁} of Σ onto {1, i, j, k}.
"""

import logging

import numpy as np
import scipy.linalg

from quatnls.constants import DET_CLAMP_RTOL, PIVOT_RTOL, SIGMA_TOL
from quaternions.models import (
    DeterminantResult,
    Quaternion,
    SigmaBlockMatrix,
    SigmaMatrix,
)

logger = logging.getLogger(__name__)


# ── Custom exception ───────────────────────────────────────────────────────────

class QuaternionError(Exception):
    """Raised when a matrix cannot be read as an array of 2×2 Σ blocks."""


# ── Isomorphism Σ ≅ ℍ ──────────────────────────────────────────────────────────

def phi(s: SigmaMatrix) -> Quaternion:
    """(s1, s2) ↦ Re s1 + Im s1·i − Re s2·j + Im s2·k."""
    return Quaternion(s.s1.real, s.s1.imag, -s.s2.real, s.s2.imag)


def phi_inverse(q: Quaternion) -> SigmaMatrix:
    return SigmaMatrix(complex(q.a, q.b), complex(-q.c, q.d))


def sigma_det(s: SigmaMatrix) -> float:
    """det S = |s1|² + |s2|², the squared length of phi(S)."""
    return s.det()


def same_similarity_orbit(s: SigmaMatrix, t: SigmaMatrix, tol: float = 0.0) -> bool:
    """
    True when S and T are similar in Σ.

    The orbit of S is fixed by Re S₁ and (Im S₁)² + |S₂|².
    """
    if tol < 0:
        raise ValueError("tol must be non-negative")
    same_real = abs(s.s1.real - t.s1.real) <= tol
    radius_s = s.s1.imag**2 + abs(s.s2) ** 2
    radius_t = t.s1.imag**2 + abs(t.s2) ** 2
    return same_real and abs(radius_s - radius_t) <= tol


# ── Block structure ────────────────────────────────────────────────────────────

def _check_blockable(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] % 2 or m.shape[1] % 2:
        raise QuaternionError(f"not blockable: shape {m.shape} is not 2p×2q")
    return m


def sigma_defect(m: np.ndarray) -> float:
    """Largest Frobenius norm of B* − σ₂Bσ₂ over the 2×2 blocks of ``m``."""
    m = _check_blockable(m)
    if m.size == 0:
        return 0.0
    b00, b01 = m[0::2, 0::2], m[0::2, 1::2]
    b10, b11 = m[1::2, 0::2], m[1::2, 1::2]
    defect = np.sqrt(
        2.0 * np.abs(b11 - np.conj(b00)) ** 2 + 2.0 * np.abs(b01 + np.conj(b10)) ** 2
    )
    return float(defect.max())


def is_sigma(m: np.ndarray, tol: float = SIGMA_TOL) -> bool:
    return sigma_defect(m) <= tol


def jordan_block(a: SigmaMatrix, m: int) -> SigmaBlockMatrix:
    """J_m(A): A on the block diagonal, I₂ on the block superdiagonal."""
    if m < 1:
        raise ValueError("Jordan block order must be positive")
    zero, one = SigmaMatrix.zero(), SigmaMatrix.identity()
    return SigmaBlockMatrix(
        tuple(
            tuple(a if j == i else one if j == i + 1 else zero for j in range(m))
            for i in range(m)
        )
    )


def direct_sum(*parts: SigmaBlockMatrix) -> SigmaBlockMatrix:
    """Block-diagonal sum, e.g. of several Jordan blocks."""
    return SigmaBlockMatrix.block_diag(*parts)


# ── Determinant by Schur complements ───────────────────────────────────────────

def _hadamard_bound(m: np.ndarray) -> float:
    return float(np.prod(np.linalg.norm(m, axis=0)))


def block_det_detail(m: SigmaBlockMatrix | np.ndarray) -> DeterminantResult:
    """
    Determinant of a Σ-block matrix by recursive Schur complements.

    Each step multiplies by det S₁₁ = ‖S₁₁‖² and replaces the matrix by the
    Schur complement of its leading block. Double rows are swapped so the
    leading block is the largest of its block column; a double-row swap is
    two transpositions and leaves the sign alone. A vanishing block column
    gives 0. When every block of the column is below the pivot threshold but
    not zero, the remaining complement is handed to a complex LU determinant.
    """
    work = m.as_array() if isinstance(m, SigmaBlockMatrix) else _check_blockable(m)
    work = np.array(work, dtype=complex)
    n = work.shape[0]
    if work.shape != (n, n):
        raise QuaternionError(f"not blockable: shape {work.shape} is not square")
    bound = _hadamard_bound(work)
    if bound == 0.0:
        return DeterminantResult(0.0, True)
    entry_scale = float(np.abs(work).max())

    value = 1.0
    for k in range(0, n, 2):
        col = work[k:, k : k + 2]
        # ‖S_{j1}‖² = |s1|² + |s2|² for each block of the leading block column.
        norms = np.abs(col[0::2, 0]) ** 2 + np.abs(col[1::2, 0]) ** 2
        j = int(np.argmax(norms))
        if norms[j] == 0.0:
            return DeterminantResult(0.0, True)
        if np.sqrt(norms[j]) <= PIVOT_RTOL * entry_scale:
            rest = scipy.linalg.det(work[k:, k:]).real
            logger.debug("block_det: LU fallback at block column %d", k // 2)
            value *= rest
            break
        if j:
            r = k + 2 * j
            work[[k, k + 1, r, r + 1]] = work[[r, r + 1, k, k + 1]]
        pivot = work[k : k + 2, k : k + 2]
        value *= norms[j]
        # Σ inverse: S⁻¹ = S^H / det S.
        pivot_inv = pivot.conj().T / norms[j]
        factors = work[k + 2 :, k : k + 2] @ pivot_inv
        work[k + 2 :, k + 2 :] -= factors @ work[k : k + 2, k + 2 :]

    if value < DET_CLAMP_RTOL * bound:
        if value < -DET_CLAMP_RTOL * bound:
            logger.warning("block_det: negative determinant %.3e beyond roundoff", value)
        return DeterminantResult(0.0, True)
    return DeterminantResult(float(value), False)


def block_det(m: SigmaBlockMatrix | np.ndarray) -> float:
    return block_det_detail(m).value
