"""
quaternions/models.py

Value types of the Σ-algebra: 2×2 complex matrices S with S* = σ₂Sσ₂
(entrywise conjugate), the quaternions they are isomorphic to, and p×p block
matrices over Σ.

Nothing here is persisted; every type is an immutable dataclass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


SIGMA_1 = _frozen(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_2 = _frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_3 = _frozen(np.array([[1, 0], [0, -1]], dtype=complex))
IDENTITY_2 = _frozen(np.eye(2, dtype=complex))


@dataclass(frozen=True)
class Quaternion:
    """a·1 + b·i + c·j + d·k with real coefficients."""

    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __add__(self, other: Quaternion) -> Quaternion:
        return Quaternion(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __mul__(self, other: Quaternion | float) -> Quaternion:
        if not isinstance(other, Quaternion):
            r = float(other)
            return Quaternion(r * self.a, r * self.b, r * self.c, r * self.d)
        a1, b1, c1, d1 = self.as_tuple()
        a2, b2, c2, d2 = other.as_tuple()
        return Quaternion(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    __rmul__ = __mul__

    def conjugate(self) -> Quaternion:
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm_squared(self) -> float:
        return self.a**2 + self.b**2 + self.c**2 + self.d**2

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class SigmaMatrix:
    """
    Element of Σ stored by its generating scalars.

    The realized matrix is [[s1, −conj(s2)], [s2, conj(s1)]], so the
    Σ-structure holds by construction.
    """

    s1: complex = 0j
    s2: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "s1", complex(self.s1))
        object.__setattr__(self, "s2", complex(self.s2))

    # ── Constructors ───────────────────────────────────────────────────────────

    @classmethod
    def identity(cls) -> SigmaMatrix:
        return cls(1.0, 0.0)

    @classmethod
    def zero(cls) -> SigmaMatrix:
        return cls(0.0, 0.0)

    @classmethod
    def from_array(cls, m: np.ndarray, tol: float) -> SigmaMatrix:
        """
        Read (s1, s2) from the first column of a 2×2 array.

        Raises ValueError when the array is not 2×2 or violates the
        Σ-structure by more than ``tol``.
        """
        m = np.asarray(m, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2×2 block, got shape {m.shape}")
        defect = max(abs(m[1, 1] - np.conj(m[0, 0])), abs(m[0, 1] + np.conj(m[1, 0])))
        if defect > tol:
            raise ValueError(f"2×2 block is not in Σ (defect {defect:.3e} > {tol:.1e})")
        return cls(m[0, 0], m[1, 0])

    # ── Algebra ────────────────────────────────────────────────────────────────

    def __matmul__(self, other: SigmaMatrix) -> SigmaMatrix:
        return SigmaMatrix(
            self.s1 * other.s1 - self.s2.conjugate() * other.s2,
            self.s2 * other.s1 + self.s1.conjugate() * other.s2,
        )

    def __add__(self, other: SigmaMatrix) -> SigmaMatrix:
        return SigmaMatrix(self.s1 + other.s1, self.s2 + other.s2)

    def __sub__(self, other: SigmaMatrix) -> SigmaMatrix:
        return SigmaMatrix(self.s1 - other.s1, self.s2 - other.s2)

    def scale(self, alpha: float) -> SigmaMatrix:
        """Real multiple; complex scalars would leave Σ."""
        alpha = float(alpha)
        return SigmaMatrix(alpha * self.s1, alpha * self.s2)

    def det(self) -> float:
        return abs(self.s1) ** 2 + abs(self.s2) ** 2

    def adjoint(self) -> SigmaMatrix:
        """Conjugate transpose, which is again in Σ."""
        return SigmaMatrix(self.s1.conjugate(), -self.s2)

    def inverse(self) -> SigmaMatrix:
        d = self.det()
        if d == 0.0:
            raise ZeroDivisionError("zero element of Σ has no inverse")
        return self.adjoint().scale(1.0 / d)

    def as_array(self) -> np.ndarray:
        return np.array(
            [[self.s1, -self.s2.conjugate()], [self.s2, self.s1.conjugate()]],
            dtype=complex,
        )


@dataclass(frozen=True)
class SigmaBlockMatrix:
    """p×p array of Σ blocks, realized on demand as a 2p×2p complex matrix."""

    blocks: tuple[tuple[SigmaMatrix, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(row) for row in self.blocks)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("SigmaBlockMatrix needs a non-empty square grid of blocks")
        object.__setattr__(self, "blocks", rows)

    @property
    def p(self) -> int:
        return len(self.blocks)

    @classmethod
    def identity(cls, p: int) -> SigmaBlockMatrix:
        return cls(
            tuple(
                tuple(SigmaMatrix.identity() if i == j else SigmaMatrix.zero() for j in range(p))
                for i in range(p)
            )
        )

    @classmethod
    def block_diag(cls, *parts: SigmaBlockMatrix) -> SigmaBlockMatrix:
        if not parts:
            raise ValueError("block_diag needs at least one block matrix")
        p = sum(part.p for part in parts)
        rows = [[SigmaMatrix.zero() for _ in range(p)] for _ in range(p)]
        offset = 0
        for part in parts:
            for i in range(part.p):
                rows[offset + i][offset : offset + part.p] = part.blocks[i]
            offset += part.p
        return cls(tuple(tuple(row) for row in rows))

    @classmethod
    def from_array(cls, m: np.ndarray, tol: float) -> SigmaBlockMatrix:
        m = np.asarray(m, dtype=complex)
        n = m.shape[0]
        if m.ndim != 2 or m.shape[1] != n or n % 2:
            raise ValueError(f"expected a square matrix of even order, got shape {m.shape}")
        p = n // 2
        return cls(
            tuple(
                tuple(
                    SigmaMatrix.from_array(m[2 * i : 2 * i + 2, 2 * j : 2 * j + 2], tol)
                    for j in range(p)
                )
                for i in range(p)
            )
        )

    def block(self, i: int, j: int) -> SigmaMatrix:
        return self.blocks[i][j]

    def as_array(self) -> np.ndarray:
        return np.block([[blk.as_array() for blk in row] for row in self.blocks])


@dataclass(frozen=True)
class DeterminantResult:
    """Determinant of a Σ-block matrix with the near-singular flag."""

    value: float
    near_singular: bool
