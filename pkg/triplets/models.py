"""
triplets/models.py

Input data for one soliton solution: the right quadruplet (A, B_r, C_r) over Σ
with boundary amplitude μ and right phase θ_r, plus the reports produced while
validating it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from quaternions.models import SigmaBlockMatrix


def _readonly(value) -> np.ndarray:
    if isinstance(value, SigmaBlockMatrix):
        value = value.as_array()
    array = np.array(value, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class TripletConfig:
    """
    Right quadruplet (A, B_r, C_r) with μ and θ_r.

    Shapes are A: 2p×2p, B: 2p×2, C: 2×2p. ``theta_r=None`` asks the
    constructor for a phase compatible with the boundary condition.
    Arrays are copied and frozen; validation happens in
    triplets.services.validate_triplet.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    mu: float
    theta_r: float | None = 0.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "A", _readonly(self.A))
        object.__setattr__(self, "B", _readonly(self.B))
        object.__setattr__(self, "C", _readonly(self.C))
        object.__setattr__(self, "mu", float(self.mu))
        if self.theta_r is not None:
            object.__setattr__(self, "theta_r", float(self.theta_r))

    @property
    def p(self) -> int:
        return self.A.shape[0] // 2

    @property
    def label(self) -> str:
        return self.name or f"triplet(p={self.p})"


@dataclass(frozen=True)
class RankCheck:
    """Numerical rank of a Krylov matrix against the full dimension."""

    rank: int
    dimension: int

    @property
    def full(self) -> bool:
        return self.rank == self.dimension


@dataclass(frozen=True)
class MinimalityReport:
    controllable: bool
    observable: bool
    controllability_rank: int
    observability_rank: int
    dimension: int = 0

    @property
    def minimal(self) -> bool:
        return self.controllable and self.observable


@dataclass(frozen=True)
class Admissibility:
    """Boundary data derived from γ = C_{r,1} P_r⁻¹ B_{r,2}."""

    gamma: complex
    q_r: complex
    q_l: complex
    theta_r: float
    theta_l: float
