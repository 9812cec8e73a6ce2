"""
solitons/models.py

Built solutions and the reports derived from them.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from triplets.models import TripletConfig


def _readonly(value) -> np.ndarray:
    array = np.array(value, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class SolitonSolution:
    """
    Validated triplet together with P_r, H and the boundary values.

    P solves AP + PA = B_rC_r, H = f(iA) is the time generator, and
    q(x, t) → q_r as x → +∞, q(x, t) → q_l as x → −∞.
    """

    cfg: TripletConfig
    P: np.ndarray
    H: np.ndarray
    q_r: complex
    q_l: complex
    theta_r: float
    theta_l: float
    gamma: complex
    det_P: float

    def __post_init__(self):
        object.__setattr__(self, "P", _readonly(self.P))
        object.__setattr__(self, "H", _readonly(self.H))

    @property
    def A(self) -> np.ndarray:
        return self.cfg.A

    @property
    def B(self) -> np.ndarray:
        return self.cfg.B

    @property
    def C(self) -> np.ndarray:
        return self.cfg.C

    @property
    def mu(self) -> float:
        return self.cfg.mu

    @property
    def p(self) -> int:
        return self.cfg.p

    @cached_property
    def spectrum(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    @cached_property
    def alpha(self) -> float:
        """Decay rate min Re eig A."""
        return float(self.spectrum.real.min())

    @cached_property
    def p_singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.P, compute_uv=False)


@dataclass(frozen=True)
class SingularLocusReport:
    """Points of one time slice where det(e^{2xA}e^{−tH} + P_r) vanishes numerically."""

    t: float
    x_range: tuple[float, float]
    singular_points: tuple[float, ...]
    minima: tuple[float, ...]
    endpoint_measures: tuple[float, float]
    threshold: float

    @property
    def count(self) -> int:
        return len(self.singular_points)


@dataclass(frozen=True, eq=False)
class GridSample:
    """q on an (x, t) grid; rows follow ``ts``, columns follow ``xs``. Singular points are NaN."""

    xs: np.ndarray
    ts: np.ndarray
    q: np.ndarray
    singular_count: int
