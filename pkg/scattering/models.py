"""
scattering/models.py

Sampled potentials, Jost samples and verification reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.interpolate
from django.db import models


class SpectralCase(models.TextChoices):
    GENERIC = "generic", "Generic"
    EXCEPTIONAL = "exceptional", "Exceptional"
    SUPEREXCEPTIONAL = "superexceptional", "Superexceptional"


class VerificationLevel(models.TextChoices):
    FAST = "fast", "Symmetries and NLS residual"
    FULL = "full", "Full suite"


class JostSide(models.TextChoices):
    LEFT = "left", "Left (normalized at +∞)"
    RIGHT = "right", "Right (normalized at −∞)"


@dataclass(frozen=True, eq=False)
class SampledPotential:
    """Q(x; t) on a uniform x-grid, shape (n, 2, 2)."""

    xs: np.ndarray
    t: float
    Q_values: np.ndarray
    mu: float

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        q_values = np.array(self.Q_values, dtype=complex)
        if xs.ndim != 1 or xs.size < 4:
            raise ValueError("a sampled potential needs at least 4 grid points")
        if q_values.shape != (xs.size, 2, 2):
            raise ValueError(f"Q_values must have shape ({xs.size}, 2, 2), got {q_values.shape}")
        xs.setflags(write=False)
        q_values.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "Q_values", q_values)

    @property
    def x_min(self) -> float:
        return float(self.xs[0])

    @property
    def x_max(self) -> float:
        return float(self.xs[-1])

    @property
    def n(self) -> int:
        return int(self.xs.size)

    @property
    def end_norms(self) -> tuple[float, float]:
        return float(np.linalg.norm(self.Q_values[0])), float(np.linalg.norm(self.Q_values[-1]))

    @cached_property
    def spline(self) -> scipy.interpolate.CubicSpline:
        return scipy.interpolate.CubicSpline(self.xs, self.Q_values.reshape(self.n, 4), axis=0)

    def at(self, x: float) -> np.ndarray:
        return self.spline(x).reshape(2, 2)


@dataclass(frozen=True, eq=False)
class JostSamples:
    """Faddeev function m(x, λ) and its x-derivative on ``xs``."""

    side: str
    lam: complex
    xs: np.ndarray
    m: np.ndarray
    dm: np.ndarray

    def jost(self) -> np.ndarray:
        """F = e^{±iλx}m, + for the left side."""
        sign = 1.0 if self.side == JostSide.LEFT else -1.0
        return np.exp(sign * 1j * self.lam * self.xs)[:, None, None] * self.m


@dataclass(frozen=True, eq=False)
class ScatteringCoefficients:
    lam: float
    A_l: np.ndarray
    B_l: np.ndarray
    A_r: np.ndarray
    B_r: np.ndarray


@dataclass(frozen=True, eq=False)
class CaseClassification:
    case: str
    delta: np.ndarray
    det_a_l_zero: float


@dataclass(frozen=True)
class ConvergenceResult:
    """Residuals at step h and h/2; ``ratio`` is coarse / fine."""

    coarse: float
    fine: float

    @property
    def ratio(self) -> float:
        if self.fine == 0.0:
            return float("inf") if self.coarse > 0.0 else 1.0
        return self.coarse / self.fine


@dataclass(frozen=True)
class VerificationCheck:
    name: str
    residual: float
    tolerance: float
    passed: bool
    gating: bool = True
    detail: str = ""


@dataclass
class VerificationReport:
    label: str
    level: str
    strict: bool
    checks: list[VerificationCheck] = field(default_factory=list)
    case: str = ""

    def add(self, check: VerificationCheck) -> VerificationCheck:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks if check.gating)

    @property
    def failed(self) -> list[VerificationCheck]:
        return [check for check in self.checks if check.gating and not check.passed]

    @property
    def advisory_failures(self) -> list[VerificationCheck]:
        return [check for check in self.checks if not check.gating and not check.passed]
