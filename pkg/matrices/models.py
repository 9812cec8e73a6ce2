"""
matrices/models.py

Carrier types for the dense linear-algebra kernel.

ComplexMatrix is a plain 2-D complex ndarray; the services validate shape and
finiteness on entry (see matrices.services.as_complex_matrix).
"""

from dataclasses import dataclass
from typing import TypeAlias

import numpy as np

from quatnls.constants import BRANCH_CUT_EPS

ComplexMatrix: TypeAlias = np.ndarray


@dataclass(frozen=True)
class BranchedSqrtMap:
    """
    k(λ) = √(λ−μ)·√(λ+μ) with principal roots, cut along [−μ, μ].

    ``eps`` is the exclusion distance around the cut; arguments closer than
    that are refused instead of evaluated on the wrong sheet.
    """

    mu: float
    eps: float = BRANCH_CUT_EPS

    def __post_init__(self):
        if not np.isfinite(self.mu) or self.mu < 0:
            raise ValueError(f"mu must be a finite non-negative real, got {self.mu!r}")
        if self.eps < 0:
            raise ValueError("eps must be non-negative")
        object.__setattr__(self, "mu", float(self.mu))

    def cut_distance(self, lam: complex) -> float:
        """Euclidean distance from λ to the segment [−μ, μ]."""
        lam = complex(lam)
        overshoot = max(abs(lam.real) - self.mu, 0.0)
        return float(np.hypot(overshoot, lam.imag))
