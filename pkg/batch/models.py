"""
batch/models.py

Run parameters collected from the command line.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from batch.services import ConfigParseError


@dataclass(frozen=True)
class RunConfig:
    """
    One CLI invocation: config path, command, (x, t) grid, tolerance override
    and output path. ``out=None`` means stdout.
    """

    config_path: Path
    command: str
    x_min: float = -10.0
    x_max: float = 10.0
    n_x: int = 201
    t_min: float = 0.0
    t_max: float = 1.0
    n_t: int = 11
    tol: float | None = None
    out: Path | None = None

    def __post_init__(self):
        if self.n_x < 1 or self.n_t < 1:
            raise ConfigParseError(f"grids must be nonempty (nx={self.n_x}, nt={self.n_t})")
        if not self.x_min < self.x_max:
            raise ConfigParseError(f"x_min must be below x_max (got {self.x_min}, {self.x_max})")
        if self.t_min > self.t_max:
            raise ConfigParseError(f"t_min must not exceed t_max (got {self.t_min}, {self.t_max})")
        if self.tol is not None and not self.tol > 0:
            raise ConfigParseError(f"--tol must be positive, got {self.tol}")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_x)

    @property
    def ts(self) -> np.ndarray:
        if self.n_t == 1:
            return np.array([self.t_min])
        return np.linspace(self.t_min, self.t_max, self.n_t)
