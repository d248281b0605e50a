"""Uniform one-dimensional grids, periodic (ring) or reflecting (line)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

BOUNDARY_KINDS = ("periodic", "reflecting")


@dataclass(frozen=True)
class Grid1D:
    """Uniformly spaced 1-D configuration space.

    Periodic grids identify ``x_max`` with ``x_min``, so the last sample
    sits at ``x_max - dx`` and there is no duplicated endpoint; reflecting
    grids include both endpoints.
    """

    x_min: float
    x_max: float
    n_points: int
    boundary: str = "reflecting"

    def __post_init__(self):
        if self.boundary not in BOUNDARY_KINDS:
            raise DomainError(f"unknown boundary kind {self.boundary!r}")
        if self.n_points < 8:
            raise DomainError(f"need at least 8 grid points, got {self.n_points}")
        if not self.x_min < self.x_max:
            raise DomainError(f"empty domain [{self.x_min}, {self.x_max}]")

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"

    @property
    def length(self) -> float:
        return self.x_max - self.x_min

    @property
    def dx(self) -> float:
        if self.periodic:
            return self.length / self.n_points
        return self.length / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        """Sample coordinates (read-only array)."""
        x = self.x_min + self.dx * np.arange(self.n_points)
        x.flags.writeable = False
        return x

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        """Riemann weights on rings, trapezoid weights on lines."""
        w = np.full(self.n_points, self.dx)
        if not self.periodic:
            w[0] = w[-1] = 0.5 * self.dx
        w.flags.writeable = False
        return w

    def __len__(self) -> int:
        return self.n_points
