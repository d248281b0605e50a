"""External potentials evaluable as V(x) and grad V(x) on a grid."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import calculus
from .errors import DomainError, NumericalError
from .fields import RealField
from .grid import Grid1D

POTENTIAL_KINDS = ("free", "harmonic", "quadratic", "custom")


@dataclass(frozen=True)
class PotentialSpec:
    """One of: free, harmonic(omega), quadratic(a0, a1, a2), custom(table).

    The harmonic kind is V = m * omega^2 * x^2 / 2, so evaluation takes the
    particle mass; the other kinds ignore it.  Custom potentials are
    tabulated on the grid and differentiated numerically.
    """

    kind: str
    omega: float = 0.0
    coeffs: tuple[float, float, float] = (0.0, 0.0, 0.0)
    table: RealField | None = None

    def __post_init__(self):
        if self.kind not in POTENTIAL_KINDS:
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind == "custom" and self.table is None:
            raise DomainError("custom potential needs a tabulated field")

    @classmethod
    def free(cls) -> "PotentialSpec":
        return cls("free")

    @classmethod
    def harmonic(cls, omega: float) -> "PotentialSpec":
        return cls("harmonic", omega=float(omega))

    @classmethod
    def quadratic(cls, a0: float, a1: float, a2: float) -> "PotentialSpec":
        return cls("quadratic", coeffs=(float(a0), float(a1), float(a2)))

    @classmethod
    def custom(cls, table: RealField) -> "PotentialSpec":
        return cls("custom", table=table)

    def values(self, grid: Grid1D, mass: float = 1.0) -> np.ndarray:
        x = grid.x
        if self.kind == "free":
            v = np.zeros(grid.n_points)
        elif self.kind == "harmonic":
            v = 0.5 * mass * self.omega**2 * x**2
        elif self.kind == "quadratic":
            a0, a1, a2 = self.coeffs
            v = a0 + a1 * x + a2 * x**2
        else:
            if self.table.grid != grid:
                raise DomainError("custom potential tabulated on a different grid")
            v = self.table.values.copy()
        if not np.all(np.isfinite(v)):
            raise NumericalError("potential is not finite on the grid")
        return v

    def gradient_values(self, grid: Grid1D, mass: float = 1.0) -> np.ndarray:
        x = grid.x
        if self.kind == "free":
            return np.zeros(grid.n_points)
        if self.kind == "harmonic":
            return mass * self.omega**2 * x
        if self.kind == "quadratic":
            _, a1, a2 = self.coeffs
            return a1 + 2.0 * a2 * x
        return calculus.gradient_values(self.values(grid), grid)
