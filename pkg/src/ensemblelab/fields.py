"""Canonical field values on a grid and the polar-form wavefunction bridge.

An ensemble is the pair of conjugate real fields (P, S): P is the
probability density on configuration space and S its conjugate, defined
only up to a global additive constant.  The equivalent wavefunction is
psi = sqrt(P) * exp(i S / hbar).
"""
from __future__ import annotations

from dataclasses import InitVar, dataclass
from typing import Callable

import numpy as np

from . import calculus
from .errors import DomainError, NumericalError, StructuralError
from .grid import Grid1D

# Relative to max(P): below this the phase is treated as undefined and
# filled from the nearest supported point.
SUPPORT_FLOOR = 1e-12

NORM_TOL = 1e-8


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class RealField:
    """Real samples tied to a grid; immutable after construction."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, float)
        if arr.shape != (self.grid.n_points,):
            raise StructuralError(
                f"field length {arr.shape} does not match grid ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(arr)):
            raise NumericalError("field contains non-finite entries")
        object.__setattr__(self, "values", arr)


def constant_field(grid: Grid1D, value: float) -> RealField:
    return RealField(grid, np.full(grid.n_points, float(value)))


def gradient(f: RealField) -> RealField:
    return RealField(f.grid, calculus.gradient_values(f.values, f.grid))


def laplacian(f: RealField) -> RealField:
    return RealField(f.grid, calculus.laplacian_values(f.values, f.grid))


def integrate(f: RealField) -> float:
    return calculus.integrate_values(f.values, f.grid)


@dataclass(frozen=True)
class Ensemble:
    """Canonical pair (P, S) with the constants hbar and mass.

    P must be nonnegative and normalized (unit quadrature) at validated
    construction.  Pass ``check=False`` for intermediate states produced
    by integrators, where norm drift is a reported diagnostic rather
    than an error.
    """

    P: RealField
    S: RealField
    hbar: float = 1.0
    mass: float = 1.0
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        if self.P.grid != self.S.grid:
            raise StructuralError("P and S live on different grids")
        if self.hbar <= 0.0 or self.mass <= 0.0:
            raise DomainError("hbar and mass must be positive")
        if check:
            if np.min(self.P.values) < 0.0:
                raise DomainError("P has negative entries")
            norm = integrate(self.P)
            if abs(norm - 1.0) > NORM_TOL:
                raise DomainError(f"P is not normalized: integral = {norm!r}")

    @property
    def grid(self) -> Grid1D:
        return self.P.grid


def ensemble_from_values(
    grid: Grid1D,
    P: np.ndarray,
    S: np.ndarray,
    hbar: float = 1.0,
    mass: float = 1.0,
    check: bool = True,
) -> Ensemble:
    return Ensemble(RealField(grid, P), RealField(grid, S), hbar, mass, check=check)


def normalized_density(grid: Grid1D, raw: np.ndarray) -> np.ndarray:
    """Clip negatives to zero and rescale to unit quadrature."""
    P = np.clip(np.asarray(raw, dtype=float), 0.0, None)
    total = calculus.integrate_values(P, grid)
    if total <= 0.0:
        raise DomainError("density has no mass to normalize")
    return P / total


@dataclass(frozen=True)
class Wavefunction:
    """Complex field on a grid in the polar bridge psi = sqrt(P) e^{iS/hbar}."""

    grid: Grid1D
    values: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        arr = _frozen_array(self.values, complex)
        if arr.shape != (self.grid.n_points,):
            raise StructuralError(
                f"wavefunction length {arr.shape} does not match grid "
                f"({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(arr)):
            raise NumericalError("wavefunction contains non-finite entries")
        object.__setattr__(self, "values", arr)
        if self.hbar <= 0.0 or self.mass <= 0.0:
            raise DomainError("hbar and mass must be positive")
        if check:
            norm = calculus.integrate_values(np.abs(arr) ** 2, self.grid)
            if abs(norm - 1.0) > NORM_TOL:
                raise DomainError(f"wavefunction is not normalized: norm^2 = {norm!r}")

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2


def normalize_wavefunction(
    grid: Grid1D, values: np.ndarray, hbar: float = 1.0, mass: float = 1.0
) -> Wavefunction:
    values = np.asarray(values, dtype=complex)
    norm_sq = calculus.integrate_values(np.abs(values) ** 2, grid)
    if norm_sq <= 0.0:
        raise DomainError("cannot normalize a zero wavefunction")
    return Wavefunction(grid, values / np.sqrt(norm_sq), hbar, mass)


def support_mask(P: np.ndarray, support_floor: float = SUPPORT_FLOOR) -> np.ndarray:
    """Points where the density is large enough for the phase to be defined."""
    peak = float(np.max(P))
    if peak <= 0.0:
        raise StructuralError("density is identically zero")
    return P > support_floor * peak


def nearest_fill(values: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Replace entries outside ``mask`` with the nearest masked value."""
    if mask.all():
        return values.copy()
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        raise StructuralError("no supported points to fill from")
    targets = np.arange(values.size)
    pos = np.searchsorted(idx, targets)
    pos_right = np.clip(pos, 0, idx.size - 1)
    pos_left = np.clip(pos - 1, 0, idx.size - 1)
    left, right = idx[pos_left], idx[pos_right]
    nearest = np.where(np.abs(targets - left) <= np.abs(right - targets), left, right)
    out = values.copy()
    out[~mask] = values[nearest[~mask]]
    return out


def to_wavefunction(e: Ensemble) -> Wavefunction:
    """Polar recombination sqrt(P) * exp(i S / hbar)."""
    amp = np.sqrt(np.clip(e.P.values, 0.0, None))
    values = amp * np.exp(1j * e.S.values / e.hbar)
    return Wavefunction(e.grid, values, e.hbar, e.mass, check=False)


def from_wavefunction(
    psi: Wavefunction, support_floor: float = SUPPORT_FLOOR
) -> Ensemble:
    """Polar decomposition with sweep-based phase unwrapping.

    The phase is unwrapped left to right across supported points, keeping
    neighbour jumps in (-pi, pi]; below-floor points inherit the nearest
    supported phase; the first supported point is the S = 0 reference.
    """
    P = np.abs(psi.values) ** 2
    mask = support_mask(P, support_floor)
    theta = np.angle(psi.values)
    idx = np.flatnonzero(mask)
    jumps = calculus.wrap_steps(np.diff(theta[idx]), 2.0 * np.pi)
    phase = np.zeros_like(theta)
    phase[idx] = np.concatenate(([0.0], np.cumsum(jumps)))
    phase = nearest_fill(phase, mask)
    S = psi.hbar * phase
    return ensemble_from_values(psi.grid, P, S, psi.hbar, psi.mass, check=False)


def conjugate_gradient_values(e: Ensemble) -> np.ndarray:
    """grad S with neighbour increments wrapped modulo 2*pi*hbar.

    Identical to the plain gradient wherever |S_{i+1} - S_i| < pi*hbar;
    the wrap makes winding phases on rings (plane waves) differentiate
    cleanly across the seam.
    """
    return calculus.phase_gradient_values(
        e.S.values, e.grid, 2.0 * np.pi * e.hbar
    )


def momentum_density_values(e: Ensemble) -> np.ndarray:
    """Momentum density J = P * grad S, evaluated through the wavefunction.

    Computed as hbar * Im(psi^* grad psi) with psi the recombined
    wavefunction: exactly zero for states that are real up to one global
    phase, gauge invariant, and seam-safe on rings.
    """
    psi = to_wavefunction(e).values
    grad_psi = calculus.gradient_values(psi, e.grid)
    return e.hbar * np.imag(np.conj(psi) * grad_psi)


def numeric_functional_derivative(
    F: Callable[[Ensemble], float],
    e: Ensemble,
    which: str,
    eps: float | None = None,
) -> RealField:
    """Central finite-difference functional derivative, the testing oracle.

    Estimates dF/df(x_i) as (F[f + eps*delta_i] - F[f - eps*delta_i]) /
    (2 * eps * dx) for f = P or S.  Exact for the uniform quadrature of
    periodic grids; on reflecting grids the endpoint weights differ from
    dx, so comparisons belong in the interior.
    """
    if which not in ("P", "S"):
        raise DomainError(f"which must be 'P' or 'S', got {which!r}")
    base = e.P.values if which == "P" else e.S.values
    if eps is None:
        eps = 1e-6 * max(1.0, float(np.max(np.abs(base))))
    dx = e.grid.dx
    out = np.empty_like(base)
    for i in range(base.size):
        bumped = base.copy()
        bumped[i] = base[i] + eps
        plus = F(_replace_field(e, which, bumped))
        bumped[i] = base[i] - eps
        minus = F(_replace_field(e, which, bumped))
        if not (np.isfinite(plus) and np.isfinite(minus)):
            raise NumericalError("functional returned a non-finite value")
        out[i] = (plus - minus) / (2.0 * eps * dx)
    return RealField(e.grid, out)


def _replace_field(e: Ensemble, which: str, values: np.ndarray) -> Ensemble:
    f = RealField(e.grid, values)
    if which == "P":
        return Ensemble(f, e.S, e.hbar, e.mass, check=False)
    return Ensemble(e.P, f, e.hbar, e.mass, check=False)
