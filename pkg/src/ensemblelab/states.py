"""Initial-state factories used by scenarios and tests."""
from __future__ import annotations

import numpy as np
from scipy.special import eval_hermite, factorial

from .calculus import integrate_values
from .errors import DomainError
from .fields import (
    Ensemble,
    Wavefunction,
    ensemble_from_values,
    from_wavefunction,
    normalize_wavefunction,
)
from .grid import Grid1D


def gaussian_ensemble(
    grid: Grid1D,
    sigma: float,
    x0: float = 0.0,
    p0: float = 0.0,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> Ensemble:
    """Gaussian density of width sigma at x0 with uniform momentum p0 (S = p0 x)."""
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    x = grid.x
    raw = np.exp(-((x - x0) ** 2) / (2.0 * sigma**2))
    P = raw / integrate_values(raw, grid)
    return ensemble_from_values(grid, P, p0 * x, hbar, mass)


def ho_eigenstate(
    grid: Grid1D,
    n: int,
    omega: float = 1.0,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> Wavefunction:
    """Analytic harmonic-oscillator eigenstate, renormalized on the grid."""
    if n < 0:
        raise DomainError("quantum number n must be nonnegative")
    xi = np.sqrt(mass * omega / hbar) * grid.x
    norm = (mass * omega / (np.pi * hbar)) ** 0.25 / np.sqrt(2.0**n * factorial(n))
    values = norm * eval_hermite(n, xi) * np.exp(-0.5 * xi**2)
    return normalize_wavefunction(grid, values.astype(complex), hbar, mass)


def grid_eigenstate(
    grid: Grid1D,
    potential,
    n: int,
    hbar: float = 1.0,
    mass: float = 1.0,
) -> Wavefunction:
    """n-th eigenvector of the discretized Hamiltonian on a line grid.

    Unlike the analytic oscillator states, these are stationary to
    machine precision under both solvers, which makes them the right
    probes for exact-stationarity checks.
    """
    from scipy.linalg import eigh_tridiagonal

    if grid.periodic:
        raise DomainError("grid eigenstates are built for reflecting grids")
    coeff = hbar * hbar / (2.0 * mass * grid.dx**2)
    diag = 2.0 * coeff + potential.values(grid, mass)
    off = np.full(grid.n_points - 1, -coeff)
    _, vecs = eigh_tridiagonal(diag, off, select="i", select_range=(n, n))
    vec = vecs[:, 0]
    if vec[np.argmax(np.abs(vec))] < 0:
        vec = -vec
    return normalize_wavefunction(grid, vec.astype(complex), hbar, mass)


def plane_wave(
    grid: Grid1D, k: float, hbar: float = 1.0, mass: float = 1.0
) -> Wavefunction:
    """exp(ikx)/sqrt(L); on rings k must make the phase single-valued."""
    if grid.periodic:
        winding = k * grid.length / (2.0 * np.pi)
        if abs(winding - round(winding)) > 1e-9:
            raise DomainError(
                f"k = {k!r} does not wind an integer number of times on this ring"
            )
    values = np.exp(1j * k * grid.x)
    return normalize_wavefunction(grid, values, hbar, mass)


def ring_eigenstate(
    grid: Grid1D, k: int, flavor: str, hbar: float = 1.0, mass: float = 1.0
) -> Wavefunction:
    """cos(kx) or sin(kx) on a ring: a degenerate real eigenstate pair."""
    if not grid.periodic:
        raise DomainError("ring eigenstates need a periodic grid")
    if flavor == "cos":
        values = np.cos(k * grid.x).astype(complex)
    elif flavor == "sin":
        values = np.sin(k * grid.x).astype(complex)
    else:
        raise DomainError(f"flavor must be 'cos' or 'sin', got {flavor!r}")
    return normalize_wavefunction(grid, values, hbar, mass)


def superposition(components, grid: Grid1D, hbar: float = 1.0, mass: float = 1.0) -> Wavefunction:
    """Normalized sum of (coefficient, Wavefunction) pairs."""
    total = np.zeros(grid.n_points, dtype=complex)
    for coef, psi in components:
        if psi.grid != grid:
            raise DomainError("superposition component lives on a different grid")
        total += complex(coef) * psi.values
    return normalize_wavefunction(grid, total, hbar, mass)


def ensemble_of(psi: Wavefunction) -> Ensemble:
    return from_wavefunction(psi)
