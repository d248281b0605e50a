"""Ensemble energy functionals on continuous configuration space and their flow.

Three functionals generate the canonical equations dP/dt = dH/dS,
dS/dt = -dH/dP:

* classical:          H[P,S] = integral P (|grad S|^2 / 2m + V) dx
* quantum:            classical plus (hbar^2/8m) * curvature term
                      -4 * integral sqrt(P) lap sqrt(P) dx
* phase_translation:  H[P,S] = -omega * integral P dS/dphi dphi

The quantum curvature term is the Fisher information of P written in
summation-by-parts form, so its exact discrete P-derivative is the
quantum potential Q = -(hbar^2/2m) lap(sqrt P)/sqrt(P) built from the
same 3-point stencil.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import (
    gradient_values,
    integrate_values,
    laplacian_values,
    phase_gradient_values,
)
from .errors import DomainError, SolverAbort
from .fields import (
    SUPPORT_FLOOR,
    Ensemble,
    RealField,
    conjugate_gradient_values,
    ensemble_from_values,
    momentum_density_values,
    nearest_fill,
    support_mask,
)
from .grid import Grid1D
from .potentials import PotentialSpec
from .trajectory import Trajectory

HAMILTONIAN_KINDS = ("classical", "quantum", "phase_translation")

# Evaluation rejects densities more negative than this; smaller dips are
# integrator noise and are clipped.
NEGATIVE_P_TOL = 1e-9


@dataclass(frozen=True)
class ContinuousEnsembleHamiltonian:
    """Generator of the canonical flow; hbar and mass come from the ensemble."""

    kind: str
    potential: PotentialSpec | None = None
    omega: float = 0.0

    def __post_init__(self):
        if self.kind not in HAMILTONIAN_KINDS:
            raise DomainError(f"unknown Hamiltonian kind {self.kind!r}")
        if self.kind in ("classical", "quantum") and self.potential is None:
            raise DomainError(f"{self.kind} kind needs a potential")

    @classmethod
    def classical(cls, potential: PotentialSpec) -> "ContinuousEnsembleHamiltonian":
        return cls("classical", potential=potential)

    @classmethod
    def quantum(cls, potential: PotentialSpec) -> "ContinuousEnsembleHamiltonian":
        return cls("quantum", potential=potential)

    @classmethod
    def phase_translation(cls, omega: float) -> "ContinuousEnsembleHamiltonian":
        return cls("phase_translation", omega=float(omega))


def curvature_energy(P: np.ndarray, grid: Grid1D) -> float:
    """Fisher information of P in summation-by-parts form, -4 int u lap u."""
    u = np.sqrt(np.clip(P, 0.0, None))
    return -4.0 * integrate_values(u * laplacian_values(u, grid), grid)


def quantum_potential_values(
    P: np.ndarray,
    grid: Grid1D,
    hbar: float,
    mass: float,
    support_floor: float = SUPPORT_FLOOR,
) -> np.ndarray:
    u = np.sqrt(np.clip(P, 0.0, None))
    lap = laplacian_values(u, grid)
    mask = support_mask(P, support_floor)
    q = np.zeros_like(P)
    q[mask] = -(hbar * hbar / (2.0 * mass)) * lap[mask] / u[mask]
    return nearest_fill(q, mask)


def quantum_potential(e: Ensemble, support_floor: float = SUPPORT_FLOOR) -> RealField:
    """Q = -(hbar^2/2m) lap(sqrt P) / sqrt(P), nearest-filled below the floor."""
    return RealField(
        e.grid,
        quantum_potential_values(e.P.values, e.grid, e.hbar, e.mass, support_floor),
    )


def _checked_density(P: np.ndarray) -> np.ndarray:
    if np.min(P) < -NEGATIVE_P_TOL:
        raise DomainError(f"P has negative entries (min = {np.min(P)!r})")
    return np.clip(P, 0.0, None)


def evaluate(H: ContinuousEnsembleHamiltonian, e: Ensemble) -> float:
    """Value of the functional; invariant under S -> S + const."""
    grid = e.grid
    P = _checked_density(e.P.values)
    gS = conjugate_gradient_values(e)
    if H.kind == "phase_translation":
        return -H.omega * integrate_values(P * gS, grid)
    V = H.potential.values(grid, e.mass)
    value = integrate_values(P * (gS * gS / (2.0 * e.mass) + V), grid)
    if H.kind == "quantum":
        value += (e.hbar**2 / (8.0 * e.mass)) * curvature_energy(P, grid)
    return float(value)


def _rhs(
    H: ContinuousEnsembleHamiltonian,
    P: np.ndarray,
    S: np.ndarray,
    grid: Grid1D,
    hbar: float,
    mass: float,
    V: np.ndarray | None,
    support_floor: float,
) -> tuple[np.ndarray, np.ndarray]:
    period = 2.0 * np.pi * hbar
    if H.kind == "phase_translation":
        gS = phase_gradient_values(S, grid, period)
        return H.omega * gradient_values(P, grid), H.omega * gS
    if H.kind == "classical":
        # Classically S is a globally defined field (a momentum potential),
        # meaningful even where P vanishes: no support handling is needed.
        gS = phase_gradient_values(S, grid, period)
        dP = -gradient_values(P * gS / mass, grid)
        return dP, -(gS * gS / (2.0 * mass) + V)
    # Quantum kind: S is a phase, undefined below the support floor.  There
    # it is slaved to the nearest supported value, the current it would
    # carry is dropped, and dS/dt is extended from the support.  Evolving
    # the raw fields instead lets the exponential tail pump grid-scale
    # noise into the bulk well before one period elapses.
    mask = support_mask(P, support_floor)
    gS = phase_gradient_values(nearest_fill(S, mask), grid, period)
    current = np.where(mask, P * gS / mass, 0.0)
    dP = -gradient_values(current, grid)
    dS = -(
        gS * gS / (2.0 * mass)
        + V
        + quantum_potential_values(P, grid, hbar, mass, support_floor)
    )
    return dP, nearest_fill(dS, mask)


def eom_rhs(
    H: ContinuousEnsembleHamiltonian,
    e: Ensemble,
    support_floor: float = SUPPORT_FLOOR,
) -> tuple[RealField, RealField]:
    """Canonical right-hand sides (dP/dt, dS/dt) from analytic derivatives."""
    P = _checked_density(e.P.values)
    V = None
    if H.kind in ("classical", "quantum"):
        V = H.potential.values(e.grid, e.mass)
    dP, dS = _rhs(H, P, e.S.values, e.grid, e.hbar, e.mass, V, support_floor)
    return RealField(e.grid, dP), RealField(e.grid, dS)


def stable_dt(grid: Grid1D, hbar: float, mass: float) -> float:
    """Explicit-step bound 0.1 * m * dx^2 / hbar for the quantum kind."""
    return 0.1 * mass * grid.dx**2 / hbar


def evolve_canonical(
    H: ContinuousEnsembleHamiltonian,
    e0: Ensemble,
    dt: float,
    n_steps: int,
    record_every: int = 1,
    support_floor: float = SUPPORT_FLOOR,
    abort_tol: float = NEGATIVE_P_TOL,
) -> Trajectory:
    """Classic RK4 on the coupled (P, S) fields.

    P is never renormalized mid-run; norm drift shows up in the
    trajectory diagnostics.  A density dipping below ``-abort_tol``
    aborts with the partial trajectory attached (stability violation).
    """
    if dt <= 0.0 or n_steps < 1:
        raise DomainError("need dt > 0 and n_steps >= 1")
    grid = e0.grid
    hbar, mass = e0.hbar, e0.mass
    V = None
    if H.kind in ("classical", "quantum"):
        V = H.potential.values(grid, mass)

    P = e0.P.values.copy()
    S = e0.S.values.copy()

    times, states, energies, norms, momenta = [], [], [], [], []

    def record(step: int) -> None:
        snap = ensemble_from_values(grid, P, S, hbar, mass, check=False)
        times.append(step * dt)
        states.append(snap)
        energies.append(evaluate(H, snap))
        norms.append(integrate_values(P, grid))
        momenta.append(integrate_values(momentum_density_values(snap), grid))

    def build() -> Trajectory:
        return Trajectory(
            times=np.array(times),
            states=states,
            energy=np.array(energies),
            norm=np.array(norms),
            momentum=np.array(momenta),
        )

    record(0)
    for step in range(1, n_steps + 1):
        k1P, k1S = _rhs(H, P, S, grid, hbar, mass, V, support_floor)
        k2P, k2S = _rhs(
            H, P + 0.5 * dt * k1P, S + 0.5 * dt * k1S, grid, hbar, mass, V, support_floor
        )
        k3P, k3S = _rhs(
            H, P + 0.5 * dt * k2P, S + 0.5 * dt * k2S, grid, hbar, mass, V, support_floor
        )
        k4P, k4S = _rhs(H, P + dt * k3P, S + dt * k3S, grid, hbar, mass, V, support_floor)
        P = P + (dt / 6.0) * (k1P + 2.0 * k2P + 2.0 * k3P + k4P)
        S = S + (dt / 6.0) * (k1S + 2.0 * k2S + 2.0 * k3S + k4S)

        bad = not (np.all(np.isfinite(P)) and np.all(np.isfinite(S)))
        if bad or np.min(P) < -abort_tol:
            reason = "non-finite fields" if bad else f"P fell below {-abort_tol!r}"
            raise SolverAbort(
                f"canonical evolution aborted at step {step}: {reason}",
                partial=build(),
            )
        if step % record_every == 0:
            record(step)
    return build()
