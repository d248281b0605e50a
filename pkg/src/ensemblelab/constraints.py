"""Canonical constraints K[P,S] = 0, their residuals, and superselection tests.

A constraint is imposed on the conjugate fields (P, S), not on the
wavefunction, so it is generally nonlinear in psi.  Whether a candidate
state satisfies a constraint is decided by a scalar residual that
vanishes exactly on the constraint surface; whether it keeps satisfying
it is decided by evolving and resampling (secondary-constraint
consistency).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .calculus import integrate_values
from .discrete import DiscreteEnsemble, bloch_vector, evolve_discrete
from .errors import DomainError, StructuralError
from .fields import (
    Ensemble,
    Wavefunction,
    from_wavefunction,
    momentum_density_values,
    to_wavefunction,
)
from .observables import entropy, fisher_information
from .potentials import PotentialSpec
from .schrodinger import (
    apply_hamiltonian,
    energy_expectation,
    schrodinger_reference_evolve,
)
from .trajectory import Trajectory

CONSTRAINT_KINDS = (
    "momentum_density",
    "spin_geodesic",
    "classicality",
    "projection_family",
)

SATISFIES = "satisfies"
VIOLATES_INITIALLY = "violates_initially"
VIOLATES_UNDER_EVOLUTION = "violates_under_evolution"


def momentum_density_residual(e: Ensemble) -> float:
    """P-weighted mean momentum magnitude, int P |grad S| dx.

    Zero exactly when the state is real up to one global phase on each
    connected support component.
    """
    return integrate_values(np.abs(momentum_density_values(e)), e.grid)


@dataclass(frozen=True)
class StationarityResiduals:
    classical: float
    quantum: float


def stationarity_secondary_residuals(
    e: Ensemble, potential: PotentialSpec
) -> StationarityResiduals:
    """Residuals of the conditions forced by keeping grad S = 0 in time.

    classical: int P |grad V| dx (the mean force magnitude).
    quantum:   ||H psi - E psi||_2 with E = <psi|H|psi>, the eigenstate
    defect of the discretized Hamiltonian.
    """
    grad_v = potential.gradient_values(e.grid, e.mass)
    classical = integrate_values(np.clip(e.P.values, 0.0, None) * np.abs(grad_v), e.grid)
    psi = to_wavefunction(e)
    h_psi = apply_hamiltonian(psi, potential)
    energy = energy_expectation(psi, potential)
    defect = h_psi - energy * psi.values
    quantum = float(np.sqrt(integrate_values(np.abs(defect) ** 2, e.grid)))
    return StationarityResiduals(classical=classical, quantum=quantum)


def spin_geodesic_residual(e: DiscreteEnsemble) -> float:
    """sqrt(P1 P2) |sin((S1-S2)/hbar)|: distance from the phi = 0 great circle.

    Vanishes on the circle and at the poles (where the phase is gauge);
    bounded by 1/2.
    """
    if e.d != 2:
        raise StructuralError("spin geodesic residual needs a 2-level ensemble")
    root = np.sqrt(max(e.P[0] * e.P[1], 0.0))
    return float(root * abs(np.sin((e.S[0] - e.S[1]) / e.hbar)))


@dataclass(frozen=True)
class ClassicalityMetrics:
    fisher: float
    entropy: float
    bound_gap: float
    gaussian_residual: float


def classicality_metrics(e: Ensemble) -> ClassicalityMetrics:
    """Fisher information, entropy, their inequality gap, and a moment score.

    The gap is F - 2 pi e exp(-2 H): nonnegative for every finite-entropy
    density on the line, zero exactly for Gaussians.  The moment score is
    |skewness| + |excess kurtosis| of P.  Rejects ring grids: the
    inequality is a statement about densities on the line.
    """
    if e.grid.periodic:
        raise DomainError("classicality metrics require a reflecting (line) grid")
    fisher = fisher_information(e)
    ent = entropy(e)
    bound_gap = fisher - 2.0 * np.pi * np.e * np.exp(-2.0 * ent)
    P = np.clip(e.P.values, 0.0, None)
    x = e.grid.x
    mean = integrate_values(x * P, e.grid)
    centered = x - mean
    var = integrate_values(centered**2 * P, e.grid)
    if var <= 0.0:
        raise DomainError("density has no width; moments are degenerate")
    skew = integrate_values(centered**3 * P, e.grid) / var**1.5
    kurt = integrate_values(centered**4 * P, e.grid) / var**2 - 3.0
    return ClassicalityMetrics(
        fisher=fisher,
        entropy=ent,
        bound_gap=bound_gap,
        gaussian_residual=abs(skew) + abs(kurt),
    )


def projection_superselection_sum(psi: np.ndarray, projectors) -> float:
    """sum_j <psi|E_j|psi>^2 for a complete orthogonal projector family.

    Equals 1 exactly when psi lies in a single subspace, and is bounded
    by 1 always (Cauchy-Schwarz on the probability vector).
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise StructuralError("psi must be a vector")
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > 1e-10:
        raise DomainError(f"psi is not normalized: |psi|^2 = {norm!r}")
    mats = [np.asarray(E, dtype=complex) for E in projectors]
    if not mats:
        raise DomainError("empty projector family")
    dim = psi.size
    total = np.zeros((dim, dim), dtype=complex)
    for i, E in enumerate(mats):
        if E.shape != (dim, dim):
            raise StructuralError("projector dimension does not match psi")
        total += E
        for j, other in enumerate(mats):
            expect = E if i == j else np.zeros_like(E)
            if np.max(np.abs(E @ other - expect)) > 1e-12:
                raise DomainError("projector family is not orthogonal")
    if np.max(np.abs(total - np.eye(dim))) > 1e-12:
        raise DomainError("projector family is not complete")
    probs = np.array([np.vdot(psi, E @ psi).real for E in mats])
    return float(np.sum(probs**2))


@dataclass(frozen=True)
class ConstraintSpec:
    """A named residual functional with a satisfaction tolerance."""

    kind: str
    tolerance: float = 1e-6
    projectors: tuple = ()

    def __post_init__(self):
        if self.kind not in CONSTRAINT_KINDS:
            raise DomainError(f"unknown constraint kind {self.kind!r}")
        if self.tolerance <= 0.0:
            raise DomainError("tolerance must be positive")
        if self.kind == "projection_family" and not self.projectors:
            raise DomainError("projection_family needs projector matrices")

    def residual(self, state) -> float:
        """Nonnegative residual; invariant under S -> S + const and global phase."""
        if self.kind == "projection_family":
            return max(0.0, 1.0 - projection_superselection_sum(state, self.projectors))
        if self.kind == "spin_geodesic":
            return spin_geodesic_residual(state)
        if isinstance(state, Wavefunction):
            state = from_wavefunction(state)
        if self.kind == "momentum_density":
            return momentum_density_residual(state)
        return classicality_metrics(state).gaussian_residual


@dataclass(frozen=True)
class ReferenceDynamics:
    """Reference-solver evolution used to probe constraint preservation."""

    potential: PotentialSpec
    dt: float


@dataclass
class SuperselectionReport:
    candidate: str
    residual_initial: float
    residual_max_over_horizon: float
    verdict: str
    secondary_residuals: dict = field(default_factory=dict)
    times: np.ndarray | None = None
    residuals: np.ndarray | None = None


def _verdict(residuals: np.ndarray, tolerance: float) -> str:
    if residuals[0] > tolerance:
        return VIOLATES_INITIALLY
    if np.max(residuals) > tolerance:
        return VIOLATES_UNDER_EVOLUTION
    return SATISFIES


def superposition_test(
    psi1: Wavefunction,
    psi2: Wavefunction,
    a: complex,
    b: complex,
    constraint: ConstraintSpec,
    dynamics: ReferenceDynamics,
    horizon: float,
    record_every: int = 1,
) -> SuperselectionReport:
    """Normalize a psi1 + b psi2, evolve it, and judge the constraint.

    The candidate is propagated with the reference solver over the
    horizon; the residual is sampled along the way and the verdict states
    whether the constraint fails immediately, fails under evolution, or
    holds throughout.
    """
    if psi1.grid != psi2.grid:
        raise StructuralError("superposed states live on different grids")
    combo = a * psi1.values + b * psi2.values
    norm_sq = integrate_values(np.abs(combo) ** 2, psi1.grid)
    if norm_sq <= 1e-14:
        raise DomainError("superposition is degenerate (zero vector)")
    psi0 = Wavefunction(
        psi1.grid, combo / np.sqrt(norm_sq), psi1.hbar, psi1.mass, check=False
    )
    n_steps = max(1, int(round(horizon / dynamics.dt)))
    trajectory = schrodinger_reference_evolve(
        psi0, dynamics.potential, dynamics.dt, n_steps, record_every=record_every
    )
    residuals = np.array([constraint.residual(s) for s in trajectory.states])
    secondary = stationarity_secondary_residuals(
        from_wavefunction(psi0), dynamics.potential
    )
    return SuperselectionReport(
        candidate=f"({a!r})*psi1 + ({b!r})*psi2",
        residual_initial=float(residuals[0]),
        residual_max_over_horizon=float(np.max(residuals)),
        verdict=_verdict(residuals, constraint.tolerance),
        secondary_residuals={
            "stationarity_classical": secondary.classical,
            "stationarity_quantum": secondary.quantum,
        },
        times=trajectory.times.copy(),
        residuals=residuals,
    )


@dataclass
class MonitorResult:
    times: np.ndarray
    residuals: np.ndarray
    tolerance: float
    initial_ok: bool
    first_violation_time: float | None
    verdict: str
    trajectory: Trajectory | None = None


def constraint_preservation_monitor(
    e0,
    H,
    constraint: ConstraintSpec,
    dt: float,
    n_steps: int,
    record_every: int = 1,
) -> MonitorResult:
    """Evolve e0 under its canonical flow, sampling the constraint residual.

    Works for continuous ensembles (canonical solver) and discrete ones
    (discrete solver).  An initial residual above tolerance is recorded,
    not raised: the verdict is then violates_initially.
    """
    if isinstance(e0, DiscreteEnsemble):
        trajectory = evolve_discrete(H, e0, dt, n_steps, record_every=record_every)
    else:
        from .continuous import evolve_canonical

        trajectory = evolve_canonical(H, e0, dt, n_steps, record_every=record_every)
    residuals = np.array([constraint.residual(s) for s in trajectory.states])
    above = np.flatnonzero(residuals > constraint.tolerance)
    first = float(trajectory.times[above[0]]) if above.size else None
    return MonitorResult(
        times=trajectory.times.copy(),
        residuals=residuals,
        tolerance=constraint.tolerance,
        initial_ok=bool(residuals[0] <= constraint.tolerance),
        first_violation_time=first,
        verdict=_verdict(residuals, constraint.tolerance),
        trajectory=trajectory,
    )


def spin_axis_alignment(e: DiscreteEnsemble, field) -> float:
    """Cosine of the angle between the Bloch vector and the field axis."""
    axis = np.asarray(field, dtype=float)
    axis = axis / np.linalg.norm(axis)
    vec = bloch_vector(e)
    return float(np.dot(vec, axis) / np.linalg.norm(vec))
