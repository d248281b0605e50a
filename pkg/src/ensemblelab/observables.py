"""Scalar diagnostics and local densities of canonical ensembles."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calculus import gradient_values, integrate_values
from .continuous import ContinuousEnsembleHamiltonian, eom_rhs, evaluate
from .discrete import DiscreteEnsemble, DiscreteHamiltonian, discrete_eom_rhs, evaluate_discrete
from .errors import DomainError
from .fields import Ensemble, RealField, momentum_density_values
from .grid import Grid1D


def ensemble_momentum(e: Ensemble) -> float:
    """Total momentum, the quadrature of the momentum density P grad S."""
    return integrate_values(momentum_density_values(e), e.grid)


def entropy(e: Ensemble) -> float:
    """Differential entropy -int P log P dx (0 log 0 := 0); line grids only."""
    if e.grid.periodic:
        raise DomainError("entropy is defined here for reflecting (line) grids")
    P = np.clip(e.P.values, 0.0, None)
    integrand = np.where(P > 0.0, -P * np.log(np.where(P > 0.0, P, 1.0)), 0.0)
    return integrate_values(integrand, e.grid)


def fisher_information(e: Ensemble) -> float:
    """F = 4 int |grad sqrt(P)|^2 dx, finite wherever P touches zero."""
    u = np.sqrt(np.clip(e.P.values, 0.0, None))
    du = gradient_values(u, e.grid)
    return 4.0 * integrate_values(du * du, e.grid)


@dataclass(frozen=True)
class HomogeneityReport:
    scaling_defect: float
    identity_defect: float


def _scaled(e, factor: float):
    if isinstance(e, DiscreteEnsemble):
        return DiscreteEnsemble(factor * e.P, e.S, e.hbar, check=False)
    return Ensemble(
        RealField(e.grid, factor * e.P.values), e.S, e.hbar, e.mass, check=False
    )


def homogeneity_check(H, e, r: float = 1.0) -> HomogeneityReport:
    """Degree-r homogeneity in P and the induced energy identity.

    scaling_defect: max over factors {1/2, 2} of |H[fP,S] - f^r H[P,S]|.
    identity_defect: |H + (1/r) <dS/dt>| with dS/dt from the equations of
    motion; both vanish for every built-in kind at r = 1.
    """
    if r == 0.0:
        raise DomainError("homogeneity degree r must be nonzero")
    discrete = isinstance(e, DiscreteEnsemble)
    value = evaluate_discrete(H, e) if discrete else evaluate(H, e)
    scaling = 0.0
    for factor in (0.5, 2.0):
        scaled_value = (
            evaluate_discrete(H, _scaled(e, factor))
            if discrete
            else evaluate(H, _scaled(e, factor))
        )
        scaling = max(scaling, abs(scaled_value - factor**r * value))
    if discrete:
        _, dS = discrete_eom_rhs(H, e)
        mean_dS = float(np.dot(e.P, dS))
    else:
        _, dS = eom_rhs(H, e)
        mean_dS = integrate_values(e.P.values * dS.values, e.grid)
    identity = abs(value + mean_dS / r)
    return HomogeneityReport(scaling_defect=scaling, identity_defect=identity)


def local_densities(
    H: ContinuousEnsembleHamiltonian, e: Ensemble
) -> tuple[RealField, RealField]:
    """(-P dS/dt, P grad S): local energy and momentum densities (r = 1 kinds).

    Their quadratures reproduce the ensemble energy and momentum.
    """
    _, dS = eom_rhs(H, e)
    energy_density = RealField(e.grid, -e.P.values * dS.values)
    momentum_density = RealField(e.grid, momentum_density_values(e))
    return energy_density, momentum_density


@dataclass(frozen=True)
class DiagnosticsRecord:
    """One row of run diagnostics; NaN marks quantities undefined for the state."""

    energy: float
    momentum: float
    norm: float
    entropy: float
    fisher: float


def continuous_diagnostics(
    H: ContinuousEnsembleHamiltonian, e: Ensemble
) -> DiagnosticsRecord:
    try:
        ent = entropy(e)
    except DomainError:
        ent = float("nan")
    return DiagnosticsRecord(
        energy=evaluate(H, e),
        momentum=ensemble_momentum(e),
        norm=integrate_values(e.P.values, e.grid),
        entropy=ent,
        fisher=fisher_information(e),
    )


def discrete_diagnostics(H: DiscreteHamiltonian, e: DiscreteEnsemble) -> DiagnosticsRecord:
    P = np.clip(e.P, 0.0, None)
    shannon = float(-np.sum(np.where(P > 0.0, P * np.log(np.where(P > 0.0, P, 1.0)), 0.0)))
    return DiagnosticsRecord(
        energy=evaluate_discrete(H, e),
        momentum=float("nan"),
        norm=float(e.P.sum()),
        entropy=shannon,
        fisher=float("nan"),
    )
