"""Canonical (P, S) ensemble dynamics on grids.

Classical and quantum statistical ensembles share one canonical
formulation: a probability density P on configuration space, a conjugate
field S, and an ensemble energy functional generating dP/dt = dH/dS,
dS/dt = -dH/dP.  This package implements the continuous and discrete
versions of that machinery, an independent wavefunction reference
solver, constraint residuals whose preservation produces
superselection-type rules, and a scenario-driven CLI.
"""

from .constraints import (
    ClassicalityMetrics,
    ConstraintSpec,
    MonitorResult,
    ReferenceDynamics,
    StationarityResiduals,
    SuperselectionReport,
    SATISFIES,
    VIOLATES_INITIALLY,
    VIOLATES_UNDER_EVOLUTION,
    classicality_metrics,
    constraint_preservation_monitor,
    momentum_density_residual,
    projection_superselection_sum,
    spin_geodesic_residual,
    stationarity_secondary_residuals,
    superposition_test,
)
from .continuous import (
    ContinuousEnsembleHamiltonian,
    eom_rhs,
    evaluate,
    evolve_canonical,
    quantum_potential,
    stable_dt,
)
from .discrete import (
    BlochPoint,
    DiscreteEnsemble,
    DiscreteHamiltonian,
    bloch_map,
    bloch_state,
    bloch_vector,
    discrete_eom_rhs,
    evaluate_discrete,
    evolve_discrete,
    phase_difference_matrix,
    rate_equation_rhs,
    transition_rates,
)
from .errors import (
    DomainError,
    EnsembleLabError,
    NumericalError,
    ScenarioError,
    SolverAbort,
    StructuralError,
)
from .fields import (
    Ensemble,
    RealField,
    Wavefunction,
    from_wavefunction,
    gradient,
    integrate,
    laplacian,
    numeric_functional_derivative,
    to_wavefunction,
)
from .grid import Grid1D
from .observables import (
    DiagnosticsRecord,
    HomogeneityReport,
    ensemble_momentum,
    entropy,
    fisher_information,
    homogeneity_check,
    local_densities,
)
from .potentials import PotentialSpec
from .schrodinger import (
    MadelungComparison,
    compare_madelung_schrodinger,
    schrodinger_reference_evolve,
)
from .trajectory import Trajectory

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
