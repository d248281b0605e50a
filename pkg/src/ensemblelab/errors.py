"""Exception hierarchy shared across the package."""


class EnsembleLabError(Exception):
    """Base class for all package errors."""


class StructuralError(EnsembleLabError):
    """Shape, length, or grid mismatch between values that must agree."""


class DomainError(EnsembleLabError):
    """Input is well-formed but outside the domain of an operation."""


class NumericalError(EnsembleLabError):
    """A numerical procedure failed (non-finite values, failed solve)."""


class SolverAbort(NumericalError):
    """Time integration aborted mid-run.

    Carries the trajectory accumulated before the abort so callers can
    report partial diagnostics.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ScenarioError(EnsembleLabError):
    """Scenario configuration failed validation; `field` names the bad key."""

    def __init__(self, message: str, field: str = ""):
        super().__init__(message)
        self.field = field
