"""Trajectory container shared by the continuous, reference, and discrete solvers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructuralError


@dataclass
class Trajectory:
    """Recorded snapshots with per-snapshot diagnostics.

    ``states`` holds Ensemble, Wavefunction, or DiscreteEnsemble values,
    one per recorded time.  ``norm`` is the total probability, a drift
    diagnostic: the solvers never renormalize mid-run.
    """

    times: np.ndarray
    states: list
    energy: np.ndarray
    norm: np.ndarray
    momentum: np.ndarray
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        arrays = (self.energy, self.norm, self.momentum)
        if len(self.states) != n or any(len(a) != n for a in arrays):
            raise StructuralError("trajectory arrays disagree on snapshot count")
        if n >= 2 and not np.all(np.diff(self.times) > 0):
            raise StructuralError("trajectory times must increase")

    def __len__(self) -> int:
        return len(self.times)

    @property
    def final(self):
        return self.states[-1]
