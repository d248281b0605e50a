import numpy as np
import pytest

from ensemblelab import Ensemble, Grid1D, RealField
from ensemblelab.calculus import integrate_values


@pytest.fixture
def line_grid():
    return Grid1D(-10.0, 10.0, 512, "reflecting")


@pytest.fixture
def ring_grid():
    return Grid1D(0.0, 2.0 * np.pi, 256, "periodic")


def smooth_ring_ensemble(grid, hbar=1.0, mass=1.0, amplitude=0.3, s_scale=0.5):
    """Strictly positive density with a smooth conjugate field on a ring."""
    P = 1.0 + amplitude * np.cos(grid.x) + 0.5 * amplitude * np.sin(2.0 * grid.x)
    P = P / integrate_values(P, grid)
    S = s_scale * hbar * np.sin(grid.x)
    return Ensemble(RealField(grid, P), RealField(grid, S), hbar, mass)


@pytest.fixture
def ring_ensemble(ring_grid):
    return smooth_ring_ensemble(ring_grid)
