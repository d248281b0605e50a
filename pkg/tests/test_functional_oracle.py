"""The finite-difference functional derivative pins the analytic flow.

For each energy functional the canonical right-hand sides claim to be
(dH/dS, -dH/dP); here the same derivatives are estimated by brute-force
pointwise perturbation and the two must agree.
"""
import numpy as np
import pytest

import ensemblelab as el
from ensemblelab.fields import numeric_functional_derivative

from conftest import smooth_ring_ensemble


def _grid():
    return el.Grid1D(0.0, 2.0 * np.pi, 64, "periodic")


def _hamiltonians():
    pot = el.PotentialSpec.quadratic(0.3, -0.1, 0.2)
    return {
        "classical": el.ContinuousEnsembleHamiltonian.classical(pot),
        "quantum": el.ContinuousEnsembleHamiltonian.quantum(pot),
        "phase_translation": el.ContinuousEnsembleHamiltonian.phase_translation(0.7),
    }


@pytest.mark.parametrize("kind", ["classical", "quantum", "phase_translation"])
def test_eom_matches_numeric_derivative(kind):
    e = smooth_ring_ensemble(_grid(), hbar=0.9, mass=1.3)
    H = _hamiltonians()[kind]
    dP, dS = el.eom_rhs(H, e)
    num_dS = numeric_functional_derivative(lambda s: el.evaluate(H, s), e, "S")
    num_dP = numeric_functional_derivative(lambda s: el.evaluate(H, s), e, "P")
    scale_p = max(1.0, np.max(np.abs(dP.values)))
    scale_s = max(1.0, np.max(np.abs(dS.values)))
    assert np.max(np.abs(dP.values - num_dS.values)) / scale_p < 1e-4
    assert np.max(np.abs(dS.values + num_dP.values)) / scale_s < 1e-4


def test_classical_rhs_closed_forms():
    e = smooth_ring_ensemble(_grid(), hbar=1.0, mass=2.0)
    pot = el.PotentialSpec.quadratic(0.3, -0.1, 0.2)
    H = el.ContinuousEnsembleHamiltonian.classical(pot)
    dP, dS = el.eom_rhs(H, e)
    from ensemblelab.calculus import gradient_values
    from ensemblelab.fields import conjugate_gradient_values

    gs = conjugate_gradient_values(e)
    expected_dP = -gradient_values(e.P.values * gs / e.mass, e.grid)
    expected_dS = -(gs**2 / (2.0 * e.mass) + pot.values(e.grid, e.mass))
    assert np.max(np.abs(dP.values - expected_dP)) < 1e-12
    assert np.max(np.abs(dS.values - expected_dS)) < 1e-12


def test_quantum_rhs_adds_quantum_potential():
    e = smooth_ring_ensemble(_grid())
    pot = el.PotentialSpec.free()
    _, dS_c = el.eom_rhs(el.ContinuousEnsembleHamiltonian.classical(pot), e)
    _, dS_q = el.eom_rhs(el.ContinuousEnsembleHamiltonian.quantum(pot), e)
    q = el.quantum_potential(e)
    assert np.max(np.abs(dS_q.values - (dS_c.values - q.values))) < 1e-12
