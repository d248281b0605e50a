"""Energy functionals, the quantum potential, and the canonical solver."""
import numpy as np
import pytest

import ensemblelab as el
from ensemblelab.calculus import integrate_values
from ensemblelab.continuous import curvature_energy
from ensemblelab.fields import ensemble_from_values
from ensemblelab.states import gaussian_ensemble, ho_eigenstate

from conftest import smooth_ring_ensemble

HO = el.PotentialSpec.harmonic(1.0)
FREE = el.PotentialSpec.free()


class TestEvaluate:
    def test_classical_trivial_zero(self, ring_ensemble):
        e = ring_ensemble
        zero_s = ensemble_from_values(
            e.grid, e.P.values, np.zeros(len(e.grid)), e.hbar, e.mass
        )
        H = el.ContinuousEnsembleHamiltonian.classical(FREE)
        assert el.evaluate(H, zero_s) == 0.0

    def test_quantum_free_gaussian(self):
        g = el.Grid1D(-12.0, 12.0, 2048, "reflecting")
        for sigma in (0.8, 1.0, 1.7):
            e = gaussian_ensemble(g, sigma)
            H = el.ContinuousEnsembleHamiltonian.quantum(FREE)
            expected = 1.0 / (8.0 * sigma**2)
            assert el.evaluate(H, e) == pytest.approx(expected, rel=1e-4)

    def test_quantum_ho_ground_state(self):
        g = el.Grid1D(-10.0, 10.0, 2048, "reflecting")
        e = gaussian_ensemble(g, np.sqrt(0.5))
        H = el.ContinuousEnsembleHamiltonian.quantum(HO)
        assert el.evaluate(H, e) == pytest.approx(0.5, rel=1e-4)

    def test_quantum_energy_matches_reference_expectation(self):
        g = el.Grid1D(-10.0, 10.0, 1024, "reflecting")
        e = gaussian_ensemble(g, 0.9, x0=0.7, p0=0.4)
        H = el.ContinuousEnsembleHamiltonian.quantum(HO)
        from ensemblelab.schrodinger import energy_expectation

        ref = energy_expectation(el.to_wavefunction(e), HO)
        assert el.evaluate(H, e) == pytest.approx(ref, rel=1e-3)

    def test_s_shift_invariance(self, ring_ensemble):
        # Analytically exact; numerically limited only by the rounding of
        # the shifted differences.
        e = ring_ensemble
        for H in (
            el.ContinuousEnsembleHamiltonian.classical(FREE),
            el.ContinuousEnsembleHamiltonian.quantum(FREE),
            el.ContinuousEnsembleHamiltonian.phase_translation(0.4),
        ):
            for shift in (17.3, -3.0, 1e4):
                shifted = ensemble_from_values(
                    e.grid, e.P.values, e.S.values + shift, e.hbar, e.mass
                )
                assert el.evaluate(H, shifted) == pytest.approx(
                    el.evaluate(H, e), abs=1e-10
                )

    def test_quantum_is_classical_plus_curvature(self, ring_ensemble):
        e = ring_ensemble
        hc = el.evaluate(el.ContinuousEnsembleHamiltonian.classical(HO), e)
        hq = el.evaluate(el.ContinuousEnsembleHamiltonian.quantum(HO), e)
        fisher_term = (e.hbar**2 / (8.0 * e.mass)) * curvature_energy(
            e.P.values, e.grid
        )
        assert hq == pytest.approx(hc + fisher_term, abs=1e-10)

    def test_curvature_energy_matches_fisher_metric(self):
        g = el.Grid1D(-12.0, 12.0, 1024, "reflecting")
        e = gaussian_ensemble(g, 1.0)
        assert curvature_energy(e.P.values, g) == pytest.approx(
            el.fisher_information(e), rel=1e-3
        )

    def test_classical_limit_linear_in_hbar_squared(self, ring_grid):
        gaps = []
        for hbar in (0.4, 0.2, 0.1):
            e = smooth_ring_ensemble(ring_grid, hbar=hbar)
            hc = el.evaluate(el.ContinuousEnsembleHamiltonian.classical(FREE), e)
            hq = el.evaluate(el.ContinuousEnsembleHamiltonian.quantum(FREE), e)
            gaps.append(hq - hc)
        assert gaps[0] / gaps[1] == pytest.approx(4.0, rel=1e-10)
        assert gaps[1] / gaps[2] == pytest.approx(4.0, rel=1e-10)

    def test_negative_density_rejected(self, ring_ensemble):
        e = ring_ensemble
        P = e.P.values.copy()
        P[0] = -0.01
        bad = ensemble_from_values(e.grid, P, e.S.values, check=False)
        with pytest.raises(el.DomainError):
            el.evaluate(el.ContinuousEnsembleHamiltonian.classical(FREE), bad)


class TestQuantumPotential:
    def test_uniform_density_gives_zero(self, ring_grid):
        P = np.full(len(ring_grid), 1.0 / (2.0 * np.pi))
        e = ensemble_from_values(ring_grid, P, np.zeros(len(ring_grid)))
        assert np.max(np.abs(el.quantum_potential(e).values)) < 1e-10

    def test_gaussian_closed_form(self):
        g = el.Grid1D(-10.0, 10.0, 1024, "reflecting")
        sigma = 1.0
        e = gaussian_ensemble(g, sigma)
        q = el.quantum_potential(e).values
        interior = np.abs(g.x) <= 3.0 * sigma
        expected = 0.5 * (1.0 / (2.0 * sigma**2) - g.x**2 / (4.0 * sigma**4))
        assert np.max(np.abs((q - expected)[interior])) < 1e-3

    def test_eigenstate_identity(self):
        g = el.Grid1D(-10.0, 10.0, 1024, "reflecting")
        e = el.from_wavefunction(ho_eigenstate(g, 0))
        q = el.quantum_potential(e).values
        total = q + HO.values(g)
        interior = np.abs(g.x) <= 3.0
        assert np.max(np.abs(total[interior] - 0.5)) < 1e-3


class TestEomRhs:
    def test_zero_phase_gradient_freezes_density(self, line_grid):
        e = gaussian_ensemble(line_grid, 1.0)
        for H in (
            el.ContinuousEnsembleHamiltonian.classical(HO),
            el.ContinuousEnsembleHamiltonian.quantum(HO),
        ):
            dP, _ = el.eom_rhs(H, e)
            assert np.max(np.abs(dP.values)) == 0.0

    def test_classical_plane_flow(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        p0 = 2.0  # winds the ring: p0 * L = 2 * 2*pi*hbar
        P = (1.0 + 0.4 * np.cos(g.x)) / (2.0 * np.pi)
        P /= integrate_values(P, g)
        e = ensemble_from_values(g, P, p0 * g.x)
        H = el.ContinuousEnsembleHamiltonian.classical(FREE)
        dP, dS = el.eom_rhs(H, e)
        from ensemblelab.calculus import gradient_values

        expected = -(p0 / e.mass) * gradient_values(P, g)
        assert np.max(np.abs(dP.values - expected)) < 1e-9
        assert np.max(np.abs(dS.values + p0**2 / 2.0)) < 1e-9

    def test_quantum_zero_phase_rate_is_potentials(self, line_grid):
        # Pointwise on the support; below the floor dS is slaved by design.
        from ensemblelab.fields import support_mask

        e = gaussian_ensemble(line_grid, 1.0)
        H = el.ContinuousEnsembleHamiltonian.quantum(HO)
        _, dS = el.eom_rhs(H, e)
        expected = -(HO.values(line_grid) + el.quantum_potential(e).values)
        mask = support_mask(e.P.values)
        assert np.max(np.abs((dS.values - expected)[mask])) < 1e-12

    @pytest.mark.parametrize("kind", ["classical", "quantum", "phase_translation"])
    def test_probability_conservation(self, ring_ensemble, kind):
        if kind == "phase_translation":
            H = el.ContinuousEnsembleHamiltonian.phase_translation(0.9)
        else:
            H = getattr(el.ContinuousEnsembleHamiltonian, kind)(FREE)
        dP, _ = el.eom_rhs(H, ring_ensemble)
        assert abs(integrate_values(dP.values, ring_ensemble.grid)) < 1e-10


class TestEvolveCanonical:
    def test_phase_translation_advects(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        P0 = (1.0 + 0.5 * np.cos(g.x)) / (2.0 * np.pi)
        P0 /= integrate_values(P0, g)
        e = ensemble_from_values(g, P0, 0.1 * np.sin(g.x))
        H = el.ContinuousEnsembleHamiltonian.phase_translation(1.0)
        n = 1280
        traj = el.evolve_canonical(H, e, 2.0 * np.pi / n, n, record_every=n)
        assert np.max(np.abs(traj.final.P.values - P0)) < 1e-3

    def test_classical_energy_conservation(self):
        g = el.Grid1D(-30.0, 30.0, 1024, "reflecting")
        e = gaussian_ensemble(g, 1.5, x0=-10.0, p0=1.0)
        H = el.ContinuousEnsembleHamiltonian.classical(FREE)
        traj = el.evolve_canonical(H, e, 0.005, 1000, record_every=200)
        drift = abs(traj.energy[-1] / traj.energy[0] - 1.0)
        assert drift < 1e-6
        assert abs(traj.norm[-1] - traj.norm[0]) < 1e-12

    def test_quantum_energy_conservation(self):
        g = el.Grid1D(-10.0, 10.0, 256, "reflecting")
        e = gaussian_ensemble(g, np.sqrt(0.5), x0=1.0)
        H = el.ContinuousEnsembleHamiltonian.quantum(HO)
        dt = el.stable_dt(g, e.hbar, e.mass)
        traj = el.evolve_canonical(H, e, dt, 2000, record_every=500)
        assert abs(traj.energy[-1] / traj.energy[0] - 1.0) < 1e-6

    def test_unstable_step_aborts_with_partial(self):
        g = el.Grid1D(-10.0, 10.0, 256, "reflecting")
        e = gaussian_ensemble(g, np.sqrt(0.5), x0=1.0)
        H = el.ContinuousEnsembleHamiltonian.quantum(HO)
        dt = 200.0 * el.stable_dt(g, e.hbar, e.mass)
        with pytest.raises(el.SolverAbort) as info:
            el.evolve_canonical(H, e, dt, 5000, record_every=1)
        assert info.value.partial is not None
        assert len(info.value.partial) >= 1

    def test_rejects_bad_steps(self, ring_ensemble):
        H = el.ContinuousEnsembleHamiltonian.phase_translation(1.0)
        with pytest.raises(el.DomainError):
            el.evolve_canonical(H, ring_ensemble, -0.1, 10)
        with pytest.raises(el.DomainError):
            el.evolve_canonical(H, ring_ensemble, 0.1, 0)
