"""Grids, differential operators, quadrature, and the polar-form bridge."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import ensemblelab as el
from ensemblelab.calculus import integrate_values, wrap_steps
from ensemblelab.fields import (
    conjugate_gradient_values,
    ensemble_from_values,
    nearest_fill,
    normalize_wavefunction,
    support_mask,
)
from ensemblelab.states import gaussian_ensemble, ho_eigenstate


class TestGrid:
    def test_periodic_excludes_endpoint(self):
        g = el.Grid1D(0.0, 1.0, 10, "periodic")
        assert g.dx == pytest.approx(0.1)
        assert g.x[-1] == pytest.approx(0.9)

    def test_reflecting_includes_endpoint(self):
        g = el.Grid1D(0.0, 1.0, 11, "reflecting")
        assert g.dx == pytest.approx(0.1)
        assert g.x[-1] == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(x_min=0.0, x_max=1.0, n_points=4),
            dict(x_min=1.0, x_max=0.0, n_points=32),
            dict(x_min=0.0, x_max=1.0, n_points=32, boundary="absorbing"),
        ],
    )
    def test_rejects_bad_grids(self, kwargs):
        with pytest.raises(el.DomainError):
            el.Grid1D(**kwargs)


class TestCalculus:
    @pytest.mark.parametrize("boundary", ["periodic", "reflecting"])
    def test_gradient_kills_constants(self, boundary):
        g = el.Grid1D(-3.0, 5.0, 64, boundary)
        f = el.RealField(g, np.full(64, 2.7))
        assert np.max(np.abs(el.gradient(f).values)) < 1e-13
        assert np.max(np.abs(el.laplacian(f).values)) < 1e-12

    def test_gradient_linear_is_exact(self):
        g = el.Grid1D(-2.0, 2.0, 33, "reflecting")
        f = el.RealField(g, g.x.copy())
        assert el.gradient(f).values == pytest.approx(np.ones(33), abs=1e-12)

    def test_gradient_sin(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        f = el.RealField(g, np.sin(g.x))
        assert np.max(np.abs(el.gradient(f).values - np.cos(g.x))) <= 1e-3

    def test_laplacian_quadratic_interior(self):
        g = el.Grid1D(-1.0, 1.0, 41, "reflecting")
        f = el.RealField(g, g.x**2)
        assert el.laplacian(f).values[1:-1] == pytest.approx(2.0, abs=1e-8)

    def test_laplacian_sin(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        f = el.RealField(g, np.sin(g.x))
        assert np.max(np.abs(el.laplacian(f).values + np.sin(g.x))) <= 1e-3

    def test_integrate_constant(self):
        g = el.Grid1D(0.0, 1.0, 11, "reflecting")
        assert el.integrate(el.RealField(g, np.ones(11))) == pytest.approx(1.0, abs=1e-15)

    def test_integrate_antisymmetric(self):
        g = el.Grid1D(-4.0, 4.0, 65, "reflecting")
        f = el.RealField(g, g.x**3)
        assert abs(el.integrate(f)) < 1e-12

    def test_integrate_gaussian(self):
        g = el.Grid1D(-10.0, 10.0, 512, "reflecting")
        P = np.exp(-(g.x**2) / 2.0) / np.sqrt(2.0 * np.pi)
        assert el.integrate(el.RealField(g, P)) == pytest.approx(1.0, abs=1e-6)

    @settings(deadline=None, max_examples=25)
    @given(seed=st.integers(0, 10_000))
    def test_divergence_theorem_periodic(self, seed):
        g = el.Grid1D(0.0, 2.0 * np.pi, 128, "periodic")
        rng = np.random.default_rng(seed)
        f = el.RealField(g, rng.normal(size=128))
        assert abs(el.integrate(el.gradient(f))) < 1e-10

    @settings(deadline=None, max_examples=50)
    @given(
        step=st.floats(-50.0, 50.0, allow_nan=False),
        period=st.floats(0.1, 20.0, allow_nan=False),
    )
    def test_wrap_steps_property(self, step, period):
        wrapped = float(wrap_steps(np.array([step]), period)[0])
        assert -period / 2 - 1e-9 < wrapped <= period / 2 + 1e-9
        ratio = (step - wrapped) / period
        assert abs(ratio - round(ratio)) < 1e-6


class TestFieldValidation:
    def test_length_mismatch(self, line_grid):
        with pytest.raises(el.StructuralError):
            el.RealField(line_grid, np.ones(7))

    def test_non_finite(self, line_grid):
        bad = np.ones(line_grid.n_points)
        bad[3] = np.nan
        with pytest.raises(el.NumericalError):
            el.RealField(line_grid, bad)

    def test_values_are_immutable(self, line_grid):
        f = el.RealField(line_grid, np.ones(line_grid.n_points))
        with pytest.raises(ValueError):
            f.values[0] = 2.0

    def test_negative_density_rejected(self, line_grid):
        P = np.full(line_grid.n_points, 0.05)
        P[0] = -0.05
        with pytest.raises(el.DomainError):
            ensemble_from_values(line_grid, P, np.zeros_like(P))

    def test_unnormalized_density_rejected(self, line_grid):
        P = np.full(line_grid.n_points, 1.0)
        with pytest.raises(el.DomainError):
            ensemble_from_values(line_grid, P, np.zeros_like(P))

    def test_grid_mismatch(self, line_grid, ring_grid):
        P = el.RealField(line_grid, np.full(line_grid.n_points, 0.05))
        S = el.RealField(ring_grid, np.zeros(ring_grid.n_points))
        with pytest.raises(el.StructuralError):
            el.Ensemble(P, S)


class TestPolarBridge:
    def test_zero_phase_gives_real_wavefunction(self, line_grid):
        e = gaussian_ensemble(line_grid, 1.0)
        psi = el.to_wavefunction(e)
        assert np.max(np.abs(psi.values.imag)) == 0.0
        assert np.min(psi.values.real) >= 0.0

    def test_uniform_density_linear_phase_is_plane_wave(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        P = np.full(256, 1.0 / (2.0 * np.pi))
        e = ensemble_from_values(g, P, g.x.copy())
        psi = el.to_wavefunction(e)
        expected = np.exp(1j * g.x) / np.sqrt(2.0 * np.pi)
        assert np.max(np.abs(psi.values - expected)) < 1e-12

    def test_real_positive_gives_zero_phase(self, line_grid):
        e = gaussian_ensemble(line_grid, 1.0)
        psi = el.to_wavefunction(e)
        back = el.from_wavefunction(psi)
        assert np.max(np.abs(back.S.values)) == 0.0

    def test_plane_wave_phase_gradient(self):
        g = el.Grid1D(0.0, 2.0 * np.pi, 256, "periodic")
        hbar = 0.8
        psi = normalize_wavefunction(g, np.exp(3j * g.x), hbar=hbar)
        e = el.from_wavefunction(psi)
        grad_s = conjugate_gradient_values(e)
        assert np.max(np.abs(grad_s - 3.0 * hbar)) < 1e-6
        assert np.max(np.abs(e.P.values - 1.0 / (2.0 * np.pi))) < 1e-12
        # Plain central differences agree away from the winding seam.
        plain = el.gradient(e.S).values
        assert np.max(np.abs(plain[2:-2] - 3.0 * hbar)) < 1e-6

    def test_node_gives_pi_phase_jump(self):
        g = el.Grid1D(-10.0, 10.0, 513, "reflecting")
        psi = ho_eigenstate(g, 1)
        e = el.from_wavefunction(psi)
        node = np.argmin(np.abs(g.x))
        assert e.P.values[node] < 1e-12
        left = e.S.values[node - 5]
        right = e.S.values[node + 5]
        assert abs(abs(right - left) - np.pi * psi.hbar) < 1e-12

    def test_roundtrip_from_ensemble(self, ring_ensemble):
        e = ring_ensemble
        back = el.from_wavefunction(el.to_wavefunction(e))
        assert np.max(np.abs(back.P.values - e.P.values)) < 1e-14
        shift = back.S.values - e.S.values
        assert np.max(shift) - np.min(shift) < 1e-12

    def test_roundtrip_from_wavefunction(self, line_grid):
        rng = np.random.default_rng(3)
        raw = np.exp(-((line_grid.x - 0.5) ** 2) / 4.0) * np.exp(
            1j * 0.7 * np.sin(line_grid.x / 3.0)
        )
        psi = normalize_wavefunction(line_grid, raw)
        again = el.to_wavefunction(el.from_wavefunction(psi))
        mask = support_mask(psi.density())
        ratio = again.values[mask] / psi.values[mask]
        assert np.max(np.abs(ratio - ratio[0])) < 1e-9
        assert abs(abs(ratio[0]) - 1.0) < 1e-12

    def test_zero_wavefunction_rejected(self, line_grid):
        psi = el.Wavefunction(
            line_grid, np.zeros(line_grid.n_points, dtype=complex), check=False
        )
        with pytest.raises(el.StructuralError):
            el.from_wavefunction(psi)

    def test_nearest_fill(self):
        values = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        mask = np.array([False, True, False, False, True])
        filled = nearest_fill(values, mask)
        assert filled.tolist() == [2.0, 2.0, 2.0, 5.0, 5.0]


class TestNumericFunctionalDerivative:
    def test_linear_functional(self, ring_ensemble):
        deriv = el.numeric_functional_derivative(
            lambda e: integrate_values(e.P.values, e.grid), ring_ensemble, "P"
        )
        assert np.max(np.abs(deriv.values - 1.0)) < 1e-6

    def test_rejects_bad_target(self, ring_ensemble):
        with pytest.raises(el.DomainError):
            el.numeric_functional_derivative(lambda e: 0.0, ring_ensemble, "Q")

    def test_non_finite_functional(self, ring_ensemble):
        with pytest.raises(el.NumericalError):
            el.numeric_functional_derivative(
                lambda e: float("inf"), ring_ensemble, "P"
            )
