"""Scenario execution and machine-readable result emission.

Every run writes a CSV of per-sample diagnostics (columns t, energy,
norm, momentum, entropy, fisher, constraint_residual) and/or a
schema-versioned JSON envelope {schema_version, scenario, rows, report}.
Output is deterministic: identical configs produce identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constraints import ConstraintSpec, _verdict
from .continuous import ContinuousEnsembleHamiltonian, evolve_canonical
from .discrete import (
    DiscreteEnsemble,
    DiscreteHamiltonian,
    bloch_state,
    discrete_eom_rhs,
    evolve_discrete,
    rate_equation_rhs,
)
from .errors import DomainError, SolverAbort
from .fields import Ensemble, RealField, from_wavefunction, to_wavefunction
from .grid import Grid1D
from .observables import continuous_diagnostics, discrete_diagnostics
from .potentials import PotentialSpec
from .scenario import Scenario
from .schrodinger import compare_madelung_schrodinger, schrodinger_reference_evolve
from .states import gaussian_ensemble, ho_eigenstate, plane_wave, superposition
from .trajectory import Trajectory

SCHEMA_VERSION = "1"

CSV_COLUMNS = ("t", "energy", "norm", "momentum", "entropy", "fisher", "constraint_residual")


@dataclass
class CaseResult:
    """Diagnostics rows plus the summary report of one executed case."""

    scenario: str
    case: str | None
    rows: list
    report: dict
    aborted: bool = False

    @property
    def label(self) -> str:
        return self.scenario if self.case is None else f"{self.scenario}__{self.case}"


@dataclass
class RunResult:
    scenario: str
    cases: list = field(default_factory=list)

    @property
    def aborted(self) -> bool:
        return any(c.aborted for c in self.cases)


def _build_grid(system: dict) -> Grid1D:
    return Grid1D(
        x_min=float(system["x_min"]),
        x_max=float(system["x_max"]),
        n_points=int(system["n_points"]),
        boundary=system["boundary"],
    )


def _build_potential(spec: dict, grid: Grid1D) -> PotentialSpec:
    kind = spec["kind"]
    if kind == "free":
        return PotentialSpec.free()
    if kind == "harmonic":
        return PotentialSpec.harmonic(spec["omega"])
    if kind == "quadratic":
        a0, a1, a2 = (float(c) for c in spec["coeffs"])
        return PotentialSpec.quadratic(a0, a1, a2)
    if "values" in spec:
        return PotentialSpec.custom(RealField(grid, np.asarray(spec["values"], dtype=float)))
    coeffs = np.asarray(spec["polynomial"], dtype=float)
    table = np.polynomial.polynomial.polyval(grid.x, coeffs)
    return PotentialSpec.custom(RealField(grid, table))


def _build_component(comp: dict, grid: Grid1D, system: dict, hbar: float, mass: float):
    preset = comp["preset"]
    if preset == "gaussian":
        e = gaussian_ensemble(
            grid, comp["sigma"], comp.get("x0", 0.0), comp.get("p0", 0.0), hbar, mass
        )
        return to_wavefunction(e)
    if preset == "ho_eigenstate":
        omega = comp.get("omega", system["potential"].get("omega", 1.0))
        return ho_eigenstate(grid, comp["n"], omega, hbar, mass)
    return plane_wave(grid, comp["k"], hbar, mass)


def _build_continuous_initial(cfg: dict, grid: Grid1D) -> Ensemble:
    system = cfg["system"]
    init = cfg["initial_state"]
    hbar = float(system.get("hbar", 1.0))
    mass = float(system.get("mass", 1.0))
    preset = init["preset"]
    if preset == "gaussian":
        return gaussian_ensemble(
            grid, init["sigma"], init.get("x0", 0.0), init.get("p0", 0.0), hbar, mass
        )
    if preset == "ho_eigenstate":
        omega = init.get("omega", system["potential"].get("omega", 1.0))
        return from_wavefunction(ho_eigenstate(grid, init["n"], omega, hbar, mass))
    if preset == "plane_wave":
        return from_wavefunction(plane_wave(grid, init["k"], hbar, mass))
    components = [
        (complex(c["coef"][0], c["coef"][1]), _build_component(c, grid, system, hbar, mass))
        for c in init["components"]
    ]
    return from_wavefunction(superposition(components, grid, hbar, mass))


def _build_discrete_initial(cfg: dict) -> DiscreteEnsemble:
    system = cfg["system"]
    init = cfg["initial_state"]
    hbar = float(system.get("hbar", 1.0))
    if init["preset"] == "bloch":
        return bloch_state(init["theta"], init["phi"], hbar)
    return DiscreteEnsemble(
        np.asarray(init["P"], dtype=float), np.asarray(init["S"], dtype=float), hbar
    )


def _build_discrete_hamiltonian(system: dict) -> DiscreteHamiltonian:
    ham = system["hamiltonian"]
    if ham["kind"] == "spin_half":
        return DiscreteHamiltonian.spin_half(ham["mu"], ham["field"])
    if ham["kind"] == "quantum_basis":
        real = np.asarray(ham["matrix_real"], dtype=float)
        imag = np.asarray(ham.get("matrix_imag", np.zeros_like(real)), dtype=float)
        return DiscreteHamiltonian.quantum_basis(real + 1j * imag)
    d = int(system["dimension"])
    rng = np.random.default_rng(int(ham["seed"]))
    raw = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return DiscreteHamiltonian.quantum_basis(0.5 * (raw + raw.conj().T))


def _constraint_from_config(cfg: dict) -> tuple[ConstraintSpec | None, float | None]:
    block = cfg.get("constraint")
    if block is None:
        return None, None
    spec = ConstraintSpec(kind=block["kind"], tolerance=float(block.get("tolerance", 1e-6)))
    horizon = block.get("horizon")
    return spec, None if horizon is None else float(horizon)


def _drift_report(trajectory: Trajectory) -> dict:
    energy0, energy1 = float(trajectory.energy[0]), float(trajectory.energy[-1])
    scale = max(abs(energy0), 1e-30)
    report = {
        "final_time": float(trajectory.times[-1]),
        "energy_initial": energy0,
        "energy_final": energy1,
        "energy_drift_rel": abs(energy1 - energy0) / scale,
        "norm_drift": abs(float(trajectory.norm[-1]) - float(trajectory.norm[0])),
    }
    if np.all(np.isfinite(trajectory.momentum)):
        report["momentum_drift"] = abs(
            float(trajectory.momentum[-1]) - float(trajectory.momentum[0])
        )
    return report


def _constraint_report(
    constraint: ConstraintSpec, horizon: float | None, trajectory: Trajectory
):
    times = trajectory.times
    keep = np.ones(len(times), dtype=bool)
    if horizon is not None:
        keep = times <= horizon + 1e-12
    residuals = np.array(
        [constraint.residual(s) for s, k in zip(trajectory.states, keep) if k]
    )
    kept_times = times[keep]
    above = np.flatnonzero(residuals > constraint.tolerance)
    return {
        "kind": constraint.kind,
        "tolerance": constraint.tolerance,
        "residual_initial": float(residuals[0]),
        "residual_max": float(np.max(residuals)),
        "first_violation_time": (
            float(kept_times[above[0]]) if above.size else None
        ),
        "verdict": _verdict(residuals, constraint.tolerance),
    }, residuals, keep


def _advection_report(trajectory: Trajectory, omega: float, grid: Grid1D) -> dict:
    """L-inf distance from the exact rigid translation, at roll-aligned times."""
    p0 = trajectory.states[0].P.values
    worst = 0.0
    checked = 0
    for t, state in zip(trajectory.times, trajectory.states):
        shift = omega * t / grid.dx
        if abs(shift - round(shift)) < 1e-9:
            translated = np.roll(p0, -int(round(shift)) % grid.n_points)
            worst = max(worst, float(np.max(np.abs(state.P.values - translated))))
            checked += 1
    return {"advection_linf": worst, "advection_samples": checked}


def _rate_identity_report(H: DiscreteHamiltonian, trajectory: Trajectory) -> dict:
    worst_identity = 0.0
    worst_sum = 0.0
    for state in trajectory.states:
        dP, _ = discrete_eom_rhs(H, state)
        worst_identity = max(
            worst_identity, float(np.max(np.abs(dP - rate_equation_rhs(H, state))))
        )
        worst_sum = max(worst_sum, abs(float(dP.sum())))
    return {"rate_identity_max": worst_identity, "probability_rate_sum_max": worst_sum}


def _rows_from_states(trajectory, residuals, keep, diagnostics) -> list:
    rows = []
    res_iter = iter(residuals if residuals is not None else [])
    for i, (t, state) in enumerate(zip(trajectory.times, trajectory.states)):
        rec = diagnostics(i, state)
        if residuals is not None and keep[i]:
            residual = float(next(res_iter))
        else:
            residual = float("nan")
        rows.append(
            {
                "t": float(t),
                "energy": rec.energy,
                "norm": rec.norm,
                "momentum": rec.momentum,
                "entropy": rec.entropy,
                "fisher": rec.fisher,
                "constraint_residual": residual,
            }
        )
    return rows


def run_case(cfg: dict, scenario_name: str, case_name: str | None) -> CaseResult:
    """Execute one resolved configuration."""
    system = cfg["system"]
    dyn = cfg["dynamics"]
    stride = int(cfg.get("output", {}).get("stride", 1))
    dt, n_steps = float(dyn["dt"]), int(dyn["n_steps"])
    constraint, horizon = _constraint_from_config(cfg)

    report: dict = {"solver": dyn["solver"]}
    aborted = False

    if system["kind"] == "discrete":
        H = _build_discrete_hamiltonian(system)
        e0 = _build_discrete_initial(cfg)
        try:
            trajectory = evolve_discrete(H, e0, dt, n_steps, record_every=stride)
        except SolverAbort as err:
            trajectory = err.partial
            aborted = True
            report["abort"] = str(err)
        report.update(_drift_report(trajectory))
        report.update(_rate_identity_report(H, trajectory))
        residuals = keep = None
        if constraint is not None:
            con_report, residuals, keep = _constraint_report(constraint, horizon, trajectory)
            report["constraint"] = con_report
        rows = _rows_from_states(
            trajectory, residuals, keep, lambda i, s: discrete_diagnostics(H, s)
        )
        return CaseResult(scenario_name, case_name, rows, report, aborted)

    grid = _build_grid(system)
    potential = _build_potential(system["potential"], grid)
    kind = system["hamiltonian"]
    if kind == "phase_translation":
        H = ContinuousEnsembleHamiltonian.phase_translation(system["omega"])
    elif kind == "classical":
        H = ContinuousEnsembleHamiltonian.classical(potential)
    else:
        H = ContinuousEnsembleHamiltonian.quantum(potential)
    e0 = _build_continuous_initial(cfg, grid)

    if dyn["solver"] == "both":
        try:
            comparison = compare_madelung_schrodinger(
                e0, potential, dt, n_steps, record_every=stride
            )
        except SolverAbort as err:
            trajectory = err.partial
            report["abort"] = str(err)
            rows = _rows_from_states(
                trajectory, None, None, lambda i, s: continuous_diagnostics(H, s)
            )
            return CaseResult(scenario_name, case_name, rows, report, aborted=True)
        report["comparison"] = {
            "max_linf_p": comparison.max_linf_p,
            "max_l2_p": comparison.max_l2_p,
            "max_linf_grad_s": comparison.max_linf_grad_s,
        }
        trajectory = comparison.canonical
        states_are_ensembles = True
    elif dyn["solver"] == "canonical":
        try:
            trajectory = evolve_canonical(H, e0, dt, n_steps, record_every=stride)
        except SolverAbort as err:
            trajectory = err.partial
            aborted = True
            report["abort"] = str(err)
        states_are_ensembles = True
    else:
        trajectory = schrodinger_reference_evolve(
            to_wavefunction(e0), potential, dt, n_steps, record_every=stride
        )
        states_are_ensembles = False

    report.update(_drift_report(trajectory))
    if kind == "phase_translation" and not aborted:
        report.update(_advection_report(trajectory, system["omega"], grid))

    def as_ensemble(state):
        return state if states_are_ensembles else from_wavefunction(state)

    residuals = keep = None
    if constraint is not None:
        ensembles = [as_ensemble(s) for s in trajectory.states]
        proxy = Trajectory(
            times=trajectory.times,
            states=ensembles,
            energy=trajectory.energy,
            norm=trajectory.norm,
            momentum=trajectory.momentum,
        )
        con_report, residuals, keep = _constraint_report(constraint, horizon, proxy)
        report["constraint"] = con_report

    def diagnostics(i, state):
        rec = continuous_diagnostics(H, as_ensemble(state))
        if not states_are_ensembles:
            # Trust the reference solver's own energy/momentum expectations.
            rec = type(rec)(
                energy=float(trajectory.energy[i]),
                momentum=float(trajectory.momentum[i]),
                norm=float(trajectory.norm[i]),
                entropy=rec.entropy,
                fisher=rec.fisher,
            )
        return rec

    rows = _rows_from_states(trajectory, residuals, keep, diagnostics)
    return CaseResult(scenario_name, case_name, rows, report, aborted)


def run_scenario(scenario: Scenario) -> RunResult:
    result = RunResult(scenario.name)
    for case_name, cfg in scenario.case_configs():
        result.cases.append(run_case(cfg, scenario.name, case_name))
    return result


def _format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(case: CaseResult, directory: Path) -> Path:
    path = directory / f"{case.label}.csv"
    lines = [",".join(CSV_COLUMNS)]
    for row in case.rows:
        lines.append(",".join(_format_value(row[col]) for col in CSV_COLUMNS))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _jsonify(obj):
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, float) and not np.isfinite(obj):
        return None if np.isnan(obj) else repr(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return _jsonify(obj.item())
    return obj


def write_json(case: CaseResult, directory: Path, config: dict) -> Path:
    path = directory / f"{case.label}.json"
    envelope = {
        "schema_version": SCHEMA_VERSION,
        "scenario": _jsonify({"name": case.scenario, "case": case.case, "config": config}),
        "rows": _jsonify(case.rows),
        "report": _jsonify(case.report),
    }
    path.write_text(json.dumps(envelope, indent=2) + "\n", encoding="utf-8")
    return path


def emit_results(
    result: RunResult, scenario: Scenario, out_dir: str | Path, formats=("csv", "json")
) -> list[Path]:
    """Write one CSV/JSON pair per case; returns the paths written."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for case, (case_name, cfg) in zip(result.cases, scenario.case_configs()):
        if "csv" in formats:
            written.append(write_csv(case, directory))
        if "json" in formats:
            written.append(write_json(case, directory, cfg))
    return written
