"""Declarative run configurations: TOML loading, strict validation, presets.

A scenario file has [scenario], [system], [initial_state], [dynamics],
optional [constraint] and [output] tables, and an optional [[cases]]
array whose entries override dotted keys of the base document.  Unknown
keys are fatal: scenarios are the reproduction interface, and a silent
typo would invalidate a claimed result.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .errors import ScenarioError
from .presets import PRESETS

TOMLParseError = tomllib.TOMLDecodeError

_NUMBER = (int, float)

SOLVERS = ("canonical", "schrodinger", "both")
CONSTRAINT_KINDS_IN_CONFIG = ("momentum_density", "spin_geodesic", "classicality")


@dataclass(frozen=True)
class Scenario:
    """A validated configuration; ``config`` is the resolved base document."""

    name: str
    config: dict
    cases: tuple = ()

    def case_configs(self):
        """Yield (case_name, resolved config) pairs; base config if no cases."""
        if not self.cases:
            yield None, self.config
            return
        for case in self.cases:
            cfg = copy.deepcopy(self.config)
            for dotted, value in case["overrides"].items():
                _apply_override(cfg, dotted, value)
            _validate(cfg, context=f"cases[{case['name']}]")
            yield case["name"], cfg


def _apply_override(cfg: dict, dotted: str, value) -> None:
    # The leaf key may be new (each case is re-validated afterwards, so a
    # typo still fails loudly); intermediate tables must already exist.
    parts = dotted.split(".")
    node = cfg
    for part in parts[:-1]:
        if not isinstance(node.get(part), dict):
            raise ScenarioError(
                f"override path {dotted!r} does not exist in the base config",
                field=dotted,
            )
        node = node[part]
    node[parts[-1]] = copy.deepcopy(value)


def _fail(field_path: str, message: str):
    raise ScenarioError(f"{field_path}: {message}", field=field_path)


def _check_keys(table: dict, path: str, required: dict, optional: dict) -> None:
    for key in table:
        if key not in required and key not in optional:
            _fail(f"{path}.{key}", "unknown key")
    for key, kinds in required.items():
        if key not in table:
            _fail(f"{path}.{key}", "missing required key")
        _check_type(table[key], kinds, f"{path}.{key}")
    for key, kinds in optional.items():
        if key in table:
            _check_type(table[key], kinds, f"{path}.{key}")


def _check_type(value, kinds, path: str) -> None:
    if kinds == "number":
        ok = isinstance(value, _NUMBER) and not isinstance(value, bool)
    elif kinds == "int":
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif kinds == "str":
        ok = isinstance(value, str)
    elif kinds == "list":
        ok = isinstance(value, list)
    elif kinds == "table":
        ok = isinstance(value, dict)
    else:  # pragma: no cover - schema bug
        raise ValueError(f"bad schema kind {kinds!r}")
    if not ok:
        _fail(path, f"expected {kinds}")


def _validate_potential(pot: dict, path: str) -> None:
    _check_keys(
        pot,
        path,
        required={"kind": "str"},
        optional={"omega": "number", "coeffs": "list", "values": "list", "polynomial": "list"},
    )
    kind = pot["kind"]
    if kind == "free":
        extra = set(pot) - {"kind"}
        if extra:
            _fail(f"{path}.{sorted(extra)[0]}", "free potential takes no parameters")
    elif kind == "harmonic":
        if "omega" not in pot:
            _fail(f"{path}.omega", "harmonic potential needs omega")
    elif kind == "quadratic":
        coeffs = pot.get("coeffs")
        if not isinstance(coeffs, list) or len(coeffs) != 3:
            _fail(f"{path}.coeffs", "quadratic potential needs coeffs = [a0, a1, a2]")
    elif kind == "custom":
        if ("values" in pot) == ("polynomial" in pot):
            _fail(path, "custom potential needs exactly one of 'values' or 'polynomial'")
    else:
        _fail(f"{path}.kind", f"unknown potential kind {kind!r}")


def _validate_initial(init: dict, system: dict, path: str) -> None:
    _check_keys(
        init,
        path,
        required={"preset": "str"},
        optional={
            "sigma": "number",
            "x0": "number",
            "p0": "number",
            "n": "int",
            "omega": "number",
            "k": "number",
            "theta": "number",
            "phi": "number",
            "components": "list",
            "P": "list",
            "S": "list",
        },
    )
    preset = init["preset"]
    continuous = system["kind"] == "continuous"
    if preset == "gaussian":
        if not continuous:
            _fail(f"{path}.preset", "gaussian needs a continuous system")
        if "sigma" not in init:
            _fail(f"{path}.sigma", "gaussian needs sigma")
    elif preset == "ho_eigenstate":
        if not continuous:
            _fail(f"{path}.preset", "ho_eigenstate needs a continuous system")
        if "n" not in init:
            _fail(f"{path}.n", "ho_eigenstate needs n")
        if "omega" not in init and system["potential"]["kind"] != "harmonic":
            _fail(f"{path}.omega", "ho_eigenstate needs omega unless the potential is harmonic")
    elif preset == "plane_wave":
        if not continuous:
            _fail(f"{path}.preset", "plane_wave needs a continuous system")
        if "k" not in init:
            _fail(f"{path}.k", "plane_wave needs k")
    elif preset == "superposition":
        if not continuous:
            _fail(f"{path}.preset", "superposition needs a continuous system")
        components = init.get("components")
        if not components:
            _fail(f"{path}.components", "superposition needs components")
        for i, comp in enumerate(components):
            comp_path = f"{path}.components[{i}]"
            if not isinstance(comp, dict):
                _fail(comp_path, "expected table")
            _check_keys(
                comp,
                comp_path,
                required={"coef": "list", "preset": "str"},
                optional={
                    "sigma": "number",
                    "x0": "number",
                    "p0": "number",
                    "n": "int",
                    "omega": "number",
                    "k": "number",
                },
            )
            if len(comp["coef"]) != 2 or not all(
                isinstance(c, _NUMBER) for c in comp["coef"]
            ):
                _fail(f"{comp_path}.coef", "coef must be [real, imag]")
            if comp["preset"] not in ("gaussian", "ho_eigenstate", "plane_wave"):
                _fail(f"{comp_path}.preset", f"unknown component preset {comp['preset']!r}")
    elif preset == "bloch":
        if continuous or system["dimension"] != 2:
            _fail(f"{path}.preset", "bloch needs a discrete 2-level system")
        for key in ("theta", "phi"):
            if key not in init:
                _fail(f"{path}.{key}", f"bloch needs {key}")
    elif preset == "levels":
        if continuous:
            _fail(f"{path}.preset", "levels needs a discrete system")
        for key in ("P", "S"):
            if key not in init:
                _fail(f"{path}.{key}", f"levels needs {key}")
            if len(init[key]) != system["dimension"]:
                _fail(f"{path}.{key}", "length must equal system.dimension")
    else:
        _fail(f"{path}.preset", f"unknown preset {preset!r}")


def _validate_system(system: dict, path: str) -> None:
    if "kind" not in system:
        _fail(f"{path}.kind", "missing required key")
    kind = system["kind"]
    if kind == "continuous":
        _check_keys(
            system,
            path,
            required={
                "kind": "str",
                "x_min": "number",
                "x_max": "number",
                "n_points": "int",
                "boundary": "str",
                "hamiltonian": "str",
                "potential": "table",
            },
            optional={"hbar": "number", "mass": "number", "omega": "number"},
        )
        if system["boundary"] not in ("periodic", "reflecting"):
            _fail(f"{path}.boundary", "must be 'periodic' or 'reflecting'")
        if system["hamiltonian"] not in ("classical", "quantum", "phase_translation"):
            _fail(f"{path}.hamiltonian", "must be classical, quantum, or phase_translation")
        if system["hamiltonian"] == "phase_translation" and "omega" not in system:
            _fail(f"{path}.omega", "phase_translation needs the drift rate omega")
        _validate_potential(system["potential"], f"{path}.potential")
    elif kind == "discrete":
        _check_keys(
            system,
            path,
            required={"kind": "str", "dimension": "int", "hamiltonian": "table"},
            optional={"hbar": "number"},
        )
        ham = system["hamiltonian"]
        _check_keys(
            ham,
            f"{path}.hamiltonian",
            required={"kind": "str"},
            optional={
                "mu": "number",
                "field": "list",
                "matrix_real": "list",
                "matrix_imag": "list",
                "seed": "int",
            },
        )
        hkind = ham["kind"]
        if hkind == "spin_half":
            if system["dimension"] != 2:
                _fail(f"{path}.dimension", "spin_half needs dimension = 2")
            if "mu" not in ham or "field" not in ham:
                _fail(f"{path}.hamiltonian", "spin_half needs mu and field")
            if len(ham["field"]) != 3:
                _fail(f"{path}.hamiltonian.field", "field must have 3 components")
        elif hkind == "quantum_basis":
            if "matrix_real" not in ham:
                _fail(f"{path}.hamiltonian.matrix_real", "quantum_basis needs matrix_real")
        elif hkind == "random_hermitian":
            if "seed" not in ham:
                _fail(f"{path}.hamiltonian.seed", "random_hermitian needs seed")
        else:
            _fail(f"{path}.hamiltonian.kind", f"unknown Hamiltonian kind {hkind!r}")
    else:
        _fail(f"{path}.kind", "must be 'continuous' or 'discrete'")


def _validate(cfg: dict, context: str = "") -> None:
    prefix = f"{context}: " if context else ""
    try:
        _check_keys(
            cfg,
            "$",
            required={"scenario": "table", "system": "table", "initial_state": "table", "dynamics": "table"},
            optional={"constraint": "table", "output": "table", "cases": "list"},
        )
        _check_keys(cfg["scenario"], "scenario", required={"name": "str"}, optional={})
        _validate_system(cfg["system"], "system")
        _validate_initial(cfg["initial_state"], cfg["system"], "initial_state")
        dyn = cfg["dynamics"]
        _check_keys(
            dyn,
            "dynamics",
            required={"dt": "number", "n_steps": "int", "solver": "str"},
            optional={},
        )
        if dyn["dt"] <= 0:
            _fail("dynamics.dt", "must be positive")
        if dyn["n_steps"] < 1:
            _fail("dynamics.n_steps", "must be at least 1")
        if dyn["solver"] not in SOLVERS:
            _fail("dynamics.solver", f"must be one of {SOLVERS}")
        if cfg["system"]["kind"] == "discrete" and dyn["solver"] != "canonical":
            _fail("dynamics.solver", "discrete systems support only the canonical solver")
        if cfg["system"]["kind"] == "continuous":
            if cfg["system"]["hamiltonian"] in ("classical", "phase_translation") and dyn[
                "solver"
            ] != "canonical":
                _fail(
                    "dynamics.solver",
                    "the reference solver applies only to the quantum kind",
                )
        if "constraint" in cfg:
            con = cfg["constraint"]
            _check_keys(
                con,
                "constraint",
                required={"kind": "str"},
                optional={"tolerance": "number", "horizon": "number"},
            )
            if con["kind"] not in CONSTRAINT_KINDS_IN_CONFIG:
                _fail(
                    "constraint.kind",
                    f"must be one of {CONSTRAINT_KINDS_IN_CONFIG} in scenario files",
                )
            if con["kind"] == "spin_geodesic" and cfg["system"]["kind"] != "discrete":
                _fail("constraint.kind", "spin_geodesic needs a discrete system")
            if con["kind"] != "spin_geodesic" and cfg["system"]["kind"] == "discrete":
                _fail("constraint.kind", "this constraint needs a continuous system")
        if "output" in cfg:
            _check_keys(cfg["output"], "output", required={}, optional={"stride": "int"})
            stride = cfg["output"].get("stride", 1)
            if stride < 1 or cfg["dynamics"]["n_steps"] % stride != 0:
                _fail("output.stride", "stride must divide n_steps")
        for i, case in enumerate(cfg.get("cases", [])):
            case_path = f"cases[{i}]"
            if not isinstance(case, dict):
                _fail(case_path, "expected table")
            _check_keys(
                case,
                case_path,
                required={"name": "str", "overrides": "table"},
                optional={},
            )
    except ScenarioError as err:
        if prefix:
            raise ScenarioError(f"{prefix}{err}", field=err.field) from err
        raise


def parse_scenario_text(text: str) -> Scenario:
    """Parse and validate a TOML document; raises TOMLDecodeError or ScenarioError."""
    cfg = tomllib.loads(text)
    _validate(cfg)
    cases = tuple(
        {"name": case["name"], "overrides": case["overrides"]}
        for case in cfg.get("cases", [])
    )
    base = {k: v for k, v in cfg.items() if k != "cases"}
    # Case overrides must resolve against the base document.
    scenario = Scenario(name=cfg["scenario"]["name"], config=base, cases=cases)
    for _ in scenario.case_configs():
        pass
    return scenario


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario from a preset name or a TOML file path."""
    name = str(source)
    if name in PRESETS:
        return parse_scenario_text(PRESETS[name].text)
    path = Path(source)
    if not path.exists():
        raise FileNotFoundError(f"no such scenario file or preset: {source}")
    return parse_scenario_text(path.read_text(encoding="utf-8"))
