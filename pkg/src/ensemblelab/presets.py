"""Built-in scenarios, one per headline experiment.

Each preset is a complete TOML document handled by the ordinary loader,
so anything a preset does can also be done from a user config file.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    text: str


_PRESET_LIST = [
    Preset(
        "madelung-vs-schrodinger",
        "Coherent-state agreement between the canonical solver and the reference solver over one oscillator period",
        """
[scenario]
name = "madelung-vs-schrodinger"

[system]
kind = "continuous"
x_min = -10.0
x_max = 10.0
n_points = 512
boundary = "reflecting"
hamiltonian = "quantum"
hbar = 1.0
mass = 1.0

[system.potential]
kind = "harmonic"
omega = 1.0

[initial_state]
preset = "gaussian"
sigma = 0.7071067811865476
x0 = 1.0
p0 = 0.0

[dynamics]
dt = 0.00015287555491921135
n_steps = 41100
solver = "both"

[output]
stride = 411
""",
    ),
    Preset(
        "energy-superselect",
        "Momentum-density constraint on oscillator eigenstates versus their superpositions",
        """
[scenario]
name = "energy-superselect"

[system]
kind = "continuous"
x_min = -10.0
x_max = 10.0
n_points = 4096
boundary = "reflecting"
hamiltonian = "quantum"
hbar = 1.0
mass = 1.0

[system.potential]
kind = "harmonic"
omega = 1.0

[initial_state]
preset = "ho_eigenstate"
n = 0

[dynamics]
dt = 0.0015339807878856412
n_steps = 4096
solver = "schrodinger"

[constraint]
kind = "momentum_density"
tolerance = 1.0e-5

[output]
stride = 32

[[cases]]
name = "eigenstate-n0"
[cases.overrides]
"initial_state.n" = 0

[[cases]]
name = "eigenstate-n1"
[cases.overrides]
"initial_state.n" = 1

[[cases]]
name = "real-superposition"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.7071067811865476, 0.0], preset = "ho_eigenstate", n = 0 },
    { coef = [0.7071067811865476, 0.0], preset = "ho_eigenstate", n = 1 },
]

[[cases]]
name = "imaginary-superposition"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.7071067811865476, 0.0], preset = "ho_eigenstate", n = 0 },
    { coef = [0.0, 0.7071067811865476], preset = "ho_eigenstate", n = 1 },
]
""",
    ),
    Preset(
        "degenerate-ring",
        "Real superpositions of degenerate ring eigenstates pass the momentum-density constraint; complex ones fail",
        """
[scenario]
name = "degenerate-ring"

[system]
kind = "continuous"
x_min = 0.0
x_max = 6.283185307179586
n_points = 512
boundary = "periodic"
hamiltonian = "quantum"
hbar = 1.0
mass = 1.0

[system.potential]
kind = "free"

[initial_state]
preset = "plane_wave"
k = 2.0

[dynamics]
dt = 0.0015339807878856412
n_steps = 2048
solver = "schrodinger"

[constraint]
kind = "momentum_density"
tolerance = 1.0e-6

[output]
stride = 16

[[cases]]
name = "cos"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.5, 0.0], preset = "plane_wave", k = 2.0 },
    { coef = [0.5, 0.0], preset = "plane_wave", k = -2.0 },
]

[[cases]]
name = "sin"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.0, -0.5], preset = "plane_wave", k = 2.0 },
    { coef = [0.0, 0.5], preset = "plane_wave", k = -2.0 },
]

[[cases]]
name = "equal-real"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.3535533905932738, -0.3535533905932738], preset = "plane_wave", k = 2.0 },
    { coef = [0.3535533905932738, 0.3535533905932738], preset = "plane_wave", k = -2.0 },
]

[[cases]]
name = "tilted-real"
[cases.overrides]
"initial_state.preset" = "superposition"
"initial_state.components" = [
    { coef = [0.3, -0.4], preset = "plane_wave", k = 2.0 },
    { coef = [0.3, 0.4], preset = "plane_wave", k = -2.0 },
]

[[cases]]
name = "imaginary-b"
[cases.overrides]
"initial_state.preset" = "plane_wave"
""",
    ),
    Preset(
        "spin-superselect",
        "Great-circle constraint on a spin in a magnetic field: 3 field axes x 3 initial states",
        """
[scenario]
name = "spin-superselect"

[system]
kind = "discrete"
dimension = 2
hbar = 1.0

[system.hamiltonian]
kind = "spin_half"
mu = 1.0
field = [0.0, 1.0, 0.0]

[initial_state]
preset = "bloch"
theta = 1.5707963267948966
phi = 0.0

[dynamics]
dt = 9.587379924285257e-5
n_steps = 32768
solver = "canonical"

[constraint]
kind = "spin_geodesic"
tolerance = 1.0e-8

[output]
stride = 256

[[cases]]
name = "by-equator"
[cases.overrides]
"dynamics.dt" = 2.3968449810713143e-05
"dynamics.n_steps" = 131072
"output.stride" = 1024
"system.hamiltonian.field" = [0.0, 1.0, 0.0]

[[cases]]
name = "by-eigenstate"
[cases.overrides]
"system.hamiltonian.field" = [0.0, 1.0, 0.0]
"initial_state.phi" = 4.71238898038469

[[cases]]
name = "by-generic"
[cases.overrides]
"dynamics.dt" = 2.3968449810713143e-05
"dynamics.n_steps" = 131072
"output.stride" = 1024
"system.hamiltonian.field" = [0.0, 1.0, 0.0]
"initial_state.theta" = 1.2566370614359172

[[cases]]
name = "bz-equator"
[cases.overrides]
"system.hamiltonian.field" = [0.0, 0.0, 1.0]

[[cases]]
name = "bz-eigenstate"
[cases.overrides]
"system.hamiltonian.field" = [0.0, 0.0, 1.0]
"initial_state.theta" = 0.0

[[cases]]
name = "bz-generic"
[cases.overrides]
"system.hamiltonian.field" = [0.0, 0.0, 1.0]
"initial_state.theta" = 1.2566370614359172

[[cases]]
name = "b111-equator"
[cases.overrides]
"dynamics.dt" = 2.3968449810713143e-05
"dynamics.n_steps" = 131072
"output.stride" = 1024
"system.hamiltonian.field" = [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]

[[cases]]
name = "b111-eigenstate"
[cases.overrides]
"system.hamiltonian.field" = [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]
"initial_state.theta" = 0.9553166181245093
"initial_state.phi" = 5.497787143782138

[[cases]]
name = "b111-generic"
[cases.overrides]
"system.hamiltonian.field" = [0.5773502691896258, 0.5773502691896258, 0.5773502691896258]
"initial_state.theta" = 1.2566370614359172
""",
    ),
    Preset(
        "gaussian-superselect",
        "Gaussian form is preserved under a quadratic potential and destroyed under a quartic one",
        """
[scenario]
name = "gaussian-superselect"

[system]
kind = "continuous"
x_min = -10.0
x_max = 10.0
n_points = 1024
boundary = "reflecting"
hamiltonian = "quantum"
hbar = 1.0
mass = 1.0

[system.potential]
kind = "harmonic"
omega = 1.0

[initial_state]
preset = "gaussian"
sigma = 0.7071067811865476
x0 = 1.0
p0 = 0.0

[dynamics]
dt = 0.0015339807878856412
n_steps = 4096
solver = "schrodinger"

[constraint]
kind = "classicality"
tolerance = 1.0e-3

[output]
stride = 32

[[cases]]
name = "harmonic"
[cases.overrides]
"system.potential" = { kind = "harmonic", omega = 1.0 }

[[cases]]
name = "quartic"
[cases.overrides]
"system.potential" = { kind = "custom", polynomial = [0.0, 0.0, 0.0, 0.0, 0.25] }
"dynamics.n_steps" = 2368
""",
    ),
    Preset(
        "phase-demo",
        "Rigid density translation generated by the phase-space drift functional on a ring",
        """
[scenario]
name = "phase-demo"

[system]
kind = "continuous"
x_min = 0.0
x_max = 6.283185307179586
n_points = 512
boundary = "periodic"
hamiltonian = "phase_translation"
omega = 1.0
hbar = 1.0
mass = 1.0

[system.potential]
kind = "free"

[initial_state]
preset = "superposition"
components = [
    { coef = [1.0, 0.0], preset = "plane_wave", k = 0.0 },
    { coef = [0.55, 0.0], preset = "plane_wave", k = -1.0 },
    { coef = [0.28, 0.0], preset = "plane_wave", k = -2.0 },
]

[dynamics]
dt = 0.002454369260617026
n_steps = 2560
solver = "canonical"

[output]
stride = 40
""",
    ),
    Preset(
        "discrete-rates",
        "Random 3-level ensemble: rate-equation form of the probability flow matches the canonical flow",
        """
[scenario]
name = "discrete-rates"

[system]
kind = "discrete"
dimension = 3
hbar = 1.0

[system.hamiltonian]
kind = "random_hermitian"
seed = 11

[initial_state]
preset = "levels"
P = [0.5, 0.3, 0.2]
S = [0.0, 0.4, -0.3]

[dynamics]
dt = 0.002
n_steps = 2000
solver = "canonical"

[output]
stride = 20
""",
    ),
    Preset(
        "classical-hj",
        "Classical free ensemble transport: conservation diagnostics for the classical flow",
        """
[scenario]
name = "classical-hj"

[system]
kind = "continuous"
x_min = -30.0
x_max = 30.0
n_points = 1024
boundary = "reflecting"
hamiltonian = "classical"
hbar = 1.0
mass = 1.0

[system.potential]
kind = "free"

[initial_state]
preset = "gaussian"
sigma = 1.5
x0 = -10.0
p0 = 1.0

[dynamics]
dt = 0.005
n_steps = 2000
solver = "canonical"

[output]
stride = 50
""",
    ),
]

PRESETS = {p.name: p for p in _PRESET_LIST}
