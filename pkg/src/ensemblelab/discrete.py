"""Canonical ensembles on finite configuration spaces.

State is the pair of vectors (P_j, S_j) with the canonical equations
dP_j/dt = dH/dS_j, dS_j/dt = -dH/dP_j.  Probability conservation forces
every admissible H to be a function of P and the antisymmetric phase
differences M_jk = S_j - S_k only, which recasts the P equation as a
rate equation with transition rates T_jk.
"""
from __future__ import annotations

import warnings
from dataclasses import InitVar, dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, NumericalError, SolverAbort, StructuralError
from .trajectory import Trajectory

DISCRETE_KINDS = ("quantum_basis", "spin_half", "custom")

HERMITIAN_TOL = 1e-12
PROBABILITY_TOL = 1e-10
ABORT_TOL = 1e-9

# Below this occupation a level is numerically empty (the probability sum
# itself is only conserved to ~1e-12): the conjugate phase there is gauge,
# the chart is singular, and the phase rate is slaved to zero.
POLE_FLOOR = 1e-14

FD_STEP = 1e-7


class PositivityWarning(UserWarning):
    """An empty level acquired a negative probability rate."""


@dataclass(frozen=True)
class DiscreteEnsemble:
    """Probability vector P and conjugate vector S on d >= 2 levels."""

    P: np.ndarray
    S: np.ndarray
    hbar: float = 1.0
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        P = np.array(self.P, dtype=float)
        S = np.array(self.S, dtype=float)
        P.flags.writeable = False
        S.flags.writeable = False
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "S", S)
        if P.ndim != 1 or P.shape != S.shape or P.size < 2:
            raise StructuralError("P and S must be equal-length vectors, d >= 2")
        if self.hbar <= 0.0:
            raise DomainError("hbar must be positive")
        if check:
            if not (np.all(np.isfinite(P)) and np.all(np.isfinite(S))):
                raise NumericalError("non-finite entries in (P, S)")
            if np.min(P) < 0.0:
                raise DomainError("P has negative entries")
            if abs(P.sum() - 1.0) > PROBABILITY_TOL:
                raise DomainError(f"P is not normalized: sum = {P.sum()!r}")

    @property
    def d(self) -> int:
        return self.P.size

    def wavefunction(self) -> np.ndarray:
        return np.sqrt(np.clip(self.P, 0.0, None)) * np.exp(1j * self.S / self.hbar)


def phase_difference_matrix(e: DiscreteEnsemble) -> np.ndarray:
    """Antisymmetric M with M_jk = S_j - S_k."""
    return e.S[:, None] - e.S[None, :]


def _check_hermitian(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise StructuralError("basis matrix must be square")
    if np.max(np.abs(mat - mat.conj().T)) > HERMITIAN_TOL:
        raise DomainError("basis matrix is not Hermitian")
    return mat


@dataclass(frozen=True)
class DiscreteHamiltonian:
    """quantum_basis(matrix), spin_half(mu, B), or custom F(P, M)."""

    kind: str
    matrix: np.ndarray | None = None
    mu: float = 0.0
    field: tuple[float, float, float] = (0.0, 0.0, 0.0)
    F: Callable[[np.ndarray, np.ndarray], float] | None = None

    def __post_init__(self):
        if self.kind not in DISCRETE_KINDS:
            raise DomainError(f"unknown discrete Hamiltonian kind {self.kind!r}")
        if self.kind == "quantum_basis":
            object.__setattr__(self, "matrix", _check_hermitian(self.matrix))
        if self.kind == "custom" and self.F is None:
            raise DomainError("custom kind needs a callable F(P, M)")

    @classmethod
    def quantum_basis(cls, matrix: np.ndarray) -> "DiscreteHamiltonian":
        return cls("quantum_basis", matrix=matrix)

    @classmethod
    def spin_half(cls, mu: float, field) -> "DiscreteHamiltonian":
        bx, by, bz = (float(c) for c in field)
        return cls("spin_half", mu=float(mu), field=(bx, by, bz))

    @classmethod
    def custom(cls, F: Callable[[np.ndarray, np.ndarray], float]) -> "DiscreteHamiltonian":
        return cls("custom", F=F)

    def spin_matrix(self, hbar: float = 1.0) -> np.ndarray:
        """mu * sigma . B as an explicit 2x2 Hermitian matrix."""
        if self.kind != "spin_half":
            raise DomainError("spin_matrix is defined for the spin_half kind")
        bx, by, bz = self.field
        return self.mu * np.array(
            [[bz, bx - 1j * by], [bx + 1j * by, -bz]], dtype=complex
        )


def _spin_terms(H: DiscreteHamiltonian, e: DiscreteEnsemble):
    # Integrator stages may carry transiently negative P; clip before sqrt.
    p1, p2 = max(float(e.P[0]), 0.0), max(float(e.P[1]), 0.0)
    bx, by, bz = H.field
    delta = (e.S[0] - e.S[1]) / e.hbar
    cos_t = bx * np.cos(delta) - by * np.sin(delta)
    sin_t = bx * np.sin(delta) + by * np.cos(delta)
    root = np.sqrt(p1 * p2)
    return bz, delta, cos_t, sin_t, root, p1, p2


def evaluate_discrete(H: DiscreteHamiltonian, e: DiscreteEnsemble) -> float:
    """Ensemble energy; a function of P and the phase differences only."""
    if H.kind == "quantum_basis":
        if H.matrix.shape[0] != e.d:
            raise StructuralError("matrix dimension does not match ensemble")
        psi = e.wavefunction()
        value = np.vdot(psi, H.matrix @ psi)
        if abs(value.imag) > 1e-12 * max(1.0, abs(value.real)):
            raise NumericalError(f"energy has spurious imaginary part {value.imag!r}")
        return float(value.real)
    if H.kind == "spin_half":
        if e.d != 2:
            raise StructuralError("spin_half needs a 2-level ensemble")
        bz, _, cos_t, _, root, _, _ = _spin_terms(H, e)
        return float(H.mu * (e.P[0] - e.P[1]) * bz + 2.0 * H.mu * root * cos_t)
    return float(H.F(e.P, phase_difference_matrix(e)))


def _basis_raw_rhs(matrix: np.ndarray, hbar: float):
    def rhs(P: np.ndarray, S: np.ndarray):
        psi = np.sqrt(np.clip(P, 0.0, None)) * np.exp(1j * S / hbar)
        z = np.conj(psi) * (matrix @ psi)
        dP = (2.0 / hbar) * z.imag
        occupied = P > POLE_FLOOR
        dS = np.zeros(P.size)
        dS[occupied] = -z.real[occupied] / P[occupied]
        return dP, dS

    return rhs


def _spin_raw_rhs(mu: float, field, hbar: float):
    bx, by, bz = field

    def rhs(P: np.ndarray, S: np.ndarray):
        p1, p2 = max(float(P[0]), 0.0), max(float(P[1]), 0.0)
        delta = (S[0] - S[1]) / hbar
        cos_t = bx * np.cos(delta) - by * np.sin(delta)
        sin_t = bx * np.sin(delta) + by * np.cos(delta)
        rate = -(2.0 * mu / hbar) * np.sqrt(p1 * p2) * sin_t
        dP = np.array([rate, -rate])
        dS = np.array([-mu * bz, mu * bz])
        if p1 > POLE_FLOOR:
            dS[0] -= mu * np.sqrt(p2 / p1) * cos_t
        if p2 > POLE_FLOOR:
            dS[1] -= mu * np.sqrt(p1 / p2) * cos_t
        return dP, dS

    return rhs


def _custom_raw_rhs(F, hbar: float):
    def rhs(P: np.ndarray, S: np.ndarray):
        d = P.size
        dP = np.empty(d)
        dS = np.empty(d)
        m0 = S[:, None] - S[None, :]
        for j in range(d):
            s_plus, s_minus = S.copy(), S.copy()
            s_plus[j] += FD_STEP
            s_minus[j] -= FD_STEP
            m_plus = s_plus[:, None] - s_plus[None, :]
            m_minus = s_minus[:, None] - s_minus[None, :]
            dP[j] = (F(P, m_plus) - F(P, m_minus)) / (2.0 * FD_STEP)
            p_plus, p_minus = P.copy(), P.copy()
            p_plus[j] += FD_STEP
            p_minus[j] -= FD_STEP
            dS[j] = -(F(p_plus, m0) - F(p_minus, m0)) / (2.0 * FD_STEP)
        return dP, dS

    return rhs


def _raw_rhs(H: DiscreteHamiltonian, hbar: float):
    if H.kind == "quantum_basis":
        return _basis_raw_rhs(H.matrix, hbar)
    if H.kind == "spin_half":
        return _spin_raw_rhs(H.mu, H.field, hbar)
    return _custom_raw_rhs(H.F, hbar)


def discrete_eom_rhs(
    H: DiscreteHamiltonian, e: DiscreteEnsemble
) -> tuple[np.ndarray, np.ndarray]:
    """Canonical rates (dP/dt, dS/dt); sum(dP) vanishes for every kind.

    At empty levels the conjugate rate is gauge and set to zero; a
    negative probability rate there is flagged with PositivityWarning.
    """
    dP, dS = _raw_rhs(H, e.hbar)(e.P, e.S)
    empty_losing = (e.P <= POLE_FLOOR) & (dP < -1e-12)
    if np.any(empty_losing):
        warnings.warn(
            f"negative rate at empty levels {np.flatnonzero(empty_losing).tolist()}",
            PositivityWarning,
            stacklevel=2,
        )
    return dP, dS


def transition_rates(H: DiscreteHamiltonian, e: DiscreteEnsemble) -> np.ndarray:
    """T_jk casting dP_j/dt as sum_k (T_jk P_k - T_kj P_j); T_jk = 0 at P_k = 0."""
    if H.kind == "spin_half":
        H = DiscreteHamiltonian.quantum_basis(H.spin_matrix(e.hbar))
    if H.kind == "quantum_basis":
        phase = np.exp(-1j * (e.S[:, None] - e.S[None, :]) / e.hbar)
        amp = np.sqrt(np.clip(e.P, 0.0, None))
        occupied = e.P > POLE_FLOOR
        ratio = np.zeros((e.d, e.d))
        ratio[:, occupied] = amp[:, None] / amp[None, occupied]
        return ratio * np.imag(H.matrix * phase) / e.hbar
    m0 = phase_difference_matrix(e)
    rates = np.zeros((e.d, e.d))
    for j in range(e.d):
        for k in range(e.d):
            if j == k or e.P[k] <= POLE_FLOOR:
                continue
            m_plus, m_minus = m0.copy(), m0.copy()
            m_plus[j, k] += FD_STEP
            m_minus[j, k] -= FD_STEP
            dF = (H.F(e.P, m_plus) - H.F(e.P, m_minus)) / (2.0 * FD_STEP)
            rates[j, k] = dF / e.P[k]
    return rates


def rate_equation_rhs(H: DiscreteHamiltonian, e: DiscreteEnsemble) -> np.ndarray:
    """dP_j/dt assembled from the transition rates."""
    rates = transition_rates(H, e)
    return rates @ e.P - rates.sum(axis=0) * e.P


def evolve_discrete(
    H: DiscreteHamiltonian,
    e0: DiscreteEnsemble,
    dt: float,
    n_steps: int,
    record_every: int = 1,
    abort_tol: float = ABORT_TOL,
) -> Trajectory:
    """RK4 on (P, S); aborts if any P_j falls below -abort_tol."""
    if dt <= 0.0 or n_steps < 1:
        raise DomainError("need dt > 0 and n_steps >= 1")
    P = e0.P.copy()
    S = e0.S.copy()
    hbar = e0.hbar
    rhs = _raw_rhs(H, hbar)

    times, states, energies, norms = [], [], [], []

    def snapshot() -> DiscreteEnsemble:
        return DiscreteEnsemble(P, S, hbar, check=False)

    def record(step: int) -> None:
        snap = snapshot()
        times.append(step * dt)
        states.append(snap)
        energies.append(evaluate_discrete(H, snap))
        norms.append(float(P.sum()))

    def build() -> Trajectory:
        n = len(times)
        return Trajectory(
            times=np.array(times),
            states=states,
            energy=np.array(energies),
            norm=np.array(norms),
            momentum=np.full(n, np.nan),
        )

    record(0)
    for step in range(1, n_steps + 1):
        k1P, k1S = rhs(P, S)
        k2P, k2S = rhs(P + 0.5 * dt * k1P, S + 0.5 * dt * k1S)
        k3P, k3S = rhs(P + 0.5 * dt * k2P, S + 0.5 * dt * k2S)
        k4P, k4S = rhs(P + dt * k3P, S + dt * k3S)
        P = P + (dt / 6.0) * (k1P + 2.0 * k2P + 2.0 * k3P + k4P)
        S = S + (dt / 6.0) * (k1S + 2.0 * k2S + 2.0 * k3S + k4S)
        bad = not (np.all(np.isfinite(P)) and np.all(np.isfinite(S)))
        if bad or np.min(P) < -abort_tol:
            reason = "non-finite state" if bad else f"P fell below {-abort_tol!r}"
            raise SolverAbort(
                f"discrete evolution aborted at step {step}: {reason}", partial=build()
            )
        if step % record_every == 0:
            record(step)
    return build()


@dataclass(frozen=True)
class BlochPoint:
    """Sphere coordinates of a 2-level ensemble: P_1 = cos^2(theta/2)."""

    theta: float
    phi: float


def bloch_map(e: DiscreteEnsemble) -> BlochPoint:
    """(theta, phi) with phi = (S_1 - S_2)/hbar mod 2*pi; phi = 0 at the poles."""
    if e.d != 2:
        raise StructuralError("Bloch map needs a 2-level ensemble")
    p1 = float(np.clip(e.P[0], 0.0, 1.0))
    theta = 2.0 * np.arccos(np.sqrt(p1))
    if min(e.P[0], e.P[1]) <= 0.0:
        return BlochPoint(theta, 0.0)
    phi = float(np.mod((e.S[0] - e.S[1]) / e.hbar, 2.0 * np.pi))
    return BlochPoint(theta, phi)


def bloch_state(theta: float, phi: float, hbar: float = 1.0) -> DiscreteEnsemble:
    """Inverse of the Bloch map in the S_2 = 0 gauge."""
    p1 = np.cos(0.5 * theta) ** 2
    return DiscreteEnsemble(
        np.array([p1, 1.0 - p1]), np.array([hbar * phi, 0.0]), hbar
    )


def bloch_vector(e: DiscreteEnsemble) -> np.ndarray:
    """Pauli expectation vector of the recombined two-level state."""
    if e.d != 2:
        raise StructuralError("Bloch vector needs a 2-level ensemble")
    root = np.sqrt(max(e.P[0] * e.P[1], 0.0))
    delta = (e.S[0] - e.S[1]) / e.hbar
    return np.array(
        [
            2.0 * root * np.cos(delta),
            -2.0 * root * np.sin(delta),
            e.P[0] - e.P[1],
        ]
    )
