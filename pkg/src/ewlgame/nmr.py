"""Ideal two-spin NMR emulation of the game circuit.

Spin H carries Alice's qubit, spin C carries Bob's. Pulses are
instantaneous rotations, free evolution is pure J coupling on resonance,
and there is no relaxation.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import constants

from .linalg import (
    DEFAULT_TOL,
    I2,
    DomainError,
    check_density_matrix,
    dagger,
    is_unitary,
    projector,
    state_fidelity,
)
from .protocol import GameConfig, StrategyParams, final_state

SX = np.array([[0, 1], [1, 0]], dtype=complex) / 2
SY = np.array([[0, -1j], [1j, 0]], dtype=complex) / 2
SZ = np.array([[1, 0], [0, -1]], dtype=complex) / 2

IZ_H = np.kron(SZ, I2)
IZ_C = np.kron(I2, SZ)
IZIZ = np.kron(SZ, SZ)

AXES = {"+x": SX, "-x": -SX, "+y": SY, "-y": -SY}
CHANNELS = ("H", "C", "both")

J_CHLOROFORM_HZ = 215.0
PROTON_FREQUENCY_HZ = 400e6
SAMPLE_TEMPERATURE_K = 293.15
# gyromagnetic ratios, rad s^-1 T^-1
GAMMA_1H = 267.5221874e6
GAMMA_13C = 67.2828e6
LARMOR_RATIO_C_H = GAMMA_13C / GAMMA_1H

# Local z-rotation angles (H, C) that map the pulse-level frame onto the
# textbook circuit frame. Fitted once by `calibrate_frame`.
FRAME_Z_ANGLES = (np.pi, np.pi)


def high_temperature_epsilon(
    proton_hz: float = PROTON_FREQUENCY_HZ,
    larmor_ratio: float = LARMOR_RATIO_C_H,
    temperature_k: float = SAMPLE_TEMPERATURE_K,
) -> float:
    """Pseudo-pure polarization ``h (nu_H + nu_C) / (6 k T)`` after temporal averaging."""
    return constants.h * proton_hz * (1 + larmor_ratio) / (6 * constants.k * temperature_k)


@dataclass(frozen=True)
class SpinSystemParams:
    j_coupling: float = J_CHLOROFORM_HZ
    epsilon: float = field(default_factory=high_temperature_epsilon)
    larmor_ratio: float = LARMOR_RATIO_C_H

    def __post_init__(self):
        if not self.j_coupling > 0:
            raise DomainError(f"J coupling must be positive, got {self.j_coupling!r}")
        if not 0 < self.epsilon < 1e-2:
            raise DomainError(f"epsilon must satisfy 0 < epsilon << 1, got {self.epsilon!r}")


@dataclass(frozen=True)
class PulseEvent:
    kind: str  # "rf" or "delay"
    channel: str | None = None
    axis: str | None = None
    flip_angle: float | None = None
    duration: float | None = None

    def __post_init__(self):
        if self.kind == "rf":
            if self.channel not in CHANNELS:
                raise DomainError(f"invalid rf channel {self.channel!r}")
            if self.axis not in AXES:
                raise DomainError(f"invalid rf axis {self.axis!r}")
            if self.flip_angle is None or not 0 < self.flip_angle <= 2 * np.pi + 1e-12:
                raise DomainError(f"flip angle {self.flip_angle!r} outside (0, 2pi]")
        elif self.kind == "delay":
            if self.duration is None or self.duration < 0:
                raise DomainError(f"free evolution duration {self.duration!r} must be >= 0")
        else:
            raise DomainError(f"unknown pulse event kind {self.kind!r}")

    @classmethod
    def rf(cls, channel: str, axis: str, flip_angle: float) -> PulseEvent:
        return cls("rf", channel=channel, axis=axis, flip_angle=float(flip_angle))

    @classmethod
    def delay(cls, duration: float) -> PulseEvent:
        return cls("delay", duration=float(duration))


@dataclass(frozen=True)
class PulseSequence:
    events: tuple
    label: str = ""

    def __add__(self, other: PulseSequence) -> PulseSequence:
        label = " | ".join(x for x in (self.label, other.label) if x)
        return PulseSequence(self.events + other.events, label)

    def __len__(self):
        return len(self.events)


def _rotation(op: np.ndarray, angle: float) -> np.ndarray:
    # exp(-i angle op) for op = n.sigma/2 with |n| = 1
    return np.cos(angle / 2) * I2 - 2j * np.sin(angle / 2) * op


def rf_pulse_unitary(e: PulseEvent) -> np.ndarray:
    if e.kind != "rf":
        raise DomainError("rf_pulse_unitary needs an rf event")
    r = _rotation(AXES[e.axis], e.flip_angle)
    if e.channel == "H":
        return np.kron(r, I2)
    if e.channel == "C":
        return np.kron(I2, r)
    return np.kron(r, r)


def free_evolution_unitary(duration: float, p: SpinSystemParams) -> np.ndarray:
    """``exp(-i 2 pi J t Iz^H Iz^C)``; diagonal in the computational basis."""
    if duration < 0:
        raise DomainError(f"duration must be >= 0, got {duration!r}")
    return np.diag(np.exp(-2j * np.pi * p.j_coupling * duration * np.diag(IZIZ)))


def event_unitary(e: PulseEvent, p: SpinSystemParams) -> np.ndarray:
    if e.kind == "rf":
        return rf_pulse_unitary(e)
    return free_evolution_unitary(e.duration, p)


def sequence_unitary(seq: PulseSequence, p: SpinSystemParams) -> np.ndarray:
    u = np.eye(4, dtype=complex)
    for e in seq.events:
        u = event_unitary(e, p) @ u
    return u


# --- initialization -------------------------------------------------------


def thermal_state(p: SpinSystemParams) -> np.ndarray:
    """High-temperature equilibrium state, first order in the Zeeman energy.

    The deviation ``c (Iz^H + r Iz^C)`` is scaled so that temporal
    averaging leaves a pseudo-pure state of polarization ``p.epsilon``.
    """
    c = 3 * p.epsilon / (2 * (1 + p.larmor_ratio))
    return np.eye(4, dtype=complex) / 4 + c * (IZ_H + p.larmor_ratio * IZ_C)


def _permutation(images: dict) -> np.ndarray:
    """Permutation matrix sending population ``i`` to slot ``images[i]`` (1-based)."""
    m = np.zeros((4, 4), dtype=complex)
    for src in range(1, 5):
        m[images.get(src, src) - 1, src - 1] = 1
    return m


# p2 -> p4', p3 -> p2', p4 -> p3' and its inverse
CYCLE_FORWARD = _permutation({2: 4, 3: 2, 4: 3})
CYCLE_INVERSE = _permutation({4: 2, 3: 4, 2: 3})


class NonThermalInputWarning(UserWarning):
    pass


def temporal_average(rho) -> np.ndarray:
    """Average of the identity, forward-cycle and inverse-cycle population permutations."""
    rho = check_density_matrix(rho)
    if np.max(np.abs(rho - np.diag(np.diag(rho)))) > DEFAULT_TOL:
        warnings.warn("temporal_average applied to a non-diagonal state", NonThermalInputWarning)
    terms = [rho] + [m @ rho @ dagger(m) for m in (CYCLE_FORWARD, CYCLE_INVERSE)]
    return sum(terms) / 3


def pseudo_pure_state(psi, epsilon: float) -> np.ndarray:
    """``(1 - epsilon)/4 I + epsilon |psi><psi|``."""
    return (1 - epsilon) / 4 * np.eye(4, dtype=complex) + epsilon * projector(psi)


def deviation_part(rho, epsilon: float) -> np.ndarray:
    """Invert ``rho = (1 - epsilon)/4 I + epsilon rho_dev`` for the unit-trace ``rho_dev``."""
    return (np.asarray(rho, dtype=complex) - (1 - epsilon) / 4 * np.eye(4)) / epsilon


# --- compilation ----------------------------------------------------------


def judge_delay(lam: float, p: SpinSystemParams, inverse: bool = False) -> float:
    return ((2 * np.pi - lam) if inverse else lam) / (2 * np.pi * p.j_coupling)


def compile_entangler(lam: float, p: SpinSystemParams, inverse: bool = False) -> PulseSequence:
    if not -1e-12 <= lam <= np.pi / 2 + 1e-12:
        raise DomainError(f"lambda={lam!r} outside [0, pi/2]")
    tau = judge_delay(lam, p, inverse)
    events = (
        PulseEvent.rf("both", "-x", np.pi / 2),
        PulseEvent.delay(tau),
        PulseEvent.rf("both", "-x", np.pi),
        PulseEvent.delay(tau),
        PulseEvent.rf("both", "-x", np.pi / 2),
    )
    return PulseSequence(events, "disentangler" if inverse else "entangler")


LAYOUTS = ("prescribed", "symmetric")


def _composite_z(channel: str, phi: float) -> list:
    # net effect diag(e^{i phi}, e^{-i phi}) on the addressed spin
    return [
        PulseEvent.rf(channel, "+x", np.pi / 2),
        PulseEvent.rf(channel, "+y", phi),
        PulseEvent.rf(channel, "+y", phi),
        PulseEvent.rf(channel, "-x", np.pi / 2),
    ]


def compile_strategy(s: StrategyParams, channel: str, layout: str = "prescribed") -> PulseSequence:
    """Theta pulse on +y, then the composite z rotation for phi.

    The ``prescribed`` order reproduces the strategy operator only when one
    of the two angles is zero. ``symmetric`` splits the phase into two
    half-angle blocks around the theta pulse, which is exact everywhere
    and coincides with ``prescribed`` whenever an angle vanishes.
    Zero angles emit no events, so (0, 0) compiles to an empty sequence.
    """
    if channel not in ("H", "C"):
        raise DomainError(f"strategy channel must be H or C, got {channel!r}")
    if layout not in LAYOUTS:
        raise DomainError(f"unknown strategy layout {layout!r}")
    theta = [PulseEvent.rf(channel, "+y", s.theta)] if s.theta > 0 else []
    if s.phi <= 0:
        events = theta
    elif layout == "symmetric" and theta and s.phi / 2 > 0:
        events = _composite_z(channel, s.phi / 2) + theta + _composite_z(channel, s.phi / 2)
    else:
        events = theta + _composite_z(channel, s.phi)
    return PulseSequence(tuple(events), f"strategy {channel}")


def compile_game(
    pa: StrategyParams, pb: StrategyParams, lam: float, p: SpinSystemParams,
    layout: str = "prescribed",
) -> PulseSequence:
    seq = (
        compile_entangler(lam, p)
        + compile_strategy(pa, "H", layout)
        + compile_strategy(pb, "C", layout)
        + compile_entangler(lam, p, inverse=True)
    )
    return PulseSequence(seq.events, "game")


def simulate(seq: PulseSequence, rho0, p: SpinSystemParams) -> np.ndarray:
    rho = np.asarray(rho0, dtype=complex)
    for e in seq.events:
        u = event_unitary(e, p)
        rho = u @ rho @ dagger(u)
    return rho


# --- frame calibration and fidelity --------------------------------------


def frame_rotation(angles=FRAME_Z_ANGLES) -> np.ndarray:
    a, b = angles
    return np.kron(_rotation(SZ, a), _rotation(SZ, b))


def calibrate_frame(p: SpinSystemParams | None = None, n_grid: int = 32) -> tuple[float, float]:
    """Brute-force the local z angles that best align pulse output with the circuit.

    The reference is the (pi/2, 0, pi/2, 0) profile at maximal
    entanglement, the simplest case where the frame is observable. The
    grid is ``n_grid x n_grid`` over ``[0, 2pi)``; the lowest index wins
    ties.
    """
    p = p or SpinSystemParams()
    s = StrategyParams(np.pi / 2, 0.0)
    lam = np.pi / 2
    ideal = final_state(s, s, GameConfig(lam=lam))
    psi = sequence_unitary(compile_game(s, s, lam, p), p)[:, 0]
    grid = 2 * np.pi * np.arange(n_grid) / n_grid
    best, best_f = (0.0, 0.0), -1.0
    for a in grid:
        for b in grid:
            f = abs(np.vdot(ideal, frame_rotation((a, b)) @ psi)) ** 2
            if f > best_f + 1e-12:
                best, best_f = (float(a), float(b)), f
    return best


def fidelity_report(rho_dev, ideal, angles=FRAME_Z_ANGLES) -> float:
    """Fidelity of a frame-corrected deviation density matrix with the ideal state."""
    f = frame_rotation(angles)
    rho = f @ np.asarray(rho_dev, dtype=complex) @ dagger(f)
    rho = (rho + dagger(rho)) / 2
    return state_fidelity(rho, ideal, tol=1e-8)


@dataclass(frozen=True)
class GameRun:
    sequence: PulseSequence
    rho_final: np.ndarray
    rho_dev: np.ndarray
    populations: np.ndarray
    fidelity: float


def run_game(pa: StrategyParams, pb: StrategyParams, lam: float,
             p: SpinSystemParams | None = None, layout: str = "prescribed",
             target_lam: float | None = None) -> GameRun:
    """Full pipeline: thermal state, temporal averaging, pulses, fidelity.

    ``target_lam`` scores the run against the ideal state at a different
    entanglement level than the one the pulses were compiled for.
    """
    p = p or SpinSystemParams()
    rho0 = temporal_average(thermal_state(p))
    seq = compile_game(pa, pb, lam, p, layout)
    rho_f = simulate(seq, rho0, p)
    dev = deviation_part(rho_f, p.epsilon)
    ideal = final_state(pa, pb, GameConfig(lam=lam if target_lam is None else target_lam))
    return GameRun(seq, rho_f, dev, np.real(np.diag(dev)).copy(), fidelity_report(dev, ideal))


def block_is_unitary(seq: PulseSequence, p: SpinSystemParams, tol: float = DEFAULT_TOL) -> bool:
    return is_unitary(sequence_unitary(seq, p), tol)


# --- text serialization ---------------------------------------------------


def format_number(x: float) -> str:
    """Positional notation with 12 significant digits, trailing zeros trimmed."""
    return np.format_float_positional(float(x), precision=12, unique=False, fractional=False, trim="-")


def serialize_sequence(seq: PulseSequence) -> str:
    lines = []
    for e in seq.events:
        if e.kind == "rf":
            lines.append(f"RF {e.channel} {e.axis} {format_number(e.flip_angle)}")
        else:
            lines.append(f"DELAY {format_number(e.duration)}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_sequence(text: str, label: str = "") -> PulseSequence:
    events = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "RF" and len(parts) == 4:
                events.append(PulseEvent.rf(parts[1], parts[2], float(parts[3])))
                continue
            if parts[0] == "DELAY" and len(parts) == 2:
                events.append(PulseEvent.delay(float(parts[1])))
                continue
        except ValueError as exc:
            raise DomainError(f"line {n}: {exc}") from None
        raise DomainError(f"line {n}: cannot parse pulse event {raw!r}")
    return PulseSequence(tuple(events), label)
