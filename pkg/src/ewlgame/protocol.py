"""The EWL circuit for the battle of the sexes.

Two routes to the outcome probabilities are provided and must agree: the
circuit route multiplies out ``J^dag (U_A x U_B) J |00>``, the closed-form
route evaluates the trigonometric probability formulas directly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, KET_00, T_GATE, DomainError, dagger, kron

DOMAIN_SLACK = 1e-12

TT = np.kron(T_GATE, T_GATE)


def _check_range(name: str, value: float, lo: float, hi: float) -> None:
    if not np.isfinite(value) or value < lo - DOMAIN_SLACK or value > hi + DOMAIN_SLACK:
        raise DomainError(f"{name}={value!r} outside [{lo:.6g}, {hi:.6g}]")


@dataclass(frozen=True)
class StrategyParams:
    theta: float
    phi: float

    def __post_init__(self):
        _check_range("theta", self.theta, 0.0, np.pi)
        _check_range("phi", self.phi, 0.0, np.pi / 2)


@dataclass(frozen=True)
class GameConfig:
    alpha: float = 5.0
    beta: float = 3.0
    gamma: float = 1.0
    lam: float = np.pi / 2

    def __post_init__(self):
        if not self.alpha > self.beta > self.gamma:
            raise DomainError(
                f"payoffs must satisfy alpha > beta > gamma, got "
                f"({self.alpha}, {self.beta}, {self.gamma})"
            )
        _check_range("lambda", self.lam, 0.0, np.pi / 2)

    def with_lambda(self, lam: float) -> GameConfig:
        return GameConfig(self.alpha, self.beta, self.gamma, lam)


@dataclass(frozen=True)
class OutcomeProbabilities:
    p_oo: float
    p_ot: float
    p_to: float
    p_tt: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_oo, self.p_ot, self.p_to, self.p_tt])

    @classmethod
    def from_array(cls, p) -> OutcomeProbabilities:
        return cls(*(float(x) for x in p))


@dataclass(frozen=True)
class PayoffPair:
    a: float
    b: float


# Named strategies used throughout the tables.
OPERA = StrategyParams(0.0, 0.0)
TELEVISION = StrategyParams(np.pi, 0.0)
QUANTUM_Q = StrategyParams(0.0, np.pi / 2)


def strategy_operator(s: StrategyParams) -> np.ndarray:
    c, sn = np.cos(s.theta / 2), np.sin(s.theta / 2)
    return np.array(
        [[np.exp(1j * s.phi) * c, sn], [-sn, np.exp(-1j * s.phi) * c]], dtype=complex
    )


def judge_operator(lam: float) -> np.ndarray:
    """``exp(i lam/2 T x T)`` in closed form; valid since ``(T x T)^2 = I``."""
    _check_range("lambda", lam, 0.0, np.pi / 2)
    return np.cos(lam / 2) * np.eye(4, dtype=complex) + 1j * np.sin(lam / 2) * TT


def final_state(sa: StrategyParams, sb: StrategyParams, cfg: GameConfig) -> np.ndarray:
    j = judge_operator(cfg.lam)
    local = kron(strategy_operator(sa), strategy_operator(sb))
    return dagger(j) @ (local @ (j @ KET_00))


def final_state_closed_form_max_entanglement(
    sa: StrategyParams, sb: StrategyParams
) -> np.ndarray:
    """Final-state amplitudes at ``lambda = pi/2`` from their trigonometric form."""
    ca, sa_ = np.cos(sa.theta / 2), np.sin(sa.theta / 2)
    cb, sb_ = np.cos(sb.theta / 2), np.sin(sb.theta / 2)
    total = sa.phi + sb.phi
    return np.array(
        [
            ca * cb * np.cos(total),
            cb * sa_ * np.sin(sb.phi) - ca * sb_ * np.cos(sa.phi),
            ca * sb_ * np.sin(sa.phi) - cb * sa_ * np.cos(sb.phi),
            sa_ * sb_ + ca * cb * np.sin(total),
        ],
        dtype=complex,
    )


def probability_arrays(theta_a, phi_a, theta_b, phi_b, lam):
    """Closed-form ``(P_OO, P_OT, P_TO, P_TT)``, broadcasting over array inputs.

    No domain checks; callers that need them go through
    :func:`outcome_probabilities_closed_form`.
    """
    ca, sa = np.cos(theta_a / 2), np.sin(theta_a / 2)
    cb, sb = np.cos(theta_b / 2), np.sin(theta_b / 2)
    total = phi_a + phi_b
    cl2, sl = np.cos(lam) ** 2, np.sin(lam)
    cross = np.sin(theta_a) * np.sin(theta_b) * sl / 2
    p_oo = (np.cos(total) ** 2 + np.sin(total) ** 2 * cl2) * ca**2 * cb**2
    p_ot = (
        (np.cos(phi_a) ** 2 + np.sin(phi_a) ** 2 * cl2) * ca**2 * sb**2
        - np.cos(phi_a) * np.sin(phi_b) * cross
        + (np.sin(phi_b) * sa * cb * sl) ** 2
    )
    p_to = (
        (np.cos(phi_b) ** 2 + np.sin(phi_b) ** 2 * cl2) * sa**2 * cb**2
        - np.cos(phi_b) * np.sin(phi_a) * cross
        + (np.sin(phi_a) * ca * sb * sl) ** 2
    )
    p_tt = (sa * sb + np.sin(total) * ca * cb * sl) ** 2
    return p_oo, p_ot, p_to, p_tt


def payoff_arrays(theta_a, phi_a, theta_b, phi_b, cfg: GameConfig):
    p_oo, p_ot, p_to, p_tt = probability_arrays(theta_a, phi_a, theta_b, phi_b, cfg.lam)
    mismatch = cfg.gamma * (p_ot + p_to)
    return (
        cfg.alpha * p_oo + mismatch + cfg.beta * p_tt,
        cfg.beta * p_oo + mismatch + cfg.alpha * p_tt,
    )


def outcome_probabilities_closed_form(
    sa: StrategyParams, sb: StrategyParams, cfg: GameConfig
) -> OutcomeProbabilities:
    p = probability_arrays(sa.theta, sa.phi, sb.theta, sb.phi, cfg.lam)
    return OutcomeProbabilities.from_array(p)


def outcome_probabilities_circuit(
    sa: StrategyParams, sb: StrategyParams, cfg: GameConfig
) -> OutcomeProbabilities:
    psi = final_state(sa, sb, cfg)
    return OutcomeProbabilities.from_array(np.abs(psi) ** 2)


def payoffs(p: OutcomeProbabilities, cfg: GameConfig) -> PayoffPair:
    mismatch = cfg.gamma * (p.p_ot + p.p_to)
    return PayoffPair(
        a=cfg.alpha * p.p_oo + mismatch + cfg.beta * p.p_tt,
        b=cfg.beta * p.p_oo + mismatch + cfg.alpha * p.p_tt,
    )


def payoffs_raw(p: OutcomeProbabilities, alpha: float, beta: float, gamma: float) -> PayoffPair:
    """Payoffs for arbitrary constants, skipping the ``alpha > beta > gamma`` check."""
    mismatch = gamma * (p.p_ot + p.p_to)
    return PayoffPair(
        a=alpha * p.p_oo + mismatch + beta * p.p_tt,
        b=beta * p.p_oo + mismatch + alpha * p.p_tt,
    )


def check_probabilities(p: OutcomeProbabilities, tol: float = 1e-9) -> None:
    arr = p.as_array()
    if np.any(arr < -1e-10) or np.any(arr > 1 + 1e-10):
        raise DomainError(f"probabilities out of [0, 1]: {arr}")
    if abs(arr.sum() - 1.0) > tol:
        raise DomainError(f"probabilities sum to {arr.sum()!r}")


def circuit_matches_closed_form(
    sa: StrategyParams, sb: StrategyParams, cfg: GameConfig, tol: float = DEFAULT_TOL
) -> bool:
    a = outcome_probabilities_circuit(sa, sb, cfg).as_array()
    b = outcome_probabilities_closed_form(sa, sb, cfg).as_array()
    return bool(np.max(np.abs(a - b)) <= tol)
