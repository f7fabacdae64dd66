"""Quantum battle of the sexes in the EWL scheme, with an ideal two-spin NMR emulator."""
from .linalg import DomainError
from .protocol import (
    OPERA,
    QUANTUM_Q,
    TELEVISION,
    GameConfig,
    OutcomeProbabilities,
    PayoffPair,
    StrategyParams,
    final_state,
    judge_operator,
    outcome_probabilities_circuit,
    outcome_probabilities_closed_form,
    payoffs,
    strategy_operator,
)
from .analysis import StrategyProfile, profile_payoffs

__all__ = [
    "DomainError",
    "GameConfig",
    "OPERA",
    "OutcomeProbabilities",
    "PayoffPair",
    "QUANTUM_Q",
    "StrategyParams",
    "StrategyProfile",
    "TELEVISION",
    "final_state",
    "judge_operator",
    "outcome_probabilities_circuit",
    "outcome_probabilities_closed_form",
    "payoffs",
    "profile_payoffs",
    "strategy_operator",
]
