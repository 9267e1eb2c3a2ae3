"""Proof-number guided Monte-Carlo Tree Search and the baselines it is measured against."""

from .game import Game, IllegalMoveError, NotTerminalError, Outcome
from .games import make_game
from .gpn import BiasFormula, Gpn, GpnConfig
from .mcts import Mcts, MctsConfig, SearchBudget
from .oracle import Oracle
from .pns import INF, ProofNumberSearch, Verdict, solve

__version__ = "0.1.0"

__all__ = [
    "BiasFormula",
    "Game",
    "Gpn",
    "GpnConfig",
    "INF",
    "IllegalMoveError",
    "Mcts",
    "MctsConfig",
    "NotTerminalError",
    "Oracle",
    "Outcome",
    "ProofNumberSearch",
    "SearchBudget",
    "Verdict",
    "make_game",
    "solve",
]
