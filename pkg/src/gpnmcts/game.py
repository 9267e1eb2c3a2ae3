"""Abstract game interface shared by every search algorithm and game."""

from __future__ import annotations

import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Hashable, Optional, Sequence

Move = Hashable
PlayerId = int


class IllegalMoveError(ValueError):
    """Raised when a move is not in the legal-move list of a state."""


class NotTerminalError(ValueError):
    """Raised when an outcome is requested for a non-terminal state."""


@dataclass(frozen=True)
class Outcome:
    """Final result of a game: one utility in [0, 1] per player."""

    utilities: tuple[float, ...]
    winner: Optional[PlayerId] = None

    @classmethod
    def win(cls, winner: PlayerId, num_players: int) -> "Outcome":
        return cls(tuple(1.0 if q == winner else 0.0 for q in range(num_players)), winner)

    @classmethod
    def draw(cls, num_players: int) -> "Outcome":
        return cls((0.5,) * num_players, None)


class Game(ABC):
    """Rules of a deterministic, perfect-information, turn-based game.

    States are immutable and hashable. Every state exposes ``mover`` and
    ``ply`` attributes; everything else about them is game-specific.
    Subclasses implement ``legal_moves``, ``next_state``, ``winner`` and
    ``is_terminal``; ``apply`` and ``outcome`` add the checked contract.
    """

    name: str = "game"
    num_players: int = 2

    @abstractmethod
    def initial_state(self) -> Any: ...

    @abstractmethod
    def legal_moves(self, state) -> Sequence[Move]:
        """Deterministically ordered legal moves; empty for terminal states."""

    @abstractmethod
    def next_state(self, state, move: Move):
        """Successor of ``state`` under ``move`` without legality checks."""

    @abstractmethod
    def is_terminal(self, state) -> bool: ...

    @abstractmethod
    def winner(self, state) -> Optional[PlayerId]:
        """Winner of a terminal state, ``None`` for a draw or a live state."""

    def apply(self, state, move: Move):
        if self.is_terminal(state) or move not in self.legal_moves(state):
            raise IllegalMoveError(f"illegal move {move!r} in {self.name} at ply {state.ply}")
        return self.next_state(state, move)

    def outcome(self, state) -> Outcome:
        if not self.is_terminal(state):
            raise NotTerminalError(f"{self.name}: state at ply {state.ply} is not terminal")
        w = self.winner(state)
        if w is None:
            return Outcome.draw(self.num_players)
        return Outcome.win(w, self.num_players)

    def utilities(self, state) -> tuple[float, ...]:
        return self.outcome(state).utilities

    def rollout(self, state, rng: random.Random) -> tuple[float, ...]:
        """Play uniformly random moves to the end; return the utilities."""
        while not self.is_terminal(state):
            moves = self.legal_moves(state)
            state = self.next_state(state, moves[rng.randrange(len(moves))])
        return self.utilities(state)

    def max_plies(self) -> int:
        """Hard upper bound on the length of any game."""
        raise NotImplementedError

    def reflect_move(self, move: Move) -> Move:
        """Image of ``move`` under the board's left-right mirror."""
        raise NotImplementedError

    def render(self, state) -> str:
        return repr(state)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"
