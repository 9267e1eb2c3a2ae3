"""Exhaustive ground truth for small games.

Three envelopes are computed for a player ``p``:

* paranoid value: ``p`` maximizes its utility, every other player minimizes it;
* optimistic value: every player maximizes ``p``'s utility;
* exact value (two players only): plain minimax, which equals the paranoid
  value of each side.

A proof of ``p``'s win is sound exactly when the paranoid value is 1; a
claim that ``p`` can never win is sound exactly when the optimistic value
is below 1.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

from .game import Game

DEFAULT_NODE_CAP = 5_000_000


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleVerdict:
    paranoid_win: tuple[bool, ...]
    optimistic_win: tuple[bool, ...]
    exact_value: Optional[tuple[float, ...]] = None

    def as_dict(self) -> dict:
        return {
            "paranoid_win": list(self.paranoid_win),
            "optimistic_win": list(self.optimistic_win),
            "exact_value": None if self.exact_value is None else list(self.exact_value),
        }


class Oracle:
    """Memoized solver bound to one game.

    The memo persists across calls on the same instance, which makes
    checking every node of a search tree affordable. ``node_cap`` limits the
    number of distinct (state, player, mode) entries.
    """

    def __init__(self, game: Game, node_cap: int = DEFAULT_NODE_CAP):
        self.game = game
        self.node_cap = node_cap
        self._memo: dict = {}

    @property
    def entries(self) -> int:
        return len(self._memo)

    def _value(self, state, p: int, paranoid: bool) -> float:
        key = (state, p, paranoid)
        memo = self._memo
        hit = memo.get(key)
        if hit is not None:
            return hit
        game = self.game
        if game.is_terminal(state):
            value = game.utilities(state)[p]
        else:
            maximize = state.mover == p or not paranoid
            if maximize:
                value = 0.0
                for move in game.legal_moves(state):
                    v = self._value(game.next_state(state, move), p, paranoid)
                    if v > value:
                        value = v
                        if value >= 1.0:
                            break
            else:
                value = 1.0
                for move in game.legal_moves(state):
                    v = self._value(game.next_state(state, move), p, paranoid)
                    if v < value:
                        value = v
                        if value <= 0.0:
                            break
        if len(memo) >= self.node_cap:
            raise OracleBudgetExceeded(f"oracle node cap of {self.node_cap} entries exceeded")
        memo[key] = value
        return value

    def paranoid_value(self, state, p: int) -> float:
        with _deep_recursion():
            return self._value(state, p, True)

    def optimistic_value(self, state, p: int) -> float:
        with _deep_recursion():
            return self._value(state, p, False)

    def paranoid_win(self, state, p: int) -> bool:
        return self.paranoid_value(state, p) >= 1.0

    def optimistic_win(self, state, p: int) -> bool:
        return self.optimistic_value(state, p) >= 1.0

    def exact(self, state) -> tuple[float, float]:
        if self.game.num_players != 2:
            raise ValueError("exact values are defined for two-player games only")
        v = self.paranoid_value(state, 0)
        return (v, 1.0 - v)

    def verdict(self, state) -> OracleVerdict:
        n = self.game.num_players
        return OracleVerdict(
            tuple(self.paranoid_win(state, p) for p in range(n)),
            tuple(self.optimistic_win(state, p) for p in range(n)),
            self.exact(state) if n == 2 else None,
        )


class _deep_recursion:
    def __enter__(self):
        self._old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(self._old, 20_000))

    def __exit__(self, *exc):
        sys.setrecursionlimit(self._old)


def solve_exact(game: Game, state, node_cap: int = DEFAULT_NODE_CAP) -> OracleVerdict:
    if game.num_players != 2:
        raise ValueError("solve_exact needs a two-player game")
    return Oracle(game, node_cap).verdict(state)


def solve_paranoid(game: Game, state, p: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return Oracle(game, node_cap).paranoid_win(state, p)


def solve_optimistic(game: Game, state, p: int, node_cap: int = DEFAULT_NODE_CAP) -> bool:
    return Oracle(game, node_cap).optimistic_win(state, p)
