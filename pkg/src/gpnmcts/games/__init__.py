"""Concrete games and the string registry used by the CLI.

Grammar: ``name[:param[xparam...]]``, e.g. ``tictactoe``,
``tri-tictactoe``, ``knightthrough:8``, ``knightthrough:4x1``,
``connect4:5x4x3``.
"""

from __future__ import annotations

from ..game import Game
from .connect4 import ConnectFour
from .knightthrough import Knightthrough
from .tictactoe import LineGame, TicTacToe, TriTicTacToe

__all__ = [
    "ConnectFour",
    "GameSpecError",
    "Knightthrough",
    "LineGame",
    "TicTacToe",
    "TriTicTacToe",
    "UnknownGameError",
    "make_game",
    "GAME_NAMES",
]


class GameSpecError(ValueError):
    pass


class UnknownGameError(GameSpecError):
    pass


def _params(name: str, raw: str | None, arity: tuple[int, ...]) -> list[int]:
    if raw is None:
        return []
    out = []
    for token in raw.split("x"):
        try:
            value = int(token)
        except ValueError:
            raise GameSpecError(f"{name}: bad parameter {token!r} in {raw!r}") from None
        if value <= 0:
            raise GameSpecError(f"{name}: parameter {token!r} must be positive")
        out.append(value)
    if len(out) not in arity:
        raise GameSpecError(f"{name}: expected {' or '.join(map(str, arity))} parameters, got {raw!r}")
    return out


def _tictactoe(raw):
    _params("tictactoe", raw, (0,))
    return TicTacToe()


def _tri(raw):
    _params("tri-tictactoe", raw, (0,))
    return TriTicTacToe()


def _knightthrough(raw):
    p = _params("knightthrough", raw, (1, 2))
    size = p[0] if p else 8
    rows = p[1] if len(p) > 1 else 2
    try:
        return Knightthrough(size, rows)
    except ValueError as e:
        raise GameSpecError(str(e)) from None


def _connect4(raw):
    p = _params("connect4", raw, (3,))
    return ConnectFour(*p) if p else ConnectFour()


_REGISTRY = {
    "tictactoe": _tictactoe,
    "tri-tictactoe": _tri,
    "knightthrough": _knightthrough,
    "connect4": _connect4,
}

GAME_NAMES = tuple(_REGISTRY)


def make_game(spec: str) -> Game:
    name, sep, raw = spec.strip().partition(":")
    if name not in _REGISTRY:
        raise UnknownGameError(f"unknown game {name!r}; known: {', '.join(GAME_NAMES)}")
    if sep and not raw:
        raise GameSpecError(f"{name}: empty parameter list in {spec!r}")
    return _REGISTRY[name](raw if sep else None)
