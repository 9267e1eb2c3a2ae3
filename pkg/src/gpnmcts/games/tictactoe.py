"""Tic-Tac-Toe and its three-player 4x4 cousin."""

from __future__ import annotations

from ..game import Game
from .base import EMPTY, BoardState, completes_line, grid_lines, lines_through


class LineGame(Game):
    """Players take turns marking empty cells; the first ``k`` in a row wins.

    A full board without a completed line is a draw for everybody.
    Moves are cell indices, row-major.
    """

    def __init__(self, width: int = 3, height: int = 3, k: int = 3, num_players: int = 2, name: str | None = None):
        if num_players < 2:
            raise ValueError("need at least two players")
        self.width, self.height, self.k = width, height, k
        self.num_players = num_players
        self.cells = width * height
        self.name = name or f"line:{width}x{height}x{k}x{num_players}"
        self._through = lines_through(grid_lines(width, height, k, lambda c, r: r * width + c), self.cells)

    def initial_state(self) -> BoardState:
        return BoardState((EMPTY,) * self.cells, 0, 0, None, False, tuple(range(self.cells)))

    def legal_moves(self, state):
        return state.moves

    def is_terminal(self, state) -> bool:
        return state.terminal

    def winner(self, state):
        return state.winner

    def next_state(self, state, move):
        board = list(state.board)
        player = state.mover
        board[move] = player
        board = tuple(board)
        if completes_line(board, move, player, self._through):
            return BoardState(board, (player + 1) % self.num_players, state.ply + 1, player, True, ())
        moves = tuple(m for m in state.moves if m != move)
        return BoardState(board, (player + 1) % self.num_players, state.ply + 1, None, not moves, moves)

    def max_plies(self) -> int:
        return self.cells

    def reflect_move(self, move):
        r, c = divmod(move, self.width)
        return r * self.width + (self.width - 1 - c)

    def render(self, state) -> str:
        marks = "XOABCDEFGH"
        rows = []
        for r in range(self.height - 1, -1, -1):
            row = state.board[r * self.width:(r + 1) * self.width]
            rows.append("".join("." if v == EMPTY else marks[v] for v in row))
        return "\n".join(rows)


class TicTacToe(LineGame):
    def __init__(self):
        super().__init__(3, 3, 3, 2, name="tictactoe")


class TriTicTacToe(LineGame):
    """Three players on a 4x4 board, three in a row wins."""

    def __init__(self):
        super().__init__(4, 4, 3, 3, name="tri-tictactoe")
