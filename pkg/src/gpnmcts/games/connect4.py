from __future__ import annotations

from ..game import Game
from .base import EMPTY, BoardState, completes_line, grid_lines, lines_through


class ConnectFour(Game):
    """Gravity connect-``k`` on a ``columns`` x ``rows`` board.

    Moves are column numbers. Cells are indexed column-major
    (``col * rows + row``, row 0 at the bottom).
    """

    def __init__(self, columns: int = 5, rows: int = 4, k: int = 3):
        if min(columns, rows, k) < 1:
            raise ValueError("connect4 dimensions must be positive")
        self.columns, self.rows, self.k = columns, rows, k
        self.num_players = 2
        self.name = f"connect4:{columns}x{rows}x{k}"
        self._through = lines_through(grid_lines(columns, rows, k, lambda c, r: c * rows + r), columns * rows)

    def initial_state(self) -> BoardState:
        return BoardState((EMPTY,) * (self.columns * self.rows), 0, 0, None, False, tuple(range(self.columns)))

    def legal_moves(self, state):
        return state.moves

    def is_terminal(self, state) -> bool:
        return state.terminal

    def winner(self, state):
        return state.winner

    def next_state(self, state, move):
        rows = self.rows
        board = state.board
        base = move * rows
        height = 0
        while board[base + height] != EMPTY:
            height += 1
        cell = base + height
        player = state.mover
        board = board[:cell] + (player,) + board[cell + 1:]
        nxt = 1 - player
        if completes_line(board, cell, player, self._through):
            return BoardState(board, nxt, state.ply + 1, player, True, ())
        moves = state.moves if height + 1 < rows else tuple(m for m in state.moves if m != move)
        return BoardState(board, nxt, state.ply + 1, None, not moves, moves)

    def max_plies(self) -> int:
        return self.columns * self.rows

    def reflect_move(self, move):
        return self.columns - 1 - move

    def render(self, state) -> str:
        out = []
        for r in range(self.rows - 1, -1, -1):
            out.append("".join(".XO"[state.board[c * self.rows + r] + 1] for c in range(self.columns)))
        return "\n".join(out)
