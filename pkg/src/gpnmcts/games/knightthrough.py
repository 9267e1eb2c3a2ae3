from __future__ import annotations

from ..game import Game
from .base import EMPTY, BoardState


class Knightthrough(Game):
    """Breakthrough with knights.

    Player 0 starts on the bottom ``home_rows`` rows and leaps upward,
    player 1 starts on the top rows and leaps downward. Every move is a
    knight leap that advances one or two rows; landing on an opponent
    captures it, landing on an own piece is illegal. Reaching the far row
    wins, and a player left without moves loses. Moves are
    ``(from_cell, to_cell)`` pairs with cells indexed ``row * size + col``.
    """

    def __init__(self, size: int = 8, home_rows: int = 2):
        if size < 3 or not 1 <= home_rows < size // 2 + (size % 2):
            raise ValueError(f"bad knightthrough geometry {size}x{home_rows}")
        self.size, self.home_rows = size, home_rows
        self.num_players = 2
        self.name = f"knightthrough:{size}x{home_rows}"
        self._goal_row = (size - 1, 0)
        self._targets = (self._leaps(+1), self._leaps(-1))

    def _leaps(self, direction: int) -> tuple[tuple[int, ...], ...]:
        n = self.size
        table = []
        for cell in range(n * n):
            r, c = divmod(cell, n)
            targets = []
            for dr, dc in ((1, -2), (1, 2), (2, -1), (2, 1)):
                rr, cc = r + dr * direction, c + dc
                if 0 <= rr < n and 0 <= cc < n:
                    targets.append(rr * n + cc)
            table.append(tuple(sorted(targets)))
        return tuple(table)

    def initial_state(self) -> BoardState:
        n, h = self.size, self.home_rows
        board = [EMPTY] * (n * n)
        for r in range(h):
            for c in range(n):
                board[r * n + c] = 0
                board[(n - 1 - r) * n + c] = 1
        board = tuple(board)
        return BoardState(board, 0, 0, None, False, self._moves(board, 0))

    def _moves(self, board, player: int) -> tuple:
        targets = self._targets[player]
        return tuple(
            (cell, to)
            for cell, piece in enumerate(board)
            if piece == player
            for to in targets[cell]
            if board[to] != player
        )

    def legal_moves(self, state):
        return state.moves

    def is_terminal(self, state) -> bool:
        return state.terminal

    def winner(self, state):
        return state.winner

    def next_state(self, state, move):
        frm, to = move
        player = state.mover
        board = list(state.board)
        board[frm] = EMPTY
        board[to] = player
        board = tuple(board)
        nxt = 1 - player
        if to // self.size == self._goal_row[player]:
            return BoardState(board, nxt, state.ply + 1, player, True, ())
        moves = self._moves(board, nxt)
        if not moves:
            return BoardState(board, nxt, state.ply + 1, player, True, ())
        return BoardState(board, nxt, state.ply + 1, None, False, moves)

    def max_plies(self) -> int:
        # every move advances some piece by at least one row
        return 2 * self.home_rows * self.size * (self.size - 1) + 1

    def reflect_move(self, move):
        n = self.size

        def mirror(cell):
            r, c = divmod(cell, n)
            return r * n + (n - 1 - c)

        return (mirror(move[0]), mirror(move[1]))

    def render(self, state) -> str:
        n = self.size
        return "\n".join(
            "".join(".WB"[state.board[r * n + c] + 1] for c in range(n)) for r in range(n - 1, -1, -1)
        )
