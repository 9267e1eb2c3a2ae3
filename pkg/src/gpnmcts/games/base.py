from __future__ import annotations

from typing import Optional

EMPTY = -1


class BoardState:
    """Immutable position on a cell board.

    Equality and hashing look only at the board and the mover; ``ply`` and
    the cached ``winner``/``terminal``/``moves`` are derived data.
    """

    __slots__ = ("board", "mover", "ply", "winner", "terminal", "moves")

    def __init__(self, board: tuple, mover: int, ply: int, winner: Optional[int], terminal: bool, moves: tuple):
        self.board = board
        self.mover = mover
        self.ply = ply
        self.winner = winner
        self.terminal = terminal
        self.moves = moves

    def __eq__(self, other):
        if not isinstance(other, BoardState):
            return NotImplemented
        return self.mover == other.mover and self.board == other.board

    def __hash__(self):
        return hash((self.board, self.mover))

    def __repr__(self):
        return f"BoardState(mover={self.mover}, ply={self.ply}, board={self.board})"


def grid_lines(width: int, height: int, k: int, index) -> list[tuple[int, ...]]:
    """All length-``k`` segments (rows, columns, both diagonals) of a grid.

    ``index(col, row)`` maps coordinates to a cell number.
    """
    lines = []
    for row in range(height):
        for col in range(width):
            for dc, dr in ((1, 0), (0, 1), (1, 1), (1, -1)):
                end_c, end_r = col + dc * (k - 1), row + dr * (k - 1)
                if 0 <= end_c < width and 0 <= end_r < height:
                    lines.append(tuple(index(col + dc * i, row + dr * i) for i in range(k)))
    return lines


def lines_through(lines: list[tuple[int, ...]], cells: int) -> list[tuple[tuple[int, ...], ...]]:
    through: list[list[tuple[int, ...]]] = [[] for _ in range(cells)]
    for line in lines:
        for cell in line:
            through[cell].append(line)
    return [tuple(t) for t in through]


def completes_line(board, cell: int, player: int, through) -> bool:
    for line in through[cell]:
        for c in line:
            if board[c] != player:
                break
        else:
            return True
    return False
