"""Classic two-valued Proof-Number Search over an AND/OR tree.

OR nodes are positions where the goal player moves; every other position
is an AND node. Proven means the goal player can force a win; a forced
loss or a draw disproves.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

from .game import Game

#: Saturating infinity shared by every proof-number computation.
INF = math.inf


class Verdict(enum.Enum):
    PROVEN = "PROVEN"
    DISPROVEN = "DISPROVEN"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class SolveResult:
    verdict: Verdict
    nodes: int


class PnsNode:
    __slots__ = ("state", "is_or", "pn", "dpn", "children", "parent", "move", "expanded")

    def __init__(self, state, is_or: bool, parent: Optional["PnsNode"] = None, move=None):
        self.state = state
        self.is_or = is_or
        self.pn = 1
        self.dpn = 1
        self.children: list[PnsNode] = []
        self.parent = parent
        self.move = move
        self.expanded = False

    def __repr__(self):
        kind = "OR" if self.is_or else "AND"
        return f"PnsNode({kind}, pn={self.pn}, dpn={self.dpn}, children={len(self.children)})"


def select_most_proving(root: PnsNode) -> PnsNode:
    """Descend by minimal pn at OR nodes and minimal dpn at AND nodes.

    Ties go to the first child in move order.
    """
    node = root
    while node.expanded:
        best = node.children[0]
        if node.is_or:
            for child in node.children:
                if child.pn < best.pn:
                    best = child
        else:
            for child in node.children:
                if child.dpn < best.dpn:
                    best = child
        node = best
    return node


def init_leaf(leaf: PnsNode, mobility: bool, num_moves: int = 1) -> None:
    leaf.pn = leaf.dpn = 1
    if mobility:
        if leaf.is_or:
            leaf.dpn = num_moves
        else:
            leaf.pn = num_moves


def set_numbers(node: PnsNode) -> None:
    children = node.children
    if node.is_or:
        node.pn = min(c.pn for c in children)
        node.dpn = sum(c.dpn for c in children)
    else:
        node.pn = sum(c.pn for c in children)
        node.dpn = min(c.dpn for c in children)


class ProofNumberSearch:
    """A PNS tree for one goal player, expanded one most-proving node at a time."""

    def __init__(self, game: Game, state, goal: int, mobility: bool = False):
        self.game = game
        self.goal = goal
        self.mobility = mobility
        self.root = self.make_node(state, None, None)
        self.nodes = 1

    def make_node(self, state, parent, move) -> PnsNode:
        node = PnsNode(state, state.mover == self.goal, parent, move)
        game = self.game
        if game.is_terminal(state):
            if game.winner(state) == self.goal:
                node.pn, node.dpn = 0, INF
            else:
                node.pn, node.dpn = INF, 0
        else:
            init_leaf(node, self.mobility, len(game.legal_moves(state)))
        return node

    def expand(self, node: PnsNode) -> None:
        game = self.game
        for move in game.legal_moves(node.state):
            node.children.append(self.make_node(game.next_state(node.state, move), node, move))
        self.nodes += len(node.children)
        node.expanded = True

    def update_ancestors(self, node: Optional[PnsNode]) -> None:
        while node is not None:
            old = (node.pn, node.dpn)
            set_numbers(node)
            if (node.pn, node.dpn) == old:
                break
            node = node.parent

    def step(self) -> PnsNode:
        leaf = select_most_proving(self.root)
        self.expand(leaf)
        self.update_ancestors(leaf)
        return leaf

    @property
    def solved(self) -> bool:
        return self.root.pn == 0 or self.root.dpn == 0

    def verdict(self) -> Verdict:
        if self.root.pn == 0:
            return Verdict.PROVEN
        if self.root.dpn == 0:
            return Verdict.DISPROVEN
        return Verdict.UNKNOWN

    def run(self, max_nodes: float = INF) -> SolveResult:
        while not self.solved and self.nodes < max_nodes:
            self.step()
        return SolveResult(self.verdict(), self.nodes)


def solve(game: Game, state, goal: int, max_nodes: float = INF, mobility: bool = False) -> SolveResult:
    if max_nodes <= 0:
        raise ValueError("max_nodes must be positive")
    if not 0 <= goal < game.num_players:
        raise ValueError(f"goal must be a player index below {game.num_players}, got {goal}")
    return ProofNumberSearch(game, state, goal, mobility).run(max_nodes)


def iter_nodes(root: PnsNode):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)
