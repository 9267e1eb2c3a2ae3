"""UCT with Score-Bounded solving and tree reuse.

Utilities live in [0, 1] (win 1, draw 0.5, loss 0). Every node keeps a
per-player vector of accumulated utilities and a per-player
pessimistic/optimistic score bound.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from .game import Game, Move

SQRT2 = math.sqrt(2.0)


class NoChildrenError(RuntimeError):
    """The root was never expanded, so there is nothing to recommend."""


@dataclass(frozen=True)
class SearchBudget:
    """Per-move budget: exactly one of ``iterations`` or ``time_ms``."""

    iterations: Optional[int] = None
    time_ms: Optional[float] = None

    def __post_init__(self):
        if (self.iterations is None) == (self.time_ms is None):
            raise ValueError("exactly one of iterations or time_ms must be set")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be non-negative")
        if self.time_ms is not None and self.time_ms <= 0:
            raise ValueError("time_ms must be positive")

    @property
    def mode(self) -> str:
        return "iterations" if self.iterations is not None else "time"

    def describe(self) -> str:
        return f"{self.iterations} iterations" if self.mode == "iterations" else f"{self.time_ms:g} ms"


@dataclass(frozen=True)
class MctsConfig:
    c: float = SQRT2
    sb: bool = True
    reuse: bool = True


class SearchNode:
    __slots__ = (
        "parent", "move", "order", "state", "mover", "terminal", "visits",
        "score_sums", "children", "untried", "moves", "pess", "opti",
    )

    def __init__(self, game: Game, state, parent: Optional["SearchNode"] = None, move: Move = None, order: int = 0):
        n = game.num_players
        self.parent = parent
        self.move = move
        self.order = order  # index of ``move`` in the parent's legal-move list
        self.state = state
        self.mover = state.mover
        self.visits = 0
        self.score_sums = [0.0] * n
        self.children: list[SearchNode] = []
        self.terminal = game.is_terminal(state)
        if self.terminal:
            self.moves = ()
            self.untried: list[int] = []
            u = list(game.utilities(state))
            self.pess = u
            self.opti = list(u)
        else:
            self.moves = tuple(game.legal_moves(state))
            self.untried = list(range(len(self.moves)))
            self.pess = [0.0] * n
            self.opti = [1.0] * n

    @property
    def fully_expanded(self) -> bool:
        return not self.untried

    def value(self, player: int) -> float:
        return self.score_sums[player] / self.visits

    def __repr__(self):
        return (f"{type(self).__name__}(move={self.move!r}, visits={self.visits}, "
                f"children={len(self.children)}, untried={len(self.untried)})")


def ucb1_value(child: SearchNode, parent: SearchNode, c: float) -> float:
    v = child.score_sums[parent.mover] / child.visits
    return v + c * math.sqrt(math.log(parent.visits) / child.visits)


def eligible_indices(node: SearchNode) -> list[int]:
    """Indices of the children that Score-Bounded selection may enter."""
    m = node.mover
    floor = node.pess[m]
    children = node.children
    out = [i for i, c in enumerate(children) if c.opti[m] > floor]
    if not out:
        out = [i for i, c in enumerate(children) if c.opti[m] == floor and c.pess[m] == floor]
    return out or list(range(len(children)))


def sb_filter(node: SearchNode) -> list[SearchNode]:
    return [node.children[i] for i in eligible_indices(node)]


def _argmax_random(scored, rng: random.Random):
    best = -math.inf
    ties: list = []
    for value, item in scored:
        if value > best:
            best = value
            ties = [item]
        elif value == best:
            ties.append(item)
    if len(ties) == 1:
        return ties[0]
    return ties[rng.randrange(len(ties))]


def select_child(node: SearchNode, c: float, rng: random.Random, sb: bool = True) -> SearchNode:
    """UCB1 over the eligible children; exact ties are broken uniformly."""
    children = node.children
    indices = eligible_indices(node) if sb else range(len(children))
    m = node.mover
    log_np = math.log(node.visits)
    scored = []
    for i in indices:
        ch = children[i]
        n = ch.visits
        scored.append((ch.score_sums[m] / n + c * math.sqrt(log_np / n), ch))
    return _argmax_random(scored, rng)


def simulate(game: Game, state, rng: random.Random) -> tuple[float, ...]:
    return game.rollout(state, rng)


def backprop_scores(leaf: SearchNode, utilities: Sequence[float]) -> None:
    node = leaf
    n = len(utilities)
    while node is not None:
        sums = node.score_sums
        for q in range(n):
            sums[q] += utilities[q]
        node.visits += 1
        node = node.parent


def sb_update(node: SearchNode) -> bool:
    """Recompute a node's bounds from its children; report any change.

    Untried moves count as children with the vacuous bounds [0, 1].
    """
    children = node.children
    if not children:
        return False
    m = node.mover
    vacuous = bool(node.untried)
    changed = False
    for q in range(len(node.pess)):
        if q == m:
            pess = max(c.pess[q] for c in children)
        else:
            pess = 0.0 if vacuous else min(c.pess[q] for c in children)
        opti = 1.0 if vacuous else max(c.opti[q] for c in children)
        if pess != node.pess[q] or opti != node.opti[q]:
            node.pess[q] = pess
            node.opti[q] = opti
            changed = True
    return changed


def sb_propagate(node: Optional[SearchNode]) -> None:
    while node is not None and sb_update(node):
        node = node.parent


def is_solved(node: SearchNode) -> bool:
    m = node.mover
    return node.pess[m] >= node.opti[m]


def recommend_move(root: SearchNode) -> Move:
    """Proven win first, otherwise the most-visited child not proven lost."""
    children = root.children
    if not children:
        raise NoChildrenError("root has no expanded children")
    m = root.mover

    def key(c):
        return (c.visits, -c.order)

    wins = [c for c in children if c.pess[m] >= 1.0]
    if wins:
        return max(wins, key=key).move
    alive = [c for c in children if c.opti[m] > 0.0] or children
    return max(alive, key=key).move


def reuse_tree(root: Optional[SearchNode], moves: Sequence[Move]) -> Optional[SearchNode]:
    """Follow ``moves`` from ``root``; the reached subtree becomes the new root.

    Returns ``None`` when some move was never expanded.
    """
    node = root
    for move in moves:
        if node is None:
            return None
        node = next((c for c in node.children if c.move == move), None)
    if node is not None:
        node.parent = None
    return node


def iter_tree(root: SearchNode):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(node.children)


def tree_signature(root: SearchNode):
    """Nested tuple of everything statistics-bearing in a tree."""
    return (
        root.move,
        root.visits,
        tuple(root.score_sums),
        tuple(root.pess),
        tuple(root.opti),
        tuple(sorted(root.untried)),
        tuple(tree_signature(c) for c in root.children),
    )


class Mcts:
    """One search tree owned by one thread; the rng is explicit."""

    node_class = SearchNode

    def __init__(self, game: Game, config: MctsConfig | None = None, rng: random.Random | None = None):
        self.game = game
        self.config = config or MctsConfig()
        self.rng = rng or random.Random()
        self.root: Optional[SearchNode] = None
        self.last_iterations = 0
        self.trace: Optional[list] = None

    def new_node(self, state, parent=None, move=None, order=0) -> SearchNode:
        return self.node_class(self.game, state, parent, move, order)

    def set_root(self, state) -> SearchNode:
        self.root = self.new_node(state)
        return self.root

    def advance(self, state, moves: Sequence[Move] | None) -> SearchNode:
        """Position the root at ``state``, reusing the old tree when allowed."""
        root = None
        if self.config.reuse and self.root is not None and moves is not None:
            root = reuse_tree(self.root, moves)
            if root is not None and root.state != state:
                root = None
        if root is None:
            return self.set_root(state)
        self.root = root
        return root

    # -- one iteration ------------------------------------------------------

    def expand(self, node: SearchNode) -> SearchNode:
        untried = node.untried
        k = self.rng.randrange(len(untried))
        idx = untried[k]
        untried[k] = untried[-1]
        untried.pop()
        move = node.moves[idx]
        child = self.new_node(self.game.next_state(node.state, move), node, move, idx)
        node.children.append(child)
        return child

    def select(self, node: SearchNode) -> SearchNode:
        return select_child(node, self.config.c, self.rng, self.config.sb)

    def tree_policy(self, node: SearchNode) -> tuple[SearchNode, bool]:
        while not node.terminal:
            if node.untried:
                return self.expand(node), True
            node = self.select(node)
        return node, False

    def backup(self, leaf: SearchNode, utilities, expanded: bool) -> None:
        backprop_scores(leaf, utilities)
        if self.config.sb:
            sb_propagate(leaf.parent)

    def iteration(self) -> None:
        leaf, expanded = self.tree_policy(self.root)
        if self.trace is not None:
            self.trace.append(_path(leaf))
        if leaf.terminal:
            utilities = self.game.utilities(leaf.state)
        else:
            utilities = simulate(self.game, leaf.state, self.rng)
        self.backup(leaf, utilities, expanded)

    def solved(self) -> bool:
        return self.config.sb and is_solved(self.root)

    def run(self, budget: SearchBudget) -> int:
        """Iterate on the current root until the budget runs out or it is solved."""
        done = 0
        if budget.iterations is not None:
            while done < budget.iterations and not self.solved():
                self.iteration()
                done += 1
        else:
            deadline = time.perf_counter() + budget.time_ms / 1000.0
            while time.perf_counter() < deadline and not self.solved():
                self.iteration()
                done += 1
        self.last_iterations = done
        return done

    def search(self, state, budget: SearchBudget, moves: Sequence[Move] | None = None) -> Move:
        self.advance(state, moves)
        self.run(budget)
        try:
            return recommend_move(self.root)
        except NoChildrenError:
            legal = self.game.legal_moves(state)
            return legal[self.rng.randrange(len(legal))]


def _path(leaf: SearchNode) -> tuple:
    out = []
    node = leaf
    while node.parent is not None:
        out.append(node.move)
        node = node.parent
    return tuple(reversed(out))
