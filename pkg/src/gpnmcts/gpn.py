"""MCTS guided by per-player proof numbers.

Every node carries one proof number per player: ``pn[p]`` takes the min
over children when ``p`` moves and the sum otherwise, so ``pn[p] == 0``
means ``p`` can force a win against a coalition of all other players. Selection
adds ``cpn * bias`` to UCB1, where the bias is computed from the sibling
proof numbers of the parent's mover and cached per parent until a child's
proof number changes.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .game import Game
from .mcts import (
    SQRT2,
    Mcts,
    MctsConfig,
    SearchNode,
    _argmax_random,
    eligible_indices,
    iter_tree,
)
from .pns import INF

# -- bias formulas ----------------------------------------------------------


def rank_scores(pns: Sequence[float]) -> list[float]:
    """Dense ascending rank of each value (infinity included), mapped to 1 - rank/maxRank."""
    distinct = sorted(set(pns))
    rank = {v: i + 1 for i, v in enumerate(distinct)}
    top = len(distinct)
    return [1.0 - rank[v] / top for v in pns]


def max_scores(pns: Sequence[float]) -> list[float]:
    finite = [v for v in pns if v != INF]
    if not finite:
        return [0.0] * len(pns)
    lo = min(finite)
    span = 1 + max(finite) - lo
    return [0.0 if v == INF else 1.0 - (v - lo) / span for v in pns]


def sum_scores(pns: Sequence[float]) -> list[float]:
    total = 1 + sum(v for v in pns if v != INF)
    return [0.0 if v == INF else 1.0 - v / total for v in pns]


def pn_rank(i: int, pns: Sequence[float]) -> float:
    return rank_scores(pns)[i]


def pn_max(i: int, pns: Sequence[float]) -> float:
    return max_scores(pns)[i]


def pn_sum(i: int, pns: Sequence[float]) -> float:
    return sum_scores(pns)[i]


class BiasFormula(enum.Enum):
    RANK = "rank"
    MAX = "max"
    SUM = "sum"

    def scores(self, pns: Sequence[float]) -> list[float]:
        return _FORMULAS[self](pns)

    def __call__(self, i: int, pns: Sequence[float]) -> float:
        return self.scores(pns)[i]


_FORMULAS = {BiasFormula.RANK: rank_scores, BiasFormula.MAX: max_scores, BiasFormula.SUM: sum_scores}


# -- tree -------------------------------------------------------------------


@dataclass(frozen=True)
class GpnConfig(MctsConfig):
    cpn: float = 0.0
    bias: BiasFormula = BiasFormula.RANK
    mobility: bool = False
    # recompute bias rows during backup instead of on demand during selection
    eager: bool = False

    def __post_init__(self):
        if self.cpn < 0:
            raise ValueError("cpn must be non-negative")
        if not isinstance(self.bias, BiasFormula):
            object.__setattr__(self, "bias", BiasFormula(self.bias))


class GpnNode(SearchNode):
    __slots__ = ("pn", "proof_winner", "bias", "need_recalc")

    def __init__(self, game: Game, state, parent=None, move=None, order=0):
        super().__init__(game, state, parent, move, order)
        self.pn: list[float] = [1] * game.num_players
        self.proof_winner: Optional[int] = game.winner(state) if self.terminal else None
        self.bias: list[float] = []
        self.need_recalc = False


def mobility_init(leaf: GpnNode, p: int) -> int:
    return 1 if p == leaf.mover else len(leaf.moves)


def update_proof_number(node: GpnNode, p: int, mobility: bool = False) -> bool:
    """Recompute ``node.pn[p]``; return whether it changed.

    A node without materialized children is a leaf and always reports a
    change. Internal nodes aggregate the materialized children only; while
    untried moves remain, an OR value cannot reach infinity and an AND
    value cannot reach zero.
    """
    children = node.children
    if not children:
        if node.terminal:
            node.pn[p] = 0 if node.proof_winner == p else INF
        elif mobility:
            node.pn[p] = mobility_init(node, p)
        else:
            node.pn[p] = 1
        return True
    old = node.pn[p]
    if p == node.mover:
        new = INF
        for c in children:
            v = c.pn[p]
            if v < new:
                new = v
        if new == INF and node.untried:
            new = 1
    else:
        new = 0
        for c in children:
            new += c.pn[p]
        if new == 0 and node.untried:
            new = len(node.untried)
    node.pn[p] = new
    return new != old


def update_children_pn_scores(node: GpnNode, formula: BiasFormula) -> None:
    m = node.mover
    node.bias = formula.scores([c.pn[m] for c in node.children])
    node.need_recalc = False


def best_uct_pn_child(node: GpnNode, c: float, cpn: float, rng: random.Random, sb: bool = True) -> GpnNode:
    children = node.children
    indices = eligible_indices(node) if sb else range(len(children))
    m = node.mover
    log_np = math.log(node.visits)
    bias = node.bias
    scored = []
    for i in indices:
        ch = children[i]
        n = ch.visits
        scored.append((ch.score_sums[m] / n + c * math.sqrt(log_np / n) + cpn * bias[i], ch))
    return _argmax_random(scored, rng)


def propagate_proof_numbers(leaf: GpnNode, players: int, mobility: bool = False) -> None:
    """Leaf-to-root proof-number walk per player with early stop.

    Whenever a node's number changes its parent's cached biases go stale,
    so the parent is flagged for recomputation.
    """
    for p in range(players):
        node = leaf
        changed = update_proof_number(node, p, mobility)
        while changed:
            parent = node.parent
            if parent is None:
                break
            parent.need_recalc = True
            node = parent
            changed = update_proof_number(node, p, mobility)


class Gpn(Mcts):
    node_class = GpnNode

    def __init__(self, game: Game, config: GpnConfig | None = None, rng: random.Random | None = None):
        super().__init__(game, config or GpnConfig(), rng)

    def new_node(self, state, parent=None, move=None, order=0) -> GpnNode:
        node = GpnNode(self.game, state, parent, move, order)
        for p in range(self.game.num_players):
            update_proof_number(node, p, self.config.mobility)
        return node

    def select(self, node):
        cfg = self.config
        if cfg.cpn == 0:
            return super().select(node)
        return best_uct_pn_child(node, cfg.c, cfg.cpn, self.rng, cfg.sb)

    def tree_policy(self, node):
        cfg = self.config
        lazy = cfg.cpn != 0 and not cfg.eager
        while not node.terminal:
            if lazy and node.need_recalc:
                update_children_pn_scores(node, cfg.bias)
            if node.untried:
                return self.expand(node), True
            node = self.select(node)
        return node, False

    def backup(self, leaf, utilities, expanded: bool) -> None:
        super().backup(leaf, utilities, expanded)
        if not expanded:
            # a revisited terminal: nothing about any proof number changed
            return
        cfg = self.config
        propagate_proof_numbers(leaf, self.game.num_players, cfg.mobility)
        if cfg.eager and cfg.cpn != 0:
            node = leaf.parent
            while node is not None:
                update_children_pn_scores(node, cfg.bias)
                node = node.parent


# -- consistency checks -------------------------------------------------------


def tree_violations(
    root: SearchNode, num_players: int, mobility: bool = False, formula: BiasFormula | None = None
) -> list[str]:
    """Invariant violations in a search tree; an empty list means healthy.

    Checks visit conservation, bound ordering, proof-number aggregation and,
    when ``formula`` is given, freshness of every cached bias row whose
    node is not flagged for recomputation.
    """
    problems = []
    for node in iter_tree(root):
        where = f"node {node.move!r} at ply {node.state.ply}"
        if node.children:
            extra = node.visits - sum(c.visits for c in node.children)
            allowed = (0, 1) if node is root else (1,)
            if extra not in allowed:
                problems.append(f"{where}: {extra} visits not accounted for by children")
        for q in range(num_players):
            if not 0.0 <= node.pess[q] <= node.opti[q] <= 1.0:
                problems.append(f"{where}: bounds for player {q} are [{node.pess[q]}, {node.opti[q]}]")
        if not isinstance(node, GpnNode):
            continue
        for p in range(num_players):
            expect = _recomputed_pn(node, p, mobility)
            if node.pn[p] != expect:
                problems.append(f"{where}: pn[{p}]={node.pn[p]}, aggregation gives {expect}")
        if formula is not None and node.bias and not node.need_recalc:
            fresh = formula.scores([c.pn[node.mover] for c in node.children])
            if fresh != node.bias:
                problems.append(f"{where}: stale bias row {node.bias} vs {fresh}")
    return problems


def _recomputed_pn(node: GpnNode, p: int, mobility: bool):
    saved = node.pn[p]
    update_proof_number(node, p, mobility)
    value, node.pn[p] = node.pn[p], saved
    return value


__all__ = [
    "BiasFormula",
    "Gpn",
    "GpnConfig",
    "GpnNode",
    "SQRT2",
    "best_uct_pn_child",
    "max_scores",
    "mobility_init",
    "pn_max",
    "pn_rank",
    "pn_sum",
    "propagate_proof_numbers",
    "rank_scores",
    "sum_scores",
    "tree_violations",
    "update_children_pn_scores",
    "update_proof_number",
]
