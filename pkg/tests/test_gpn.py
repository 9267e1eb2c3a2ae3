import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpnmcts.games import make_game
from gpnmcts.gpn import (
    BiasFormula,
    Gpn,
    GpnConfig,
    GpnNode,
    best_uct_pn_child,
    max_scores,
    mobility_init,
    pn_max,
    pn_rank,
    pn_sum,
    propagate_proof_numbers,
    rank_scores,
    sum_scores,
    tree_violations,
    update_children_pn_scores,
    update_proof_number,
)
from gpnmcts.mcts import Mcts, MctsConfig, SearchBudget, select_child, tree_signature
from gpnmcts.pns import INF

from harness import correspondence_mismatches, selection_trace, soundness_report

TTT = make_game("tictactoe")
ALL = [rank_scores, max_scores, sum_scores]

pn_values = st.one_of(st.integers(1, 100), st.just(INF))
pn_vectors = st.lists(pn_values, min_size=1, max_size=20)


def independent_rank(pns):
    """Dense rank by sorting and counting value changes, written without sets."""
    order = sorted(range(len(pns)), key=lambda i: pns[i])
    ranks = [0] * len(pns)
    r, prev = 0, None
    for i in order:
        if pns[i] != prev:
            r += 1
            prev = pns[i]
        ranks[i] = r
    return [1 - x / r for x in ranks]


class TestFormulas:
    def test_rank_example(self):
        assert rank_scores([1, 3, 3, INF]) == pytest.approx([2 / 3, 1 / 3, 1 / 3, 0])

    def test_rank_all_equal(self):
        assert rank_scores([5, 5]) == [0.0, 0.0]

    def test_rank_all_infinite(self):
        assert rank_scores([INF] * 3) == [0.0] * 3

    def test_max_example(self):
        assert max_scores([2, 5, INF]) == [1.0, 0.25, 0.0]

    def test_max_single(self):
        assert max_scores([7]) == [1.0]
        assert max_scores([INF]) == [0.0]

    def test_sum_examples(self):
        assert sum_scores([2, 5, INF]) == [0.75, 0.375, 0.0]
        assert sum_scores([1, 1]) == pytest.approx([2 / 3, 2 / 3])
        assert sum_scores([INF, 3]) == [0.0, 0.25]

    def test_index_wrappers(self):
        pns = [2, 5, INF]
        assert [pn_max(i, pns) for i in range(3)] == max_scores(pns)
        assert [pn_sum(i, pns) for i in range(3)] == sum_scores(pns)
        assert [pn_rank(i, pns) for i in range(3)] == rank_scores(pns)
        assert BiasFormula.MAX(1, pns) == 0.25
        assert BiasFormula("sum") is BiasFormula.SUM

    @given(pn_vectors)
    def test_rank_matches_independent_oracle(self, pns):
        assert rank_scores(pns) == pytest.approx(independent_rank(pns))


@settings(max_examples=500)
@given(pn_vectors)
def test_conditions(pns):
    finite = [v for v in pns if v != INF]
    for f in ALL:
        out = f(pns)
        assert all(0.0 <= x <= 1.0 for x in out)
        for i, v in enumerate(pns):
            if v == INF:
                assert out[i] == 0.0  # (a)
            elif len(finite) < len(pns):
                assert out[i] > 0.0  # (b)
            for j, w in enumerate(pns):
                if v == w:
                    assert out[i] == out[j]  # (c)
    if finite:
        out = max_scores(pns)
        lo = min(finite)
        assert all(out[i] == 1.0 for i, v in enumerate(pns) if v == lo)  # (d)


def gpn_leaf(state, parent=None, move=None):
    node = GpnNode(TTT, state, parent, move)
    for p in range(2):
        update_proof_number(node, p)
    return node


def attach(parent, moves):
    out = []
    for m in moves:
        idx = parent.moves.index(m)
        child = gpn_leaf(TTT.next_state(parent.state, m), parent, m)
        child.order = idx
        parent.children.append(child)
        parent.untried.remove(idx)
        out.append(child)
    return out


class TestUpdateProofNumber:
    def test_fresh_leaf(self):
        node = GpnNode(TTT, TTT.initial_state())
        node.pn = [7, 7]
        assert update_proof_number(node, 0) and node.pn[0] == 1

    def test_terminal_leaf(self):
        s = TTT.initial_state()
        for m in (0, 3, 1, 4, 2):
            s = TTT.apply(s, m)
        node = gpn_leaf(s)
        assert node.pn == [0, INF]

    def test_drawn_terminal(self):
        s = TTT.initial_state()
        for m in (0, 1, 2, 4, 3, 5, 7, 6, 8):
            s = TTT.apply(s, m)
        assert gpn_leaf(s).pn == [INF, INF]

    def test_or_min(self):
        root = gpn_leaf(TTT.initial_state())
        kids = attach(root, [0, 1, 2])
        root.untried = []
        for k, v in zip(kids, [3, 2, INF]):
            k.pn[0] = v
        assert update_proof_number(root, 0) and root.pn[0] == 2

    def test_and_saturating_sum(self):
        root = gpn_leaf(TTT.initial_state())
        kids = attach(root, [0, 1])
        root.untried = []
        kids[0].pn[1], kids[1].pn[1] = 1, INF
        update_proof_number(root, 1)
        assert root.pn[1] == INF

    def test_partial_or_never_infinite(self):
        root = gpn_leaf(TTT.initial_state())
        (kid,) = attach(root, [4])
        kid.pn[0] = INF
        update_proof_number(root, 0)
        assert root.pn[0] == 1

    def test_partial_and_never_zero(self):
        root = gpn_leaf(TTT.initial_state())
        (kid,) = attach(root, [4])
        kid.pn[1] = 0
        update_proof_number(root, 1)
        assert root.pn[1] == 8

    def test_unchanged_reports_false(self):
        root = gpn_leaf(TTT.initial_state())
        attach(root, [0, 1])
        update_proof_number(root, 0)
        assert not update_proof_number(root, 0)


class TestMobility:
    def test_opponent_counts_moves(self):
        node = GpnNode(TTT, TTT.initial_state())
        assert mobility_init(node, 1) == 9
        update_proof_number(node, 1, mobility=True)
        assert node.pn[1] == 9

    def test_mover_keeps_one(self):
        node = GpnNode(TTT, TTT.initial_state())
        assert mobility_init(node, 0) == 1

    def test_single_move(self):
        s = TTT.initial_state()
        for m in (0, 1, 2, 4, 3, 5, 7, 6):
            s = TTT.apply(s, m)
        node = GpnNode(TTT, s)
        assert len(node.moves) == 1 and mobility_init(node, 1) == 1


class TestBias:
    def test_solved_child_score_drops_on_next_service(self):
        root = gpn_leaf(TTT.initial_state())
        kids = attach(root, [0, 1])
        update_children_pn_scores(root, BiasFormula.MAX)
        assert root.bias == [1.0, 1.0]
        kids[0].pn[0] = INF
        assert not update_proof_number(root, 0)
        root.need_recalc = True
        update_children_pn_scores(root, BiasFormula.MAX)
        assert root.bias == [0.0, 1.0] and not root.need_recalc

    def two_equal_children(self):
        root = gpn_leaf(TTT.initial_state())
        kids = attach(root, [0, 1])
        root.untried = []
        root.visits = 20
        for k in kids:
            k.visits, k.score_sums = 10, [5.0, 5.0]
        return root, kids

    def test_bias_breaks_tie(self):
        root, kids = self.two_equal_children()
        kids[0].pn[0], kids[1].pn[0] = 1, INF
        update_children_pn_scores(root, BiasFormula.MAX)
        for seed in range(20):
            assert best_uct_pn_child(root, math.sqrt(2), 0.5, random.Random(seed)) is kids[0]

    def test_zero_cpn_matches_plain_selection(self):
        root, kids = self.two_equal_children()
        update_children_pn_scores(root, BiasFormula.RANK)
        for seed in range(50):
            a = best_uct_pn_child(root, 1.0, 0.0, random.Random(seed))
            b = select_child(root, 1.0, random.Random(seed))
            assert a is b

    def test_huge_cpn_follows_bias(self):
        root = gpn_leaf(TTT.initial_state())
        kids = attach(root, [0, 1, 2])
        root.untried = []
        root.visits = 300
        for k, (n, w, pn) in zip(kids, [(200, 190, 9), (90, 10, 1), (10, 9, 4)]):
            k.visits, k.score_sums, k.pn[0] = n, [w, n - w], pn
        update_children_pn_scores(root, BiasFormula.SUM)
        assert best_uct_pn_child(root, 1.0, 1e6, random.Random(0)) is kids[1]


class TestBackup:
    def tree(self):
        """Root (X to move) with two expanded children, the first also expanded once."""
        root = gpn_leaf(TTT.initial_state())
        a, b = attach(root, [0, 1])
        (a1,) = attach(a, [4])
        for node in (a, root):
            for p in range(2):
                update_proof_number(node, p)
        root.need_recalc = a.need_recalc = False
        return root, a, b, a1

    def test_win_propagates_through_or_ancestors(self):
        engine = Gpn(TTT, GpnConfig(cpn=1.0))
        s = TTT.initial_state()
        for m in (0, 3, 1, 4):
            s = TTT.apply(s, m)
        root = engine.set_root(s)
        win = engine.new_node(TTT.next_state(s, 2), root, 2, root.moves.index(2))
        root.children.append(win)
        root.untried.remove(root.moves.index(2))
        engine.backup(win, TTT.utilities(win.state), True)
        assert win.pn[0] == 0 and root.pn[0] == 0 and root.need_recalc

    def test_rise_hidden_by_sibling_still_flags_parent(self):
        root, a, b, a1 = self.tree()
        assert (a.pn[0], b.pn[0], root.pn[0]) == (1, 1, 1)
        # a second reply under ``a`` raises X's AND-sum there; ``b`` keeps the root's min at 1
        (a2,) = attach(a, [8])
        propagate_proof_numbers(a2, 2)
        assert a.pn[0] == 2 and root.pn[0] == 1
        assert a.need_recalc and root.need_recalc

    def test_terminal_revisit_sets_no_flags(self):
        engine = Gpn(TTT, GpnConfig(cpn=1.0))
        s = TTT.initial_state()
        for m in (0, 3, 1, 4):
            s = TTT.apply(s, m)
        root = engine.set_root(s)
        win = engine.new_node(TTT.next_state(s, 2), root, 2, root.moves.index(2))
        root.children.append(win)
        root.untried.remove(root.moves.index(2))
        engine.backup(win, TTT.utilities(win.state), True)
        root.need_recalc = False
        engine.backup(win, TTT.utilities(win.state), False)
        assert not root.need_recalc and root.visits == 2


class TestIteration:
    def test_first_iteration_expands_one_child(self):
        engine = Gpn(TTT, GpnConfig(cpn=1.0), random.Random(0))
        engine.set_root(TTT.initial_state())
        engine.iteration()
        assert len(engine.root.children) == 1 and engine.root.visits == 1
        assert engine.root.pn == [1, 1] and engine.root.need_recalc

    def test_terminal_in_tree_skips_expansion(self):
        s = TTT.initial_state()
        for m in (0, 3, 1, 4, 2):
            s = TTT.apply(s, m)
        engine = Gpn(TTT, GpnConfig(sb=False), random.Random(0))
        engine.set_root(s)
        engine.run(SearchBudget(iterations=3))
        assert engine.root.visits == 3 and not engine.root.children
        assert engine.root.score_sums == [3.0, 0.0]

    @pytest.mark.slow
    def test_ten_thousand_iterations_reproducible(self):
        sigs = []
        for _ in range(2):
            trace, engine = selection_trace("tictactoe", GpnConfig(cpn=1.0, sb=False), 10_000, 42)
            sigs.append((tree_signature(engine.root), trace))
        assert sigs[0] == sigs[1]

    def test_cpn_zero_builds_the_mcts_tree(self):
        for seed in range(3):
            g = Gpn(TTT, GpnConfig(cpn=0.0), random.Random(seed))
            m = Mcts(TTT, MctsConfig(), random.Random(seed))
            for e in (g, m):
                e.set_root(TTT.initial_state())
                e.run(SearchBudget(iterations=300))
            assert tree_signature(g.root) == tree_signature(m.root)

    def test_lazy_and_eager_agree(self):
        for bias in BiasFormula:
            lazy, _ = selection_trace("connect4", GpnConfig(cpn=2.0, bias=bias), 800, 5)
            eager, _ = selection_trace("connect4", GpnConfig(cpn=2.0, bias=bias, eager=True), 800, 5)
            assert lazy == eager

    def test_bias_rows_fresh_and_tree_healthy(self):
        for bias in BiasFormula:
            cfg = GpnConfig(cpn=1.0, bias=bias, mobility=True)
            _, engine = selection_trace("connect4", cfg, 1500, 1)
            assert tree_violations(engine.root, 2, True, bias) == []

    def test_invalid_config(self):
        with pytest.raises(ValueError):
            GpnConfig(cpn=-1)
        with pytest.raises(ValueError):
            GpnConfig(bias="median")


@pytest.mark.parametrize("mobility", [False, True])
def test_classic_correspondence_small(mobility):
    mismatches, done = correspondence_mismatches(expansions=300, seed=3, mobility=mobility)
    assert done == 300 and mismatches == []


@pytest.mark.parametrize("spec", ["tictactoe", "connect4:5x4x3", "knightthrough:4x1"])
def test_forced_win_claims_are_sound(spec):
    report = soundness_report(spec, range(6), 1500, optimistic_clause=False)
    assert report["pn0"] == [] and report["pninf_paranoid"] == []
    assert report["bounds"] == [] and report["tree"] == []
