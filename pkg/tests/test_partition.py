import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (
    graph_distances,
    kernel_vertex_enumeration,
    min_bnp_square_sum,
    naive_partition_valid,
)
from sparsedom.domset import GreedyConfig, greedy_dominate
from sparsedom.errors import RefusalError
from sparsedom.generators import (
    fig3_graph,
    random_connected,
    random_dominating_set,
    random_landmarks,
)
from sparsedom.graph import Graph
from sparsedom.kernel import build_compact_kernel
from sparsedom.partition import (
    UNASSIGNED,
    Partition,
    brute_force_bnp,
    equidistant_count,
    export_qp,
    piece_radius,
    piece_stats,
    prt_branch,
    prt_layer,
    prt_weight,
    verify_partition,
)

PARTITIONERS = {
    "weight": lambda g, lm: prt_weight(g, lm, seed=3),
    "layer": prt_layer,
    "branch": lambda g, lm: prt_branch(g, lm, budget=20_000).partition,
}


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@st.composite
def instances(draw, max_n=14, mode=None):
    n = draw(st.integers(1, max_n))
    rng = random.Random(draw(st.integers(0, 2**32)))
    g = random_connected(n, draw(st.floats(0, 0.35)), rng)
    mode = mode or draw(st.sampled_from(["any", "r1", "r2", "r3"]))
    if mode == "any":
        lm = random_landmarks(g, rng)
    else:
        lm = random_dominating_set(g, int(mode[1]), rng)
    return g, lm


class TestStats:
    def test_balanced(self):
        st_ = piece_stats([5, 5, 5])
        assert st_.variance == 0 and st_.square_sum == 75

    def test_path_sizes(self):
        st_ = piece_stats([2, 1])
        assert st_.variance == Fraction(1, 4) and st_.square_sum == 5

    def test_single_piece(self):
        assert piece_stats([7]).variance == 0

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=12))
    def test_square_sum_identity(self, sizes):
        s = piece_stats(sizes)
        k = len(sizes)
        assert s.variance * k + s.mean**2 * k == s.square_sum
        assert s.mean * k == sum(sizes)
        assert s.variance >= 0

    def test_json_fields(self):
        js = piece_stats([2, 1]).to_json()
        assert (js["variance_num"], js["variance_den"]) == (1, 4)
        assert js["num_pieces"] == 2


class TestVerify:
    def test_distance_violation(self):
        # vertex 1 is adjacent to landmark 0 but is put in the piece of 4
        g = path(5)
        ok, viol = verify_partition(g, [0, 4], [0, 0, 4, 4, 4])
        assert ok
        ok, viol = verify_partition(g, [0, 4], [0, 4, 4, 4, 4])
        assert not ok and viol.kind == "distance" and viol.vertex == 1

    def test_two_landmarks(self):
        ok, viol = verify_partition(path(3), [0, 2], [0, 0, 0])
        assert not ok and viol.kind == "two-landmarks"

    def test_totality(self):
        ok, viol = verify_partition(path(3), [0], [0, 0])
        assert not ok and viol.kind == "totality"
        ok, viol = verify_partition(path(3), [0], [0, UNASSIGNED, 0])
        assert not ok and viol.kind == "totality" and viol.vertex == 1

    def test_disconnected_piece(self):
        ok, viol = verify_partition(path(5), [0, 4], [0, 0, 4, 0, 4])
        assert not ok and viol.kind == "disconnected"

    def test_unknown_landmark(self):
        ok, viol = verify_partition(path(3), [0], [0, 1, 0])
        assert not ok and viol.kind == "unknown-landmark"

    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=10), st.data())
    def test_agrees_with_definition(self, inst, data):
        g, lm = inst
        assign = [data.draw(st.sampled_from(lm)) for _ in range(g.n)]
        assert verify_partition(g, lm, assign)[0] == naive_partition_valid(g, lm, assign)


class TestSmallCases:
    @pytest.mark.parametrize("name", sorted(PARTITIONERS))
    def test_path_equidistant(self, name):
        p = PARTITIONERS[name](path(3), [0, 2])
        assert sorted(p.sizes()) == [1, 2]
        assert p.stats().variance == Fraction(1, 4)
        assert p.square_sum == 5

    @pytest.mark.parametrize("name", sorted(PARTITIONERS))
    def test_star_single_piece(self, name):
        p = PARTITIONERS[name](star(4), [0])
        assert p.sizes() == [5] and p.stats().variance == 0

    def test_branch_path_optimal(self):
        res = prt_branch(path(3), [0, 2])
        assert res.optimal and res.square_sum == 5

    def test_brute_force_small(self):
        assert brute_force_bnp(path(3), [0, 2]).square_sum == 5
        assert brute_force_bnp(star(3), [0]).assignment == (0, 0, 0, 0)

    def test_brute_force_refusal(self):
        # twelve+ equidistant middles between two landmarks
        k = 13
        edges = [(0, 2 + i) for i in range(k)] + [(1, 2 + i) for i in range(k)]
        g = Graph.from_edges(k + 2, edges)
        with pytest.raises(RefusalError):
            brute_force_bnp(g, [0, 1])
        with pytest.raises(RefusalError):
            brute_force_bnp(g, [0, 1], max_bags=20, max_product=100)


class TestFig3:
    def test_oracle_value(self, fig3):
        g, lm = fig3
        # independent enumeration over per-vertex predecessor choices
        assert min_bnp_square_sum(g, lm) == 77

    def test_brute_force_matches_oracle(self, fig3):
        g, lm = fig3
        p = brute_force_bnp(g, lm)
        assert p.square_sum == min_bnp_square_sum(g, lm)
        assert verify_partition(g, lm, p)[0]

    def test_branch_is_optimal(self, fig3):
        g, lm = fig3
        res = prt_branch(g, lm)
        assert res.optimal
        assert res.square_sum == brute_force_bnp(g, lm).square_sum
        assert sorted(res.partition.sizes()) == [4, 5, 6]

    def test_c_piece_cannot_have_five(self, fig3):
        g, lm = fig3
        c = g.ids("c")[0]
        sizes = {a.count(c) for a in kernel_vertex_enumeration(g, lm)}
        assert 5 not in sizes

    def test_heuristics_valid_and_bounded(self, fig3):
        g, lm = fig3
        best = brute_force_bnp(g, lm).square_sum
        for name, fn in PARTITIONERS.items():
            p = fn(g, lm)
            assert verify_partition(g, lm, p)[0], name
            assert p.square_sum >= best
            assert p.square_sum >= 75

    def test_equidistant_count(self, fig3):
        g, lm = fig3
        assert equidistant_count(build_compact_kernel(g, lm)) == 5


class TestProperties:
    @settings(max_examples=150, deadline=None)
    @given(instances(max_n=30))
    def test_every_partitioner_is_valid(self, inst):
        g, lm = inst
        for name, fn in PARTITIONERS.items():
            p = fn(g, lm)
            ok, viol = verify_partition(g, lm, p)
            assert ok, (name, viol)
            assert sum(p.sizes()) == g.n

    @settings(max_examples=60, deadline=None)
    @given(instances(max_n=12))
    def test_verify_matches_naive_on_outputs(self, inst):
        g, lm = inst
        for fn in PARTITIONERS.values():
            assert naive_partition_valid(g, lm, fn(g, lm).assignment)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 40), st.integers(0, 2**32))
    def test_radius_bound(self, r, n, seed):
        rng = random.Random(seed)
        g = random_connected(n, rng.uniform(0, 0.2), rng)
        lm = greedy_dominate(g, r, GreedyConfig.named("ratio+", seed)).members
        for fn in PARTITIONERS.values():
            assert piece_radius(g, fn(g, lm)) <= r

    @settings(max_examples=100, deadline=None)
    @given(instances(max_n=14, mode="r1"))
    def test_layer_exact_at_radius_one(self, inst):
        g, lm = inst
        assert prt_layer(g, lm).square_sum == brute_force_bnp(g, lm).square_sum

    @settings(max_examples=100, deadline=None)
    @given(instances(max_n=14))
    def test_branch_matches_oracles(self, inst):
        g, lm = inst
        res = prt_branch(g, lm, budget=None)
        assert res.optimal
        want = min_bnp_square_sum(g, lm)
        assert brute_force_bnp(g, lm).square_sum == want
        assert res.square_sum == want
        assert res.square_sum <= prt_layer(g, lm).square_sum

    @settings(max_examples=60, deadline=None)
    @given(instances(max_n=14, mode="r1"))
    def test_branch_equals_layer_at_radius_one(self, inst):
        g, lm = inst
        assert prt_branch(g, lm).square_sum == prt_layer(g, lm).square_sum

    @settings(max_examples=50, deadline=None)
    @given(instances(max_n=12))
    def test_variance_and_square_sum_argmins_agree(self, inst):
        g, lm = inst
        found = {tuple(a) for a in kernel_vertex_enumeration(g, lm)}
        var = {a: piece_stats(Partition(tuple(lm), a)).variance for a in found}
        sq = {a: Partition(tuple(lm), a).square_sum for a in found}
        assert {a for a in found if var[a] == min(var.values())} == {
            a for a in found if sq[a] == min(sq.values())
        }

    @settings(max_examples=60, deadline=None)
    @given(instances(max_n=12))
    def test_branch_bound_is_sound(self, inst):
        g, lm = inst
        ck = build_compact_kernel(g, lm)
        seen = []
        prt_branch(g, lm, budget=None, on_node=lambda c, s, b: seen.append((c, b)))
        assert seen
        for choice, bound in seen:
            assert bound <= best_completion(ck, choice)

    def test_budget_exhaustion_is_flagged(self):
        rng = random.Random(4)
        g = random_connected(60, 0.05, rng)
        lm = random_landmarks(g, rng, k=4)
        res = prt_branch(g, lm, budget=1)
        assert not res.optimal
        assert verify_partition(g, lm, res.partition)[0]

    def test_branch_records_node_count(self, fig3):
        g, lm = fig3
        res = prt_branch(g, lm)
        assert res.nodes >= 1

    def test_weight_deterministic_per_seed(self):
        rng = random.Random(9)
        g = random_connected(200, 0.01, rng)
        lm = random_landmarks(g, rng, k=12)
        a = prt_weight(g, lm, seed=5).assignment
        assert a == prt_weight(g, lm, seed=5).assignment


def best_completion(ck, choice):
    """Smallest square sum over all completions of a partial bag assignment."""
    rest = [v for v in ck.reps if v not in choice]
    best = None
    choice = dict(choice)

    def rec(i):
        nonlocal best
        if i == len(rest):
            size = {u: 0 for u in ck.landmarks}
            for v, c in choice.items():
                size[c] += len(ck.bags[v])
            ss = sum(s * s for s in size.values())
            best = ss if best is None else min(best, ss)
            return
        v = rest[i]
        for c in sorted({choice[w] for w in ck.in_reps[v]}):
            choice[v] = c
            rec(i + 1)
        del choice[v]

    rec(0)
    return best


class TestExportQp:
    def test_path_structure(self):
        text = export_qp(path(3), [0, 2])
        binaries = text.split("Binary\n")[1].split("End")[0].split()
        assert len(binaries) == 6
        assert text.count(" assign_") == 3

    def test_fig3_binaries(self, fig3):
        g, lm = fig3
        text = export_qp(g, lm)
        binaries = text.split("Binary\n")[1].split("End")[0].split()
        assert len(binaries) == 3 * 8

    def test_single_landmark(self):
        text = export_qp(star(3), [0])
        assert " assign_0: x_0_0 = 1" in text
        assert len(text.split("Binary\n")[1].split("End")[0].split()) == 1

    def test_deterministic(self):
        g = fig3_graph()
        lm = g.ids("abc")
        assert export_qp(g, lm) == export_qp(g, lm)

    def test_objective_expands_squares(self):
        # objective (2 x_a + 1 x_b)^2 is written with doubled coefficients over 2
        text = export_qp(path(3), [0])
        assert "[" in text and "] / 2" in text


def test_kernel_enumeration_covers_all_valid_assignments():
    # on tiny graphs, the predecessor enumeration equals filtering every assignment
    rng = random.Random(2)
    for _ in range(30):
        g = random_connected(rng.randint(1, 7), 0.3, rng)
        lm = random_landmarks(g, rng)
        by_filter = {
            a for a in itertools.product(lm, repeat=g.n) if naive_partition_valid(g, lm, a)
        }
        assert by_filter == set(kernel_vertex_enumeration(g, lm))
        d = graph_distances(g)
        assert all(min(d[v][u] for u in lm) < float("inf") for v in range(g.n))
