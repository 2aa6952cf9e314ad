import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import graph_distances
from sparsedom.generators import random_connected, random_landmarks
from sparsedom.graph import Graph, grid_graph
from sparsedom.kernel import (
    LandmarkError,
    build_compact_kernel,
    build_kernel,
    contract_layered,
    layers,
)


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def labelled(g, vs):
    return {g.labels[v] for v in vs}


@st.composite
def instances(draw, max_n=30):
    n = draw(st.integers(1, max_n))
    rng = random.Random(draw(st.integers(0, 2**32)))
    g = random_connected(n, draw(st.floats(0, 0.3)), rng)
    return g, random_landmarks(g, rng)


def connected_in(adj_pairs, members):
    members = set(members)
    nbr = {v: set() for v in members}
    for v, w in adj_pairs:
        if v in members and w in members:
            nbr[v].add(w)
            nbr[w].add(v)
    start = next(iter(members))
    seen, stack = {start}, [start]
    while stack:
        for w in nbr[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == members


class TestBuildKernel:
    def test_path_one_landmark(self):
        k = build_kernel(path(3), [0])
        assert k.edges() == [(0, 1), (1, 2)]
        assert k.layer == [0, 1, 2]

    def test_equidistant_vertex(self):
        k = build_kernel(path(3), [0, 2])
        assert sorted(k.edges()) == [(0, 1), (2, 1)]
        assert k.in_nbrs[1] == (0, 2)

    def test_fig3_edges(self, fig3):
        g, lm = fig3
        k = build_kernel(g, lm)
        edges = {(g.labels[v], g.labels[w]) for v, w in k.edges()}
        for e in [("a", "d"), ("a", "e"), ("b", "e"), ("b", "f"), ("c", "f"), ("c", "g")]:
            assert e in edges
        assert ("d", "e") not in edges and ("e", "d") not in edges
        assert not k.out_nbrs[g.ids("g")[0]]

    def test_unreachable_vertex_named(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(LandmarkError, match="2"):
            build_kernel(g, [0])

    def test_empty_landmarks(self):
        with pytest.raises(LandmarkError):
            build_kernel(path(3), [])

    def test_dump_has_layers_header(self):
        text = build_kernel(path(3), [0]).dump()
        assert text.splitlines()[0] == "#layers"
        assert "0 1" in text.splitlines()

    @settings(max_examples=60, deadline=None)
    @given(instances())
    def test_edges_recomputed(self, inst):
        g, lm = inst
        k = build_kernel(g, lm)
        d = graph_distances(g)
        dl = [min(d[v][u] for u in lm) for v in range(g.n)]
        expected = {(v, w) for v in range(g.n) for w in g.adj[v] if dl[v] + 1 == dl[w]}
        assert set(k.edges()) == expected
        assert k.layer == dl
        for v in range(g.n):
            if v in lm:
                assert k.layer[v] == 0 and not k.in_nbrs[v]
            else:
                assert k.in_nbrs[v]


class TestLayers:
    def test_path(self):
        assert layers(build_kernel(path(3), [0])) == [[0], [1], [2]]

    def test_fig3(self, fig3):
        g, lm = fig3
        got = [labelled(g, layer) for layer in layers(build_kernel(g, lm))]
        assert got == [set("abc"), set("defg"), set("hijk"), set("lmn"), {"o"}]

    def test_all_landmarks(self):
        assert layers(build_kernel(path(4), range(4))) == [[0, 1, 2, 3]]


class TestCompactKernel:
    def test_path_single_bag(self):
        ck = build_compact_kernel(path(3), [0])
        assert ck.reps == [0] and ck.bags == {0: (0, 1, 2)}
        assert ck.edges() == []

    def test_equidistant_three_bags(self):
        ck = build_compact_kernel(path(3), [0, 2])
        assert ck.bags == {0: (0,), 2: (2,), 1: (1,)}

    def test_fig3_bags(self, fig3):
        g, lm = fig3
        ck = build_compact_kernel(g, lm)
        bags = {frozenset(labelled(g, m)) for m in ck.bags.values()}
        expected = ["adh", "cg", "ei", "fjkn", "b", "l", "m", "o"]
        assert bags == {frozenset(b) for b in expected}
        assert len(ck) == 8
        assert ck.dump_bags().splitlines()[0] == "a: a,d,h"

    @settings(max_examples=200, deadline=None)
    @given(instances())
    def test_properties(self, inst):
        g, lm = inst
        k = build_kernel(g, lm)
        ck = build_compact_kernel(g, lm)
        # every kernel edge joins consecutive layers
        assert all(k.layer[v] + 1 == k.layer[w] for v, w in k.edges())
        # bags partition V, with landmarks as representatives
        seen = sorted(x for m in ck.bags.values() for x in m)
        assert seen == list(range(g.n))
        for u in lm:
            assert ck.rep[u] == u
        for r, members in ck.bags.items():
            assert r in members
            assert k.layer[r] == min(k.layer[x] for x in members)
            assert connected_in(k.edges(), members)
        # in-degree never grows along G -> H -> H_c
        assert ck.max_in_degree() <= k.max_in_degree() <= max(g.max_degree(), 0)
        # non-landmark representatives keep at least two distinct in-bags
        for r in ck.multi_choice():
            assert len(ck.in_reps[r]) >= 2
        # idempotence: compacting the compacted DAG changes nothing
        again = contract_layered(ck.reps, ck.in_reps, ck.landmarks)
        assert all(again[r] == r for r in ck.reps)


@pytest.mark.slow
def test_builders_scale_linearly():
    def timed(side):
        g = grid_graph(side, side)
        lm = random_landmarks(g, random.Random(1), k=side)
        best = float("inf")
        for _ in range(3):
            t0 = time.perf_counter()
            build_compact_kernel(g, lm)
            best = min(best, time.perf_counter() - t0)
        return best

    small, large = timed(150), timed(212)
    assert large / small < 3.5
