"""Small named graphs and random instance generators used by tests and the CLI."""

from __future__ import annotations

import random
from typing import Sequence

from .domset import minimalize_dominating_set
from .graph import Graph, connected_components, largest_component


def _named(names: Sequence[str], edges: Sequence[tuple[str, str]]) -> Graph:
    idx = {x: i for i, x in enumerate(names)}
    return Graph.from_edges(len(names), [(idx[a], idx[b]) for a, b in edges], names)


FIG1_EDGES = [
    ("x1", "x2"), ("x1", "x3"), ("x2", "x3"), ("x2", "x4"),
    ("x3", "x4"), ("x4", "x5"), ("x4", "x6"),
]


def fig1_graph() -> Graph:
    """Six vertices ``x1..x6``: triangle x1x2x3, x4 adjacent to x2, x3, x5, x6."""
    return _named([f"x{i}" for i in range(1, 7)], FIG1_EDGES)


def clique_pendant_gadget(ell: int) -> Graph:
    """Clique ``k1..k_ell`` fully joined to ``v`` and ``u``; ``u`` has ``ell`` leaves ``y*``.

    ``{v, u}`` dominates it with two vertices, but ``v`` plus the leaves is
    less congested.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    names = ["v", "u", *(f"k{i}" for i in range(1, ell + 1)), *(f"y{i}" for i in range(1, ell + 1))]
    edges = []
    for i in range(1, ell + 1):
        edges += [("v", f"k{i}"), ("u", f"k{i}"), ("u", f"y{i}")]
        edges += [(f"k{i}", f"k{j}") for j in range(i + 1, ell + 1)]
    return _named(names, edges)


def biclique_leaf_gadget(k: int) -> Graph:
    """Complete bipartite ``a1..ak`` x ``b1..bk``, one pendant leaf ``l<x>`` per vertex.

    The ``2k`` leaves form a perfect code.
    """
    if k < 1:
        raise ValueError("k must be positive")
    side_a = [f"a{i}" for i in range(1, k + 1)]
    side_b = [f"b{i}" for i in range(1, k + 1)]
    core = side_a + side_b
    names = core + [f"l{x}" for x in core]
    edges = [(a, b) for a in side_a for b in side_b] + [(x, f"l{x}") for x in core]
    return _named(names, edges)


FIG3_EDGES = [
    ("a", "b"), ("d", "e"), ("e", "f"), ("d", "f"), ("h", "i"), ("i", "j"),
    ("j", "k"), ("m", "n"), ("a", "d"), ("a", "e"), ("b", "e"), ("b", "f"),
    ("c", "f"), ("c", "g"), ("d", "h"), ("e", "i"), ("f", "j"), ("f", "k"),
    ("h", "l"), ("i", "l"), ("i", "m"), ("i", "k"), ("j", "m"), ("j", "n"),
    ("k", "m"), ("k", "n"), ("l", "o"), ("n", "o"),
]
FIG3_LANDMARKS = ("a", "b", "c")


def fig3_graph() -> Graph:
    """Fifteen vertices ``a..o`` with landmarks ``a, b, c``."""
    return _named([chr(ord("a") + i) for i in range(15)], FIG3_EDGES)


def exact_cover_gadget(q: int, sets: Sequence[Sequence[int]]) -> tuple[Graph, list[int]]:
    """Partition instance that splits into equal pieces of 5 iff ``sets`` has an exact cover.

    ``sets`` are 3-subsets of ``range(3q)``. Landmarks ``u1..u_n`` (one per
    set) form a biclique with the set vertices ``C*``, each set vertex is
    adjacent to its elements ``e*``, and landmarks ``u_{q+1}..u_n`` each
    carry three leaves.
    """
    nsets = len(sets)
    if nsets < q:
        raise ValueError("fewer sets than q never cover")
    land = [f"u{i}" for i in range(1, nsets + 1)]
    cs = [f"C{j}" for j in range(1, nsets + 1)]
    elems = [f"e{x}" for x in range(3 * q)]
    leaves = []
    edges = [(u, c) for u in land for c in cs]
    for j, s in enumerate(sets):
        if len(set(s)) != 3 or not all(0 <= x < 3 * q for x in s):
            raise ValueError(f"set {s!r} is not a 3-subset of range({3 * q})")
        edges += [(cs[j], elems[x]) for x in s]
    for i in range(q, nsets):
        for t in range(3):
            leaf = f"z{i + 1}_{t}"
            leaves.append(leaf)
            edges.append((land[i], leaf))
    g = _named(land + cs + elems + leaves, edges)
    return g, list(range(nsets))


def three_sat_gadget(
    num_vars: int, clauses: Sequence[Sequence[int]]
) -> tuple[Graph, list[int]]:
    """Two-landmark instance that splits into equal halves iff the formula is satisfiable.

    Clauses hold non-zero literals (``i`` or ``-i`` for variable ``i``).
    """
    n, m = num_vars, len(clauses)
    lit = {}
    names = ["u1", "u2"]
    for i in range(1, n + 1):
        lit[i], lit[-i] = f"x{i}", f"nx{i}"
        names += [f"x{i}", f"nx{i}"]
    ys = [f"y{i}" for i in range(1, n + 1)]
    phis = [f"c{j}" for j in range(1, m + 1)]
    names += ys + phis
    edges = [(u, lit[s * i]) for u in ("u1", "u2") for i in range(1, n + 1) for s in (1, -1)]
    for i in range(1, n + 1):
        edges += [(ys[i - 1], lit[i]), (ys[i - 1], lit[-i])]
    for j, cl in enumerate(clauses):
        for x in cl:
            if x == 0 or abs(x) > n:
                raise ValueError(f"bad literal {x}")
            edges.append((phis[j], lit[x]))
    for owner in ys + phis:
        for t in range(n - 1):
            leaf = f"{owner}_{t}"
            names.append(leaf)
            edges.append((owner, leaf))
    for t in range(n * (n + m)):
        leaf = f"w{t}"
        names.append(leaf)
        edges.append(("u2", leaf))
    return _named(names, edges), [0, 1]


def gnp(n: int, p: float, rng: random.Random) -> Graph:
    return Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    )


def random_connected(n: int, extra_p: float, rng: random.Random) -> Graph:
    """Random spanning tree (each vertex hooks onto an earlier one) plus G(n, p) noise."""
    edges = [(v, rng.randrange(v)) for v in range(1, n)]
    edges += [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < extra_p]
    return Graph.from_edges(n, edges)


def sparse_random(n: int, avg_degree: float, rng: random.Random) -> Graph:
    """Largest component of a G(n, m) graph with the given expected average degree."""
    m = int(round(avg_degree * n / 2))
    edges = set()
    while len(edges) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return largest_component(Graph.from_edges(n, sorted(edges)))


def random_landmarks(g: Graph, rng: random.Random, k: int | None = None) -> list[int]:
    """Random landmark set hitting every component."""
    picks = {rng.choice(c) for c in connected_components(g)}
    if k is None:
        k = rng.randint(1, max(1, g.n // 3))
    others = [v for v in range(g.n) if v not in picks]
    rng.shuffle(others)
    picks.update(others[: max(0, k - len(picks))])
    return sorted(picks)


def random_dominating_set(g: Graph, r: int, rng: random.Random) -> list[int]:
    """A random minimal r-dominating set (minimalize a random order of V)."""
    order = list(range(g.n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    # minimalize removes in ascending id, so relabel through the shuffled order
    relabeled = Graph.from_edges(g.n, [(pos[u], pos[v]) for u, v in g.edges()])
    kept = minimalize_dominating_set(relabeled, range(g.n), r)
    return sorted(order[i] for i in kept)

