"""Undirected simple graphs, BFS primitives and edge-list parsing."""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Iterator, Sequence, Union

#: Distance value for vertices not reachable from any source.
UNREACHABLE = -1

COMMENT_PREFIXES = ("#", "%")


class GraphError(ValueError):
    """Invalid argument to a graph operation."""


class EdgeListError(GraphError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: expected two vertex tokens, got {line!r}")
        self.lineno = lineno
        self.line = line


@dataclass(frozen=True)
class ParseReport:
    lines: int = 0
    edges: int = 0
    duplicate_edges: int = 0
    self_loops: int = 0


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is the sorted tuple of neighbors of ``v``; ``labels[v]`` is the
    external name used for input and output.
    """

    adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...]
    m: int
    report: ParseReport = field(default_factory=ParseReport, compare=False)

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self) -> int:
        return len(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ) -> "Graph":
        """Build a graph, silently dropping self-loops and repeated edges."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u != v:
                nbrs[u].add(v)
                nbrs[v].add(u)
        return cls.from_neighbor_sets(nbrs, labels)

    @classmethod
    def from_neighbor_sets(
        cls, nbrs: Sequence[Iterable[int]], labels: Sequence[str] | None = None
    ) -> "Graph":
        adj = tuple(tuple(sorted(s)) for s in nbrs)
        if labels is None:
            labels = [str(i) for i in range(len(adj))]
        elif len(labels) != len(adj):
            raise GraphError("label count does not match vertex count")
        m = sum(len(a) for a in adj) // 2
        return cls(adj, tuple(labels), m)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        # adjacency is sorted; short lists make a linear scan cheaper than bisect
        return v in a

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, a in enumerate(self.adj):
            for v in a:
                if u < v:
                    yield u, v

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(a) for a in self.adj), default=0)

    def avg_degree(self) -> Fraction:
        if not self.adj:
            return Fraction(0)
        return Fraction(2 * self.m, self.n)

    def index_of(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    def ids(self, labels: Iterable[str]) -> list[int]:
        """Translate external labels to vertex ids (``KeyError`` on unknown)."""
        index = self.index_of()
        out = []
        for lab in labels:
            if lab not in index:
                raise KeyError(lab)
            out.append(index[lab])
        return out

    def edge_set(self) -> set[tuple[int, int]]:
        return set(self.edges())

    def induced(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabeled to ``0..k-1`` in ascending id order."""
        keep = sorted(set(vertices))
        new_id = {v: i for i, v in enumerate(keep)}
        nbrs = [[new_id[w] for w in self.adj[v] if w in new_id] for v in keep]
        return Graph.from_neighbor_sets(nbrs, [self.labels[v] for v in keep])


Source = Union[str, bytes, IO[str], IO[bytes]]


def _text_lines(text: Source) -> Iterator[str]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    if isinstance(text, str):
        yield from io.StringIO(text)
        return
    for line in text:
        yield line.decode("utf-8") if isinstance(line, bytes) else line


def load_edge_list(text: Source) -> Graph:
    """Parse a whitespace-separated edge list.

    Vertex tokens are arbitrary strings, numbered in order of first
    appearance. Blank lines and lines starting with ``#`` or ``%`` are
    skipped. Self-loops and repeated edges are dropped and counted in
    ``graph.report``.

    >>> load_edge_list("0 1\\n1 2")
    Graph(n=3, m=2)
    """
    index: dict[str, int] = {}
    labels: list[str] = []
    nbrs: list[set[int]] = []
    lines = loops = dups = edges = 0

    def vid(tok: str) -> int:
        i = index.get(tok)
        if i is None:
            i = index[tok] = len(labels)
            labels.append(tok)
            nbrs.append(set())
        return i

    for lineno, line in enumerate(_text_lines(text), start=1):
        lines += 1
        s = line.strip()
        if not s or s.startswith(COMMENT_PREFIXES):
            continue
        toks = s.split()
        if len(toks) != 2:
            raise EdgeListError(lineno, line.rstrip("\n"))
        u, v = vid(toks[0]), vid(toks[1])
        edges += 1
        if u == v:
            loops += 1
        elif v in nbrs[u]:
            dups += 1
        else:
            nbrs[u].add(v)
            nbrs[v].add(u)

    g = Graph.from_neighbor_sets(nbrs, labels)
    report = ParseReport(lines=lines, edges=edges, duplicate_edges=dups, self_loops=loops)
    return Graph(g.adj, g.labels, g.m, report)


def dump_edge_list(g: Graph) -> str:
    """Serialize with original labels; isolated vertices are not representable."""
    lab = g.labels
    return "".join(f"{lab[u]} {lab[v]}\n" for u, v in g.edges())


@dataclass(frozen=True)
class DistanceField:
    sources: frozenset[int]
    dist: list[int]

    def __getitem__(self, v: int) -> int:
        return self.dist[v]

    def __len__(self) -> int:
        return len(self.dist)

    def reachable(self, v: int) -> bool:
        return self.dist[v] != UNREACHABLE

    def max_distance(self) -> int:
        return max(self.dist, default=0)

    def to_json(self) -> list[int | None]:
        return [None if d == UNREACHABLE else d for d in self.dist]


def multi_source_bfs(g: Graph, sources: Iterable[int]) -> DistanceField:
    """Hop distance from every vertex to its nearest source."""
    src = frozenset(sources)
    if not src:
        raise GraphError("multi_source_bfs needs at least one source")
    n = g.n
    for s in src:
        if not 0 <= s < n:
            raise GraphError(f"source {s} out of range for n={n}")
    dist = [UNREACHABLE] * n
    queue = deque(sorted(src))
    for s in queue:
        dist[s] = 0
    adj = g.adj
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for w in adj[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dv
                queue.append(w)
    return DistanceField(src, dist)


def r_neighborhood(g: Graph, v: int, r: int) -> set[int]:
    """``{u : d(v, u) <= r}`` by BFS truncated at depth ``r``."""
    if r < 0:
        raise GraphError("radius must be non-negative")
    if not 0 <= v < g.n:
        raise GraphError(f"vertex {v} out of range for n={g.n}")
    return set(ball(g, v, r))


def ball(g: Graph, v: int, r: int) -> list[int]:
    """Vertices within distance ``r`` of ``v``, in BFS discovery order."""
    adj = g.adj
    if r == 1:
        return [v, *adj[v]]
    seen = {v}
    out = [v]
    frontier = [v]
    for _ in range(r):
        nxt = []
        for x in frontier:
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        out.extend(nxt)
        frontier = nxt
    return out


def ball_sizes(g: Graph, r: int) -> list[int]:
    """``|N^r[v]|`` for every vertex."""
    if r == 1:
        return [len(a) + 1 for a in g.adj]
    return [len(ball(g, v, r)) for v in range(g.n)]


def graph_power(g: Graph, r: int) -> Graph:
    """The ``r``-th power: ``uv`` is an edge iff ``1 <= d(u, v) <= r``."""
    if r < 1:
        raise GraphError("graph power needs r >= 1")
    if r == 1:
        return g
    nbrs = []
    for v in range(g.n):
        b = ball(g, v, r)
        nbrs.append(b[1:])
    return Graph.from_neighbor_sets(nbrs, g.labels)


def connected_components(g: Graph) -> list[list[int]]:
    """Components as sorted vertex lists, ordered by their smallest vertex."""
    comp = [-1] * g.n
    out = []
    adj = g.adj
    for s in range(g.n):
        if comp[s] != -1:
            continue
        cid = len(out)
        comp[s] = cid
        members = [s]
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if comp[w] == -1:
                    comp[w] = cid
                    members.append(w)
                    queue.append(w)
        members.sort()
        out.append(members)
    return out


def largest_component(g: Graph) -> Graph:
    """Induced subgraph on the largest component.

    Equal-size components are resolved in favor of the one containing the
    smallest vertex id. Labels are carried over.
    """
    if g.n == 0:
        raise GraphError("graph has no vertices")
    comps = connected_components(g)
    best = max(comps, key=len)  # max() keeps the first of equal keys
    if len(best) == g.n:
        return g
    return g.induced(best)


def grid_graph(rows: int, cols: int) -> Graph:
    """``rows x cols`` grid; vertex ``i*cols + j`` sits at row ``i``, column ``j``."""
    nbrs: list[list[int]] = []
    for i in range(rows):
        for j in range(cols):
            v = i * cols + j
            a = []
            if i > 0:
                a.append(v - cols)
            if j > 0:
                a.append(v - 1)
            if j + 1 < cols:
                a.append(v + 1)
            if i + 1 < rows:
                a.append(v + cols)
            nbrs.append(a)
    adj = tuple(tuple(a) for a in nbrs)
    m = rows * (cols - 1) + cols * (rows - 1) if rows and cols else 0
    return Graph(adj, tuple(str(i) for i in range(rows * cols)), m)
