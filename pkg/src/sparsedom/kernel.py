"""Neighborhood kernels: shortest-path DAGs from a landmark set and their bag contraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .graph import UNREACHABLE, Graph, GraphError, multi_source_bfs


class LandmarkError(GraphError):
    """Landmark set is empty, out of range, or leaves a vertex unreachable."""


@dataclass(frozen=True, eq=False)
class NeighborhoodKernel:
    """Edges ``(v, w)`` of the graph with ``layer[v] + 1 == layer[w]``.

    ``order`` lists vertices by ascending ``(layer, id)``.
    """

    graph: Graph
    landmarks: tuple[int, ...]
    layer: list[int]
    in_nbrs: list[tuple[int, ...]]
    out_nbrs: list[tuple[int, ...]]
    order: list[int]

    @property
    def n(self) -> int:
        return len(self.layer)

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in range(self.n) for w in self.out_nbrs[v]]

    def num_edges(self) -> int:
        return sum(len(o) for o in self.out_nbrs)

    def max_in_degree(self) -> int:
        return max((len(i) for i in self.in_nbrs), default=0)

    def layers(self) -> list[list[int]]:
        return layers(self)

    def dump(self) -> str:
        lab = self.graph.labels
        out = ["#layers"]
        out += [f"# {lab[v]} {self.layer[v]}" for v in self.order]
        out += [f"{lab[v]} {lab[w]}" for v in self.order for w in self.out_nbrs[v]]
        return "\n".join(out) + "\n"


@dataclass(frozen=True, eq=False)
class CompactKernel:
    """Kernel after contracting every vertex with a single in-neighbor bag.

    ``rep[v]`` is the representative of the bag holding ``v``; ``bags`` maps
    each representative to its members; ``reps`` lists representatives in
    kernel order, and ``in_reps``/``out_reps`` are the contracted arcs.
    """

    kernel: NeighborhoodKernel
    rep: list[int]
    bags: dict[int, tuple[int, ...]]
    reps: list[int]
    in_reps: dict[int, tuple[int, ...]]
    out_reps: dict[int, tuple[int, ...]]

    @property
    def landmarks(self) -> tuple[int, ...]:
        return self.kernel.landmarks

    @property
    def layer(self) -> list[int]:
        return self.kernel.layer

    def __len__(self) -> int:
        return len(self.reps)

    def bag_size(self, v: int) -> int:
        return len(self.bags[v])

    def multi_choice(self) -> list[int]:
        """Non-landmark representatives, i.e. bags with a real choice of landmark."""
        lm = set(self.landmarks)
        return [v for v in self.reps if v not in lm]

    def max_in_degree(self) -> int:
        return max((len(i) for i in self.in_reps.values()), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(v, w) for v in self.reps for w in self.out_reps[v]]

    def dump_bags(self) -> str:
        lab = self.kernel.graph.labels
        return "".join(
            f"{lab[v]}: {','.join(lab[x] for x in self.bags[v])}\n" for v in self.reps
        )


def _validate_landmarks(g: Graph, landmarks: Iterable[int]) -> tuple[int, ...]:
    lm = tuple(sorted(set(landmarks)))
    if not lm:
        raise LandmarkError("landmark set is empty")
    for u in lm:
        if not 0 <= u < g.n:
            raise LandmarkError(f"landmark {u} out of range for n={g.n}")
    return lm


def build_kernel(g: Graph, landmarks: Iterable[int]) -> NeighborhoodKernel:
    """One multi-source BFS plus one scan over the edges."""
    lm = _validate_landmarks(g, landmarks)
    layer = multi_source_bfs(g, lm).dist
    for v, d in enumerate(layer):
        if d == UNREACHABLE:
            raise LandmarkError(f"vertex {g.labels[v]} is unreachable from the landmarks")
    n = g.n
    ins: list[list[int]] = [[] for _ in range(n)]
    outs: list[list[int]] = [[] for _ in range(n)]
    for v, a in enumerate(g.adj):
        dv = layer[v] + 1
        for w in a:
            if layer[w] == dv:
                outs[v].append(w)
                ins[w].append(v)
    order = sorted(range(n), key=lambda v: (layer[v], v))
    return NeighborhoodKernel(
        g, lm, layer, [tuple(x) for x in ins], [tuple(x) for x in outs], order
    )


def contract_layered(
    order: Sequence[int],
    in_nbrs,
    landmarks: Iterable[int],
) -> dict[int, int]:
    """Representative map for a layered DAG.

    Walk ``order`` (ascending distance from the landmarks). Any non-landmark
    whose in-neighbors all lie in one bag joins that bag. In-neighbors sit in
    earlier layers, so their representatives are already final when read.
    """
    lm = set(landmarks)
    rep: dict[int, int] = {}
    for v in order:
        if v in lm:
            rep[v] = v
            continue
        preds = in_nbrs[v]
        first = rep[preds[0]]
        if all(rep[w] == first for w in preds):
            rep[v] = first
        else:
            rep[v] = v
    return rep


def compact(kernel: NeighborhoodKernel) -> CompactKernel:
    rep_map = contract_layered(kernel.order, kernel.in_nbrs, kernel.landmarks)
    rep = [rep_map[v] for v in range(kernel.n)]
    members: dict[int, list[int]] = {}
    for v in kernel.order:
        members.setdefault(rep[v], []).append(v)
    reps = [v for v in kernel.order if rep[v] == v]
    in_sets: dict[int, set[int]] = {v: set() for v in reps}
    out_sets: dict[int, set[int]] = {v: set() for v in reps}
    for v in range(kernel.n):
        rv = rep[v]
        for w in kernel.out_nbrs[v]:
            rw = rep[w]
            if rv != rw:
                out_sets[rv].add(rw)
                in_sets[rw].add(rv)
    pos = {v: i for i, v in enumerate(reps)}
    return CompactKernel(
        kernel,
        rep,
        {v: tuple(sorted(members[v])) for v in reps},
        reps,
        {v: tuple(sorted(in_sets[v], key=pos.__getitem__)) for v in reps},
        {v: tuple(sorted(out_sets[v], key=pos.__getitem__)) for v in reps},
    )


def build_compact_kernel(g: Graph, landmarks: Iterable[int]) -> CompactKernel:
    return compact(build_kernel(g, landmarks))


def layers(k: NeighborhoodKernel) -> list[list[int]]:
    """Distance classes ``V_0 = L, V_1, ...``; each sorted by id."""
    out: list[list[int]] = []
    for v in k.order:
        d = k.layer[v]
        while len(out) <= d:
            out.append([])
        out[d].append(v)
    return out
