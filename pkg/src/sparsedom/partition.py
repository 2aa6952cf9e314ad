"""Balanced neighborhood partitioning around a landmark set.

Every vertex joins the piece of one landmark so that, inside its piece, it
keeps its distance to the nearest landmark. Balance means a small population
variance of piece sizes. The mean is fixed at ``n / |L|``, so minimizing the
variance is the same as minimizing the sum of squared piece sizes, and all
algorithms here optimize that integer.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import RefusalError
from .flow import SbapInstance, solve_sbap
from .graph import Graph, multi_source_bfs
from .kernel import CompactKernel, build_compact_kernel, build_kernel, layers
from .lpformat import LinearModel

UNASSIGNED = -1
DEFAULT_BRANCH_BUDGET = 10_000_000
DEFAULT_BRUTE_BAGS = 12
DEFAULT_BRUTE_PRODUCT = 10_000_000


@dataclass(frozen=True, eq=False)
class Partition:
    """``assignment[v]`` is the landmark whose piece holds ``v``."""

    landmarks: tuple[int, ...]
    assignment: tuple[int, ...]

    def sizes(self) -> list[int]:
        count = {u: 0 for u in self.landmarks}
        for a in self.assignment:
            if a in count:
                count[a] += 1
        return [count[u] for u in self.landmarks]

    def pieces(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {u: [] for u in self.landmarks}
        for v, a in enumerate(self.assignment):
            if a in out:
                out[a].append(v)
        return out

    def stats(self) -> "PieceStats":
        return piece_stats(self.sizes())

    @property
    def square_sum(self) -> int:
        return sum(s * s for s in self.sizes())


@dataclass(frozen=True)
class PieceStats:
    sizes: tuple[int, ...]
    mean: Fraction
    variance: Fraction
    square_sum: int
    stddev: float
    cv: float

    def to_json(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "num_pieces": len(self.sizes),
            "mean": _rational(self.mean),
            "variance": _rational(self.variance),
            "variance_num": self.variance.numerator,
            "variance_den": self.variance.denominator,
            "square_sum": self.square_sum,
            "stddev": self.stddev,
            "cv": self.cv,
        }


def _rational(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "approx": float(x)}


def piece_stats(sizes: Iterable[int] | Partition) -> PieceStats:
    """Population variance and related statistics of piece sizes."""
    if isinstance(sizes, Partition):
        sizes = sizes.sizes()
    sizes = tuple(sizes)
    k = len(sizes)
    if k == 0:
        raise ValueError("no pieces")
    total = sum(sizes)
    ss = sum(s * s for s in sizes)
    mean = Fraction(total, k)
    var = Fraction(ss, k) - mean * mean
    std = math.sqrt(var)
    return PieceStats(sizes, mean, var, ss, std, std / float(mean) if total else 0.0)


@dataclass(frozen=True)
class Violation:
    kind: str
    vertex: int | None
    detail: str = ""

    def to_json(self, g: Graph | None = None) -> dict:
        v = self.vertex
        label = g.labels[v] if g is not None and v is not None else v
        return {"kind": self.kind, "vertex": label, "detail": self.detail}


def verify_partition(
    g: Graph, landmarks: Iterable[int], p: Partition | Sequence[int]
) -> tuple[bool, Violation | None]:
    """Check totality, one landmark per piece and preserved landmark distances.

    Within each piece a BFS from its landmark must reach every member at its
    distance to the nearest landmark in the whole graph; an unreachable
    member means the piece is disconnected.
    """
    lm = sorted(set(landmarks))
    assign = list(p.assignment if isinstance(p, Partition) else p)
    lmset = set(lm)
    if len(assign) < g.n:
        return False, Violation("totality", len(assign), "assignment is missing vertices")
    if len(assign) > g.n:
        return False, Violation("totality", None, "assignment has extra entries")
    for v, a in enumerate(assign):
        if a == UNASSIGNED or a is None:
            return False, Violation("totality", v, "vertex is unassigned")
        if a not in lmset:
            return False, Violation("unknown-landmark", v, f"assigned to non-landmark {a}")
    for u in lm:
        if assign[u] != u:
            return False, Violation("two-landmarks", u, f"landmark sits in the piece of {assign[u]}")

    dist = multi_source_bfs(g, lm).dist
    inner = [-1] * g.n
    adj = g.adj
    for u in lm:
        inner[u] = 0
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if inner[w] == -1 and assign[w] == u:
                    inner[w] = inner[x] + 1
                    queue.append(w)
    for v in range(g.n):
        if inner[v] == -1:
            return False, Violation("disconnected", v, "not connected to its landmark inside the piece")
        if inner[v] != dist[v]:
            return False, Violation(
                "distance", v, f"distance {inner[v]} inside piece, {dist[v]} in graph"
            )
    return True, None


def piece_radius(g: Graph, p: Partition) -> int:
    """Largest distance from a landmark to a member, measured inside the piece."""
    radius = 0
    adj = g.adj
    for u, members in p.pieces().items():
        inside = set(members)
        seen = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for w in adj[x]:
                if w in inside and w not in seen:
                    seen[w] = seen[x] + 1
                    queue.append(w)
        if len(seen) != len(inside):
            return math.inf  # type: ignore[return-value]
        radius = max(radius, max(seen.values()))
    return radius


def _expand(ck: CompactKernel, rep_choice: dict[int, int]) -> Partition:
    assign = tuple(rep_choice[r] for r in ck.rep)
    return Partition(ck.landmarks, assign)


def prt_weight(
    g: Graph, landmarks: Iterable[int], seed: int = 0, ck: CompactKernel | None = None
) -> Partition:
    """Linear-time greedy: each bag joins the smallest viable piece.

    Bags are visited in kernel order, so the pieces of all in-neighbor bags
    are known. Ties between equally small pieces are drawn from ``seed``.
    """
    if ck is None:
        ck = build_compact_kernel(g, landmarks)
    rng = random.Random(seed)
    lm = set(ck.landmarks)
    size = {u: len(ck.bags[u]) for u in ck.landmarks}
    choice: dict[int, int] = {u: u for u in ck.landmarks}
    for v in ck.reps:
        if v in lm:
            continue
        cands = sorted({choice[w] for w in ck.in_reps[v]})
        smallest = min(size[c] for c in cands)
        tied = [c for c in cands if size[c] == smallest]
        c = tied[0] if len(tied) == 1 else rng.choice(tied)
        choice[v] = c
        size[c] += len(ck.bags[v])
    return _expand(ck, choice)


def prt_layer(g: Graph, landmarks: Iterable[int]) -> Partition:
    """Layer-by-layer optimal assignment by min-cost flow.

    Layer ``i`` is a balanced assignment instance: its vertices are tasks,
    the landmarks are agents, and the pieces grown so far enter as base
    loads. A vertex may join the piece of any of its kernel in-neighbors.
    The result is exactly optimal when every vertex is within distance one
    of the landmarks.
    """
    k = build_kernel(g, landmarks)
    lm = k.landmarks
    assign = [UNASSIGNED] * g.n
    for u in lm:
        assign[u] = u
    load = {u: 1 for u in lm}
    for layer in layers(k)[1:]:
        pairs = {(assign[w], v) for v in layer for w in k.in_nbrs[v]}
        sol = solve_sbap(SbapInstance(list(lm), layer, pairs, load))
        for v, u in sol.assignment.items():
            assign[v] = u
        load = sol.loads
    return Partition(lm, tuple(assign))


@dataclass(frozen=True)
class BranchResult:
    partition: Partition
    optimal: bool
    nodes: int

    @property
    def square_sum(self) -> int:
        return self.partition.square_sum


NodeHook = Callable[[dict, dict, Fraction], None]


def prt_branch(
    g: Graph,
    landmarks: Iterable[int],
    budget: int | None = DEFAULT_BRANCH_BUDGET,
    seed: int = 0,
    on_node: NodeHook | None = None,
) -> BranchResult:
    """Branch and bound over bag assignments of the compact kernel.

    Bags are fixed in order of (layer, descending size, id); a bag whose
    in-neighbors all sit in one piece is forced. The incumbent starts from
    ``prt_weight``. A partial solution with square sum ``q`` and ``m``
    unassigned vertices is cut when ``q + m**2 / |L|`` reaches the
    incumbent. Once only singleton bags of a single layer remain, they are
    finished by one min-cost flow.

    ``optimal`` is False when more than ``budget`` nodes would be needed; the
    best partition found so far is returned. ``on_node`` sees the partial
    bag assignment, the piece sizes and the bound of every node expanded.
    """
    ck = build_compact_kernel(g, landmarks)
    lm = list(ck.landmarks)
    nl = len(lm)
    n = g.n
    bag = {v: len(ck.bags[v]) for v in ck.reps}
    layer = ck.layer
    lmset = set(lm)
    order = sorted(
        (v for v in ck.reps if v not in lmset), key=lambda v: (layer[v], -bag[v], v)
    )
    K = len(order)
    base_from = [False] * (K + 1)
    for i in range(K - 1, -1, -1):
        v = order[i]
        if bag[v] != 1:
            break
        if i < K - 1 and layer[order[i + 1]] != layer[v]:
            break
        base_from[i] = True

    incumbent = prt_weight(g, lm, seed=seed, ck=ck)
    best_ss = incumbent.square_sum
    best_choice: dict[int, int] | None = None

    choice: dict[int, int] = {u: u for u in lm}
    size = {u: bag[u] for u in lm}
    ss = sum(s * s for s in size.values())
    assigned = sum(size.values())
    nodes = 0
    complete = True
    in_reps = ck.in_reps

    def candidates(v: int) -> list[int]:
        return sorted({choice[w] for w in in_reps[v]}, key=lambda c: (size[c], c))

    frames: list[list] = []  # [position, candidates, next index]
    i = 0
    entering = True
    while True:
        if entering:
            nodes += 1
            if budget is not None and nodes > budget:
                complete = False
                break
            rem = n - assigned
            bound = Fraction(ss) + Fraction(rem * rem, nl)
            if on_node is not None:
                on_node(dict(choice), dict(size), bound)
            if nl * ss + rem * rem < nl * best_ss:
                if i == K:
                    best_ss = ss
                    best_choice = dict(choice)
                elif base_from[i]:
                    tasks = order[i:]
                    pairs = {(choice[w], v) for v in tasks for w in in_reps[v]}
                    sol = solve_sbap(SbapInstance(lm, tasks, pairs, size))
                    if sol.square_sum < best_ss:
                        best_ss = sol.square_sum
                        best_choice = dict(choice)
                        best_choice.update(sol.assignment)
                else:
                    frames.append([i, candidates(order[i]), 0])
        entering = False
        # advance to the next unexplored child, undoing the previous one
        while frames:
            f = frames[-1]
            pos, cands, nxt = f
            v = order[pos]
            s = bag[v]
            if nxt > 0:
                c = choice.pop(v)
                size[c] -= s
                ss -= 2 * size[c] * s + s * s
                assigned -= s
            if nxt < len(cands):
                c = cands[nxt]
                f[2] = nxt + 1
                ss += 2 * size[c] * s + s * s
                size[c] += s
                assigned += s
                choice[v] = c
                i = pos + 1
                entering = True
                break
            frames.pop()
        if not entering:
            break

    if best_choice is None:
        part = incumbent
    else:
        part = _expand(ck, best_choice)
    return BranchResult(part, complete, nodes)


def brute_force_bnp(
    g: Graph,
    landmarks: Iterable[int],
    max_bags: int = DEFAULT_BRUTE_BAGS,
    max_product: int = DEFAULT_BRUTE_PRODUCT,
) -> Partition:
    """Exhaustive search over every valid bag assignment.

    Multi-choice bags are decided in kernel order, each over the pieces of
    its in-neighbors in ascending landmark id. The first partition with the
    minimum square sum wins, which is the lexicographically smallest vector
    of bag choices.
    """
    ck = build_compact_kernel(g, landmarks)
    multi = ck.multi_choice()
    if len(multi) > max_bags:
        raise RefusalError("brute_force_bnp bags", len(multi), max_bags)
    product = 1
    for v in multi:
        product *= len(ck.in_reps[v])
    if product > max_product:
        raise RefusalError("brute_force_bnp assignments", product, max_product)

    choice = {u: u for u in ck.landmarks}
    size = {u: len(ck.bags[u]) for u in ck.landmarks}
    best: list = [None, None]

    def rec(i: int) -> None:
        if i == len(multi):
            ss = sum(s * s for s in size.values())
            if best[0] is None or ss < best[0]:
                best[0], best[1] = ss, dict(choice)
            return
        v = multi[i]
        s = len(ck.bags[v])
        for c in sorted({choice[w] for w in ck.in_reps[v]}):
            choice[v] = c
            size[c] += s
            rec(i + 1)
            size[c] -= s
        del choice[v]

    rec(0)
    return _expand(ck, best[1])


def equidistant_count(ck: CompactKernel) -> int:
    """Number of multi-choice bags, the parameter bounding branch-and-bound."""
    return len(ck.multi_choice())


def export_qp(g: Graph, landmarks: Iterable[int]) -> str:
    """LP-format quadratic model over compact-kernel bags.

    ``x_u_v`` puts bag ``v`` into the piece of landmark ``u``. The objective
    is the sum over landmarks of the squared piece size. Each bag is in
    exactly one piece, each landmark bag in its own, and a non-landmark bag
    may join piece ``u`` only if one of its in-neighbor bags does.
    """
    ck = build_compact_kernel(g, landmarks)
    lm = list(ck.landmarks)
    lab = g.labels
    model = LinearModel(f"balanced neighborhood partitioning, n={g.n}, pieces={len(lm)}, bags={len(ck)}")

    def x(u: int, v: int) -> str:
        return f"x_{u}_{v}"

    for v in ck.reps:
        model.comment(f"bag {v} ({len(ck.bags[v])}): {' '.join(lab[m] for m in ck.bags[v])}")
    quad = []
    for u in lm:
        for i, v in enumerate(ck.reps):
            sv = len(ck.bags[v])
            quad.append((sv * sv, x(u, v), x(u, v)))
            for w in ck.reps[i + 1:]:
                quad.append((2 * sv * len(ck.bags[w]), x(u, v), x(u, w)))
    model.quadratic_objective(quad)
    for v in ck.reps:
        model.constraint(f"assign_{v}", [(1, x(u, v)) for u in lm], "=", 1)
    for u in lm:
        model.constraint(f"own_{u}", [(1, x(u, u))], "=", 1)
    lmset = set(lm)
    for u in lm:
        for v in ck.reps:
            if v in lmset:
                continue
            terms = [(1, x(u, w)) for w in ck.in_reps[v]] + [(-1, x(u, v))]
            model.constraint(f"support_{u}_{v}", terms, ">=", 0)
    model.binaries(x(u, v) for u in lm for v in ck.reps)
    return model.render()
