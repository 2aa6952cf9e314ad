"""Congestion of vertex sets, greedy sparse r-dominating sets and exact oracles.

The congestion of ``S`` at ``v`` is ``|N^r[v] & S|``; averaged over all
vertices it equals ``sum(|N^r[u]| for u in S) / n``, which is how every
function here computes it.
"""

from __future__ import annotations

import heapq
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import RefusalError
from .graph import Graph, GraphError, ball, ball_sizes
from .lpformat import LinearModel

DEFAULT_BRUTE_LIMIT = 24
BRUTE_LIMIT_ENV = "SPARSEDOM_BRUTE_LIMIT"

STRATEGIES = ("degree", "ratio")
ALGORITHMS = {
    "degree": ("degree", "none"),
    "degree+": ("degree", "ratio"),
    "ratio": ("ratio", "none"),
    "ratio+": ("ratio", "degree"),
}


def brute_limit(default: int = DEFAULT_BRUTE_LIMIT) -> int:
    raw = os.environ.get(BRUTE_LIMIT_ENV)
    return int(raw) if raw else default


@dataclass(frozen=True)
class DominatorSet:
    radius: int
    members: tuple[int, ...]
    n: int
    congestion_total: int

    @property
    def size(self) -> int:
        return len(self.members)

    @property
    def avg_congestion(self) -> Fraction:
        return Fraction(self.congestion_total, self.n)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class GreedyConfig:
    strategy: str = "ratio"
    tiebreak: str = "degree"
    seed: int = 0

    def __post_init__(self):
        allowed = {"degree": ("none", "ratio"), "ratio": ("none", "degree")}
        if self.strategy not in allowed:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.tiebreak not in allowed[self.strategy]:
            raise ValueError(
                f"strategy {self.strategy!r} cannot use tiebreak {self.tiebreak!r}"
            )

    @classmethod
    def named(cls, name: str, seed: int = 0) -> "GreedyConfig":
        """One of ``degree``, ``degree+``, ``ratio``, ``ratio+``."""
        try:
            strategy, tiebreak = ALGORITHMS[name]
        except KeyError:
            raise ValueError(f"unknown greedy algorithm {name!r}") from None
        return cls(strategy, tiebreak, seed)

    @property
    def name(self) -> str:
        return self.strategy + ("" if self.tiebreak == "none" else "+")


def make_dominator_set(g: Graph, members: Iterable[int], r: int) -> DominatorSet:
    mem = tuple(sorted(set(members)))
    total = sum(len(ball(g, u, r)) for u in mem)
    return DominatorSet(r, mem, g.n, total)


def _check_radius(r: int) -> None:
    if r < 1:
        raise GraphError("radius must be >= 1")


def congestion_at(g: Graph, s: Iterable[int], r: int, v: int) -> int:
    _check_radius(r)
    s = set(s)
    return sum(1 for u in ball(g, v, r) if u in s)


def congestion_profile(g: Graph, s: Iterable[int], r: int) -> list[int]:
    """Congestion at every vertex, by scattering from the members of ``s``."""
    _check_radius(r)
    prof = [0] * g.n
    for u in set(s):
        for x in ball(g, u, r):
            prof[x] += 1
    return prof


def avg_congestion(g: Graph, s: Iterable[int], r: int) -> Fraction:
    _check_radius(r)
    if g.n == 0:
        raise GraphError("average congestion is undefined on an empty graph")
    return Fraction(sum(len(ball(g, u, r)) for u in set(s)), g.n)


def verify_r_domination(g: Graph, s: Iterable[int], r: int) -> tuple[bool, int | None]:
    """``(True, None)`` if ``N^r[s] = V``, else ``(False, w)`` with ``w`` undominated."""
    prof = congestion_profile(g, s, r)
    for v, c in enumerate(prof):
        if c == 0:
            return False, v
    return True, None


def perfect_code_violation(g: Graph, s: Iterable[int], r: int) -> int | None:
    """First vertex whose congestion differs from 1, or ``None``."""
    for v, c in enumerate(congestion_profile(g, s, r)):
        if c != 1:
            return v
    return None


def is_perfect_code(g: Graph, s: Iterable[int], r: int) -> bool:
    return perfect_code_violation(g, s, r) is None


def minimalize_dominating_set(g: Graph, s: Iterable[int], r: int) -> list[int]:
    """Drop members in ascending id order while the rest still dominates.

    Congestion never increases during the pass, so a member kept once can
    never become removable later and the result is minimal.
    """
    members = sorted(set(s))
    prof = congestion_profile(g, members, r)
    if 0 in prof:
        raise GraphError(f"set does not {r}-dominate vertex {g.labels[prof.index(0)]}")
    kept = []
    for v in members:
        b = ball(g, v, r)
        if all(prof[x] >= 2 for x in b):
            for x in b:
                prof[x] -= 1
        else:
            kept.append(v)
    return kept


def greedy_dominate(
    g: Graph,
    r: int,
    cfg: GreedyConfig,
    tie_rank: Sequence[int] | None = None,
) -> DominatorSet:
    """Greedy r-domination by undominated count (``degree``) or fraction (``ratio``).

    Candidates are kept in a max-heap with lazy invalidation. Once ``v`` is
    chosen, only vertices within ``2r`` of it can change key, and they are
    re-pushed. The ratio ``c/s`` is keyed as ``floor(c*P/s)`` with
    ``P = max(s)**2``. Distinct fractions with denominators up to ``max(s)``
    differ by at least ``1/P``, so this integer key orders and ties exactly.

    Remaining ties go to the vertex with the smallest ``tie_rank``. When
    ``tie_rank`` is omitted, it is a permutation drawn from ``cfg.seed``.
    """
    _check_radius(r)
    n = g.n
    if n == 0:
        return DominatorSet(r, (), 0, 0)
    if tie_rank is None:
        order = list(range(n))
        random.Random(cfg.seed).shuffle(order)
        rank = [0] * n
        for pos, v in enumerate(order):
            rank[v] = pos
    else:
        if len(tie_rank) != n:
            raise ValueError("tie_rank must have one entry per vertex")
        rank = list(tie_rank)

    size = ball_sizes(g, r)
    cnt = list(size)
    scale = max(size) ** 2
    strategy, tiebreak = cfg.strategy, cfg.tiebreak

    def entry(v: int) -> tuple[int, int, int, int, int]:
        c = cnt[v]
        frac = c * scale // size[v]
        if strategy == "degree":
            prim, sec = c, (frac if tiebreak == "ratio" else 0)
        else:
            prim, sec = frac, (c if tiebreak == "degree" else 0)
        return (-prim, -sec, rank[v], v, c)

    if r == 1:
        adj = g.adj

        def nbhd(v):
            return (v, *adj[v])
    else:
        def nbhd(v):
            return ball(g, v, r)

    heap = [entry(v) for v in range(n)]
    heapq.heapify(heap)
    dominated = [False] * n
    chosen = []
    remaining = n
    total = 0
    while remaining:
        *_, v, c = heapq.heappop(heap)
        if c != cnt[v]:
            continue
        chosen.append(v)
        total += size[v]
        touched = set()
        for x in nbhd(v):
            if dominated[x]:
                continue
            dominated[x] = True
            remaining -= 1
            for w in nbhd(x):
                cnt[w] -= 1
                touched.add(w)
        for w in touched:
            if cnt[w] > 0:
                heapq.heappush(heap, entry(w))
    return DominatorSet(r, tuple(sorted(chosen)), n, total)


def _ball_masks(g: Graph, r: int) -> list[int]:
    masks = []
    for v in range(g.n):
        m = 0
        for x in ball(g, v, r):
            m |= 1 << x
        masks.append(m)
    return masks


def _min_weight_domset(g: Graph, r: int, weights: list[int]) -> tuple[int, ...]:
    """Exact minimum of ``(weight, size, sorted members)`` over r-dominating sets.

    Branches on the lowest undominated vertex ``v``: the set contains some
    first member ``w`` of ``N^r[v]``, and the members before ``w`` are then
    excluded. All weights are positive, so the optimum is a minimal
    dominating set and this enumeration reaches it.
    """
    n = g.n
    masks = _ball_masks(g, r)
    covers = [sorted(ball(g, v, r)) for v in range(n)]
    full = (1 << n) - 1
    best: list = [None]

    def key(ws: int, members: list[int]):
        return (ws, len(members), tuple(sorted(members)))

    # admissible bounds: one member covers at most max|N^r| vertices, and
    # costs at least min(weight/|N^r|) per vertex it covers
    maxcov = max(bin(m).count("1") for m in masks)
    minw = min(weights)
    per_vertex = min(Fraction(weights[w], bin(masks[w]).count("1")) for w in range(n))

    def search(dom: int, forbidden: int, members: list[int], ws: int) -> None:
        if dom == full:
            k = key(ws, members)
            if best[0] is None or k < best[0]:
                best[0] = k
            return
        if best[0] is not None:
            missing = bin(full & ~dom).count("1")
            bound = max(-(-missing // maxcov) * minw, missing * per_vertex)
            if ws + bound > best[0][0]:
                return
        low = full & ~dom
        v = (low & -low).bit_length() - 1
        opts = [w for w in covers[v] if not (forbidden >> w) & 1]
        for w in opts:
            members.append(w)
            search(dom | masks[w], forbidden, members, ws + weights[w])
            members.pop()
            forbidden |= 1 << w

    search(0, 0, [], 0)
    return best[0][2]


def _check_limit(g: Graph, what: str, limit: int | None) -> None:
    lim = brute_limit() if limit is None else limit
    if g.n > lim:
        raise RefusalError(what, g.n, lim)


def brute_force_mds(g: Graph, r: int, limit: int | None = None) -> DominatorSet:
    """Minimum-size r-dominating set, lexicographically smallest among ties."""
    _check_radius(r)
    _check_limit(g, "brute_force_mds", limit)
    if g.n == 0:
        return DominatorSet(r, (), 0, 0)
    members = _min_weight_domset(g, r, [1] * g.n)
    return make_dominator_set(g, members, r)


def brute_force_mcds(g: Graph, r: int, limit: int | None = None) -> DominatorSet:
    """r-dominating set of minimum average congestion.

    Ties prefer fewer members, then the lexicographically smaller sorted
    member list.
    """
    _check_radius(r)
    _check_limit(g, "brute_force_mcds", limit)
    if g.n == 0:
        return DominatorSet(r, (), 0, 0)
    members = _min_weight_domset(g, r, ball_sizes(g, r))
    return make_dominator_set(g, members, r)


def export_ilp(g: Graph, r: int, objective: str = "size") -> str:
    """LP-format model for minimum-size or minimum-congestion r-domination."""
    _check_radius(r)
    if objective not in ("size", "congestion"):
        raise ValueError(f"unknown objective {objective!r}")
    sizes = ball_sizes(g, r) if objective == "congestion" else [1] * g.n
    title = "minimum r-dominating set" if objective == "size" else "minimum average r-congestion"
    model = LinearModel(f"{title}, r={r}, n={g.n}")
    var = [f"x_{v}" for v in range(g.n)]
    for v in range(g.n):
        model.comment(f"{var[v]} = {g.labels[v]}")
    model.linear_objective([(sizes[v], var[v]) for v in range(g.n)])
    for v in range(g.n):
        terms = [(1, var[w]) for w in sorted(ball(g, v, r))]
        model.constraint(f"dom_{v}", terms, ">=", 1)
    model.binaries(var)
    return model.render()
