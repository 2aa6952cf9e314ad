"""Reading and writing vertex-set, partition and report files."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable

from .graph import COMMENT_PREFIXES, Graph, load_edge_list
from .partition import UNASSIGNED, Partition


class LabelError(ValueError):
    """A file names a vertex that is not in the graph."""


@dataclass(frozen=True)
class LoadedGraph:
    graph: Graph
    path: str
    sha256: str

    def fingerprint(self) -> dict:
        g = self.graph
        return {"path": self.path, "n": g.n, "m": g.m, "sha256": self.sha256}


def read_graph(path: str | Path) -> LoadedGraph:
    data = Path(path).read_bytes()
    return LoadedGraph(load_edge_list(data), str(path), hashlib.sha256(data).hexdigest())


def _tokens(path: str | Path) -> Iterable[tuple[int, list[str]]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            s = line.strip()
            if s and not s.startswith(COMMENT_PREFIXES):
                yield lineno, s.split()


def read_vertex_set(g: Graph, path: str | Path) -> list[int]:
    """One label per line."""
    index = g.index_of()
    out = []
    for lineno, toks in _tokens(path):
        if len(toks) != 1:
            raise ValueError(f"{path}:{lineno}: expected one vertex label")
        if toks[0] not in index:
            raise LabelError(f"{path}:{lineno}: vertex {toks[0]!r} is not in the graph")
        out.append(index[toks[0]])
    return sorted(set(out))


def write_vertex_set(g: Graph, members: Iterable[int], path: str | Path) -> None:
    Path(path).write_text("".join(f"{g.labels[v]}\n" for v in members), encoding="utf-8")


def read_partition(
    g: Graph, path: str | Path, landmarks: Iterable[int] | None = None
) -> Partition:
    """Lines ``vertex landmark``; missing vertices stay unassigned.

    Without explicit landmarks, every label used in the second column is a
    landmark.
    """
    index = g.index_of()
    assign = [UNASSIGNED] * g.n
    seen_landmarks = set()
    for lineno, toks in _tokens(path):
        if len(toks) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'vertex landmark'")
        for t in toks:
            if t not in index:
                raise LabelError(f"{path}:{lineno}: vertex {t!r} is not in the graph")
        v, u = index[toks[0]], index[toks[1]]
        assign[v] = u
        seen_landmarks.add(u)
    lm = sorted(set(landmarks) if landmarks is not None else seen_landmarks)
    return Partition(tuple(lm), tuple(assign))


def write_partition(g: Graph, p: Partition, path: str | Path) -> None:
    lab = g.labels
    Path(path).write_text(
        "".join(f"{lab[v]} {lab[u]}\n" for v, u in enumerate(p.assignment) if u != UNASSIGNED),
        encoding="utf-8",
    )


def rational(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator, "approx": float(x)}


def write_json(obj, path: str | Path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
