"""Regenerate the graph fixtures and CLI golden files under tests/data.

Run from the repository root:

    python3 scripts/make_fixtures.py

Graphs are written by the package generators, never by hand. Golden files
are the CLI's own outputs with timing fields removed; regenerate them only
after an intentional change in behavior and review the diff.
"""

from __future__ import annotations

import contextlib
import io
import json
from pathlib import Path

from sparsedom.cli import main
from sparsedom.generators import (
    FIG3_LANDMARKS,
    biclique_leaf_gadget,
    clique_pendant_gadget,
    exact_cover_gadget,
    fig1_graph,
    fig3_graph,
    three_sat_gadget,
)
from sparsedom.graph import dump_edge_list

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "tests" / "data"
GOLDEN = DATA / "golden"

X3C_YES = (2, [[0, 1, 3], [2, 4, 5], [1, 2, 4]])
SAT_YES = (2, [[1, 2], [-1, 2]])

# (golden name, argv with {data} placeholders, output file or None)
GOLDEN_RUNS = [
    ("fig1-ratio+", ["domset", "--algo", "ratio+", "{data}/fig1-left.txt", "-o", "{out}"], "dom"),
    ("fig1-brute-mcds", ["domset", "--algo", "brute-mcds", "{data}/fig1-left.txt", "-o", "{out}"], "dom"),
    ("fig1-mac", ["export", "--model", "mac", "{data}/fig1-left.txt", "-o", "{out}"], "lp"),
    ("fig1-stats", ["stats", "{data}/fig1-left.txt"], None),
    (
        "fig3-branch",
        ["partition", "--algo", "branch", "--landmarks", "{data}/fig3-landmarks.txt",
         "{data}/fig3.txt", "-o", "{out}"],
        "part",
    ),
    (
        "fig3-weight-s3",
        ["partition", "--algo", "weight", "--seed", "3", "--landmarks",
         "{data}/fig3-landmarks.txt", "{data}/fig3.txt", "-o", "{out}"],
        "part",
    ),
    (
        "fig3-qp",
        ["export", "--model", "bnp-qp", "--landmarks", "{data}/fig3-landmarks.txt",
         "{data}/fig3.txt", "-o", "{out}"],
        "lp",
    ),
]

TIMING_KEYS = {"runtime_ms", "wall_ms"}


def strip_volatile(obj):
    """Drop timings and file paths so reports compare across machines."""
    if isinstance(obj, dict):
        return {
            k: strip_volatile(v)
            for k, v in obj.items()
            if k not in TIMING_KEYS and k not in ("path", "graph_path", "config")
        }
    if isinstance(obj, list):
        return [strip_volatile(x) for x in obj]
    return obj


def run_cli(argv: list[str]) -> tuple[int, dict]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
        code = main(argv)
    return code, json.loads(buf.getvalue())


def expand(argv: list[str], data: Path, out: Path | None) -> list[str]:
    return [a.format(data=data, out=out) for a in argv]


def write_graphs(data: Path) -> None:
    data.mkdir(parents=True, exist_ok=True)
    (data / "fig1-left.txt").write_text(dump_edge_list(fig1_graph()))
    for ell in (3, 5, 8):
        (data / f"fig1-right-l{ell}.txt").write_text(dump_edge_list(clique_pendant_gadget(ell)))
    for k in (3, 4):
        (data / f"biclique-k{k}.txt").write_text(dump_edge_list(biclique_leaf_gadget(k)))
    (data / "fig3.txt").write_text(dump_edge_list(fig3_graph()))
    (data / "fig3-landmarks.txt").write_text("".join(f"{x}\n" for x in FIG3_LANDMARKS))
    for name, (g, lm) in {
        "x3c-yes": exact_cover_gadget(*X3C_YES),
        "sat-yes": three_sat_gadget(*SAT_YES),
    }.items():
        (data / f"{name}.txt").write_text(dump_edge_list(g))
        (data / f"{name}-landmarks.txt").write_text("".join(f"{g.labels[u]}\n" for u in lm))


def write_goldens(data: Path, golden: Path) -> None:
    golden.mkdir(parents=True, exist_ok=True)
    for name, argv, ext in GOLDEN_RUNS:
        out = golden / f"{name}.{ext}" if ext else None
        code, report = run_cli(expand(argv, data, out))
        if code != 0:
            raise SystemExit(f"{name}: exit {code}")
        (golden / f"{name}.report.json").write_text(
            json.dumps(strip_volatile(report), indent=2, sort_keys=True) + "\n"
        )
        sidecar = Path(f"{out}.json") if out else None
        if sidecar and sidecar.exists():
            sidecar.unlink()


if __name__ == "__main__":
    write_graphs(DATA)
    write_goldens(DATA, GOLDEN)
    print(f"fixtures written to {DATA}")
