"""Command-line interface: ``sparsedom {domset,partition,verify,export,stats,generate}``.

Every command prints a JSON run report (input fingerprint, configuration,
results, wall-clock time). Exit codes: 0 success, 1 verification failure,
2 usage or input error, 3 refusal by an exact oracle's size limit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import domset as ds
from . import partition as pt
from .errors import RefusalError
from .fileio import (
    LabelError,
    LoadedGraph,
    rational,
    read_graph,
    read_partition,
    read_vertex_set,
    write_json,
    write_partition,
    write_vertex_set,
)
from .generators import (
    FIG3_LANDMARKS,
    biclique_leaf_gadget,
    clique_pendant_gadget,
    fig1_graph,
    fig3_graph,
    sparse_random,
)
from .graph import GraphError, Graph, connected_components, dump_edge_list, grid_graph, largest_component
from .kernel import build_compact_kernel

log = logging.getLogger("sparsedom")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3

DOMSET_ALGOS = ("degree", "degree+", "ratio", "ratio+", "brute-mds", "brute-mcds")
PARTITION_ALGOS = ("weight", "layer", "branch", "brute")
MODELS = ("mds", "mac", "bnp-qp")


class UsageError(Exception):
    pass


def _load(args) -> LoadedGraph:
    lg = read_graph(args.graph)
    if getattr(args, "lcc", False):
        lg = LoadedGraph(largest_component(lg.graph), lg.path, lg.sha256)
    return lg


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def cmd_domset(args) -> tuple[int, dict]:
    lg = _load(args)
    g = lg.graph
    t0 = time.perf_counter()
    if args.algo == "brute-mds":
        d = ds.brute_force_mds(g, args.radius, limit=args.limit)
    elif args.algo == "brute-mcds":
        d = ds.brute_force_mcds(g, args.radius, limit=args.limit)
    else:
        d = ds.greedy_dominate(g, args.radius, ds.GreedyConfig.named(args.algo, args.seed))
    runtime = _ms(t0)
    ok, _ = ds.verify_r_domination(g, d.members, args.radius)
    sidecar = {
        "algorithm": args.algo,
        "r": args.radius,
        "seed": args.seed,
        "size": d.size,
        "avg_congestion_num": d.congestion_total,
        "avg_congestion_den": d.n,
        "runtime_ms": runtime,
    }
    if args.output:
        write_vertex_set(g, d.members, args.output)
        write_json(sidecar, f"{args.output}.json")
    results = {
        "size": d.size,
        "avg_congestion": rational(d.avg_congestion),
        "avg_congestion_text": f"{d.congestion_total}/{d.n}",
        "dominating": ok,
        "runtime_ms": runtime,
    }
    if args.output is None:
        results["members"] = [g.labels[v] for v in d.members]
    return EXIT_OK, {"input": lg.fingerprint(), "results": results}


def _landmarks(g: Graph, path) -> list[int]:
    lm = read_vertex_set(g, path)
    if not lm:
        raise UsageError(f"{path}: no landmarks")
    return lm


def cmd_partition(args) -> tuple[int, dict]:
    lg = _load(args)
    g = lg.graph
    lm = _landmarks(g, args.landmarks)
    t0 = time.perf_counter()
    optimal: bool | None = None
    if args.algo == "weight":
        p = pt.prt_weight(g, lm, seed=args.seed)
    elif args.algo == "layer":
        p = pt.prt_layer(g, lm)
    elif args.algo == "branch":
        res = pt.prt_branch(g, lm, budget=args.budget, seed=args.seed)
        p, optimal = res.partition, res.optimal
    else:
        p = pt.brute_force_bnp(g, lm)
        optimal = True
    runtime = _ms(t0)
    st = p.stats()
    k = pt.equidistant_count(build_compact_kernel(g, lm))
    sidecar = {
        "algorithm": args.algo,
        "seed": args.seed,
        "num_pieces": len(st.sizes),
        "variance_num": st.variance.numerator,
        "variance_den": st.variance.denominator,
        "square_sum": st.square_sum,
        "stddev": st.stddev,
        "optimal_flag": optimal,
        "runtime_ms": runtime,
    }
    if args.output:
        write_partition(g, p, args.output)
        write_json(sidecar, f"{args.output}.json")
    results = {**st.to_json(), "k": k, "optimal_flag": optimal, "runtime_ms": runtime}
    return EXIT_OK, {"input": lg.fingerprint(), "results": results}


def cmd_verify(args) -> tuple[int, dict]:
    lg = _load(args)
    g = lg.graph
    if args.domset:
        s = read_vertex_set(g, args.domset)
        ok, witness = ds.verify_r_domination(g, s, args.radius)
        results = {"check": "r-domination", "ok": ok}
        if not ok:
            results["violation"] = {"kind": "undominated", "vertex": g.labels[witness]}
        elif args.perfect_code:
            bad = ds.perfect_code_violation(g, s, args.radius)
            results = {"check": "perfect-code", "ok": bad is None}
            if bad is not None:
                results["violation"] = {
                    "kind": "congestion",
                    "vertex": g.labels[bad],
                    "congestion": ds.congestion_at(g, s, args.radius, bad),
                }
    else:
        lm = _landmarks(g, args.landmarks) if args.landmarks else None
        p = read_partition(g, args.partition, lm)
        ok, viol = pt.verify_partition(g, p.landmarks, p)
        results = {"check": "partition", "ok": ok}
        if viol is not None:
            results["violation"] = viol.to_json(g)
    return (EXIT_OK if results["ok"] else EXIT_FAIL), {"input": lg.fingerprint(), "results": results}


def cmd_export(args) -> tuple[int, dict]:
    lg = _load(args)
    g = lg.graph
    if args.model == "bnp-qp":
        if not args.landmarks:
            raise UsageError("bnp-qp needs --landmarks")
        text = pt.export_qp(g, _landmarks(g, args.landmarks))
    else:
        text = ds.export_ilp(g, args.radius, "size" if args.model == "mds" else "congestion")
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK, {"input": lg.fingerprint(), "results": {"bytes": len(text.encode())}}


def graph_stats(g: Graph) -> dict:
    comps = connected_components(g)
    return {
        "n": g.n,
        "m": g.m,
        "min_degree": g.min_degree(),
        "max_degree": g.max_degree(),
        "avg_degree": rational(g.avg_degree()),
        "components": len(comps),
        "largest_component": max((len(c) for c in comps), default=0),
    }


def _stats_one(path: str, lcc: bool) -> dict:
    ns = argparse.Namespace(graph=path, lcc=lcc)
    lg = _load(ns)
    return {"input": lg.fingerprint(), "graph": graph_stats(lg.graph)}


def cmd_stats(args) -> tuple[int, dict]:
    if len(args.graph) > 1:
        if args.domset or args.partition:
            raise UsageError("--domset/--partition take a single graph")
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            batch = list(pool.map(_stats_one, args.graph, [args.lcc] * len(args.graph)))
        return EXIT_OK, {"results": batch}
    ns = argparse.Namespace(graph=args.graph[0], lcc=args.lcc)
    lg = _load(ns)
    g = lg.graph
    results = {"graph": graph_stats(g)}
    if args.domset:
        s = read_vertex_set(g, args.domset)
        ok, _ = ds.verify_r_domination(g, s, args.radius)
        results["domset"] = {
            "size": len(s),
            "r": args.radius,
            "avg_congestion": rational(ds.avg_congestion(g, s, args.radius)),
            "dominating": ok,
        }
    if args.partition:
        p = read_partition(g, args.partition)
        ok, _ = pt.verify_partition(g, p.landmarks, p)
        part = {**p.stats().to_json(), "valid": ok}
        try:
            part["k"] = pt.equidistant_count(build_compact_kernel(g, p.landmarks))
        except GraphError:
            part["k"] = None
        results["partition"] = part
    return EXIT_OK, {"input": lg.fingerprint(), "results": results}


def cmd_generate(args) -> tuple[int, dict]:
    import random

    kind = args.kind
    landmarks = None
    if kind == "fig1":
        g = fig1_graph()
    elif kind == "clique-pendant":
        g = clique_pendant_gadget(args.size)
    elif kind == "biclique-leaf":
        g = biclique_leaf_gadget(args.size)
    elif kind == "fig3":
        g = fig3_graph()
        landmarks = list(FIG3_LANDMARKS)
    elif kind == "grid":
        g = grid_graph(args.size, args.size)
    else:
        g = sparse_random(args.size, args.avg_degree, random.Random(args.seed))
    text = dump_edge_list(g)
    if args.output and args.output != "-":
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.landmarks_out:
        if landmarks is None:
            raise UsageError(f"{kind} has no canonical landmarks")
        Path(args.landmarks_out).write_text("".join(f"{x}\n" for x in landmarks), encoding="utf-8")
    return EXIT_OK, {"results": {"n": g.n, "m": g.m}}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="sparsedom", description=__doc__.splitlines()[0])
    ap.add_argument("--report", help="write the JSON run report here instead of stdout")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_arg(p, nargs=None):
        p.add_argument("graph", nargs=nargs, help="edge-list file")
        p.add_argument("--lcc", action="store_true", help="keep only the largest connected component")

    p = sub.add_parser("domset", help="compute an r-dominating set")
    graph_arg(p)
    p.add_argument("--algo", choices=DOMSET_ALGOS, default="ratio+")
    p.add_argument("-r", "--radius", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--limit", type=int, help="vertex limit for the brute-force oracles")
    p.add_argument("-o", "--output", help="dominator file; stats go to OUTPUT.json")
    p.set_defaults(func=cmd_domset)

    p = sub.add_parser("partition", help="balanced neighborhood partitioning")
    graph_arg(p)
    p.add_argument("--landmarks", required=True, help="file with one landmark label per line")
    p.add_argument("--algo", choices=PARTITION_ALGOS, default="weight")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=pt.DEFAULT_BRANCH_BUDGET)
    p.add_argument("-o", "--output", help="assignment file; stats go to OUTPUT.json")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="check a dominating set or a partition")
    graph_arg(p)
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--domset")
    grp.add_argument("--partition")
    p.add_argument("-r", "--radius", type=int, default=1)
    p.add_argument("--perfect-code", action="store_true")
    p.add_argument("--landmarks")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export", help="write an ILP/QP model in LP format")
    graph_arg(p)
    p.add_argument("--model", choices=MODELS, required=True)
    p.add_argument("-r", "--radius", type=int, default=1)
    p.add_argument("--landmarks")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("stats", help="graph, dominating set and partition statistics")
    graph_arg(p, nargs="+")
    p.add_argument("--domset")
    p.add_argument("-r", "--radius", type=int, default=1)
    p.add_argument("--partition")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="write a fixture or synthetic graph")
    p.add_argument("kind", choices=("fig1", "clique-pendant", "biclique-leaf", "fig3", "grid", "random"))
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--avg-degree", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--landmarks-out")
    p.set_defaults(func=cmd_generate)
    return ap


def _config(args) -> dict:
    skip = {"func", "report", "verbose"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    t0 = time.perf_counter()
    report: dict = {"command": args.command, "config": _config(args)}
    try:
        code, body = args.func(args)
        report.update(body)
        report["status"] = "ok" if code == EXIT_OK else "failed"
    except RefusalError as e:
        code = EXIT_REFUSED
        report.update(status="refused", error=str(e), limit=e.limit)
    except (UsageError, LabelError, GraphError, ValueError, OSError) as e:
        code = EXIT_USAGE
        report.update(status="error", error=str(e))
    report["wall_ms"] = _ms(t0)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    else:
        stdout_taken = args.command in ("export", "generate") and getattr(args, "output", None) in (None, "-")
        (sys.stderr if stdout_taken else sys.stdout).write(text)
    if code == EXIT_USAGE:
        log.error("%s", report.get("error"))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
