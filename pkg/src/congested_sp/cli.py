"""Command-line entry point.

Exit codes: 0 solved or verified, 1 infeasible or falsified, 2 usage or
format error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath
from typing import Optional, Sequence

from . import campaigns
from .counterexamples import build_appendixB_instance, verify_appendixB, verify_bidirectional_cycle
from .dot import export_dot
from .errors import BudgetExceeded, CongestedPathError, FormatError, GraphError, PreconditionFailure, SupplierExhausted
from .graph import Graph, _content_lines, all_pairs_distances, parse_graph
from .merge import merge_dag, merge_undirected
from .paths import PathCollection, congestion_map, max_congestion_nodes, parse_trace, render_trace, replay
from .reduction import BACKENDS, solve_spc
from .roundtrip import SinglePath, check_cover, roundtrip_cover
from .spc import DEFAULT_BUDGET, SpcInstance, parse_instance, parse_paths, render_paths, validate_solution
from .supplier import Supplier

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

VERIFY_TARGETS = {
    "dag": "dag-merge",
    "undirected": "undirected-merge",
    "directed": "directed-roundtrip",
    "segments": "segment-lemma",
    "cycle-lemma": "cycle-lemma",
    "reduction": "reduction-equivalence",
    "blowup": "blowup",
    "exclusivity": "exclusivity",
    "swaps": "swap-algebra",
}


class UsageError(Exception):
    pass


def _read(name: str) -> str:
    if name == "-":
        return sys.stdin.read()
    try:
        return FsPath(name).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {name!r}: {exc.strerror}") from exc


def _base_dir(name: str) -> Optional[str]:
    return None if name == "-" else str(FsPath(name).resolve().parent)


def load_instance(name: str) -> SpcInstance:
    return parse_instance(_read(name), _base_dir(name))


def load_graph(name: str) -> Graph:
    """A graph file, or the graph of an instance file."""
    text = _read(name)
    lines = _content_lines(text)
    is_graph = lines and lines[0].split()[0] in ("directed", "undirected")
    if is_graph and not any(line.split()[0] == "pairs" for line in lines):
        return parse_graph(text)
    return parse_instance(text, _base_dir(name)).graph


def parse_nodes(spec: str) -> list[int]:
    try:
        return [int(x) for x in spec.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad node list {spec!r}") from None


def _emit(args, status: str, text: str, paths=(), trace=(), case_log=()) -> None:
    if args.format == "json":
        doc = {
            "status": status,
            "paths": [list(p.nodes) for p in paths],
            "congestion": {str(x): n for x, n in sorted(congestion_map(list(paths)).items())},
            "trace": [str(r) for r in trace],
            "case_log": list(case_log),
        }
        print(json.dumps(doc, indent=2))
    else:
        print(text, end="" if text.endswith("\n") or not text else "\n")


def _paths_text(paths) -> str:
    counts = congestion_map(list(paths))
    lines = [f"path {i}: {p}" for i, p in enumerate(paths)]
    lines.append("congestion: " + " ".join(f"{x}:{n}" for x, n in sorted(counts.items())))
    return "\n".join(lines) + "\n"


def cmd_solve_spc(args) -> int:
    inst = load_instance(args.instance)
    sol = solve_spc(inst, args.method, args.dsp_backend, args.budget)
    if sol is None:
        _emit(args, "infeasible", "infeasible\n")
        return EXIT_NO
    bad = validate_solution(inst, sol)
    if bad:
        raise CongestedPathError("solver produced an invalid solution: " + "; ".join(map(str, bad)))
    _emit(args, "solved", "solved\n" + _paths_text(sol.paths), sol.paths)
    return EXIT_OK


def cmd_solve_dsp(args) -> int:
    inst = load_instance(args.instance)
    if inst.c != 1:
        raise UsageError(f"solve-dsp needs c = 1, the instance has c = {inst.c}")
    sol = BACKENDS[args.dsp_backend](inst, args.budget)
    if sol is None:
        _emit(args, "infeasible", "infeasible\n")
        return EXIT_NO
    _emit(args, "solved", "solved\n" + _paths_text(sol.paths), sol.paths)
    return EXIT_OK


def _start_collection(args, inst: SpcInstance) -> PathCollection:
    if args.paths:
        return PathCollection(inst.graph, tuple(parse_paths(_read(args.paths))))
    sol = solve_spc(inst, "brute", budget=args.budget)
    if sol is None:
        raise PreconditionFailure("the instance is infeasible, nothing to merge")
    return sol.collection


def cmd_merge(args) -> int:
    inst = load_instance(args.instance)
    coll = _start_collection(args, inst)
    W = parse_nodes(args.W) if args.W else sorted(max_congestion_nodes(coll, inst.c))
    if not W:
        _emit(args, "solved", "no max-congestion nodes\n" + _paths_text(coll.paths), coll.paths)
        return EXIT_OK
    supplier = Supplier(inst.graph, inst.oracle, args.mode, args.budget)
    graph = inst.graph
    if not graph.directed:
        coll, p, trace = merge_undirected(coll, W, supplier)
    elif graph.is_dag():
        coll, p, trace = merge_dag(coll, W, supplier)
    else:
        raise UsageError("merge handles DAGs and undirected graphs; use roundtrip for other digraphs")
    text = f"W: {' '.join(map(str, W))}\ncovering path: {p}\n" + _paths_text(coll.paths)
    if trace.records:
        text += render_trace(trace.records)
    _emit(args, "solved", text, coll.paths, trace.records)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    graph = load_graph(args.graph)
    paths = tuple(parse_paths(_read(args.paths))) if args.paths else ()
    coll = PathCollection(graph, paths)
    W = parse_nodes(args.W) if args.W else list(graph.nodes)
    supplier = (Supplier.theorem if args.mode == "theorem" else Supplier.collection)(graph, budget=args.budget)
    coll, outcome, trace = roundtrip_cover(coll, W, supplier)
    problems = check_cover(coll, W, outcome)
    if problems:
        raise CongestedPathError("; ".join(problems))
    if isinstance(outcome, SinglePath):
        head = f"single path {outcome.index}: {coll[outcome.index]}\n"
    else:
        head = f"two paths {outcome.index} {outcome.other}: {coll[outcome.index]} | {coll[outcome.other]}\n"
    text = head + "".join(f"{line}\n" for line in trace.case_log) + render_trace(trace.records)
    _emit(args, "solved", text, coll.paths, trace.records, trace.case_log)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    if args.which == "cycle":
        report = verify_bidirectional_cycle(args.n or 16, args.a, args.set_size)
    else:
        report = verify_appendixB(build_appendixB_instance(args.n or 8))
    status = "verified" if report.confirmed else "falsified"
    _emit(args, status, report.to_text(), report.solution)
    return EXIT_OK if report.confirmed else EXIT_NO


def cmd_verify(args) -> int:
    cfg = campaigns.make_campaign(
        VERIFY_TARGETS[args.target], args.trials, args.seed, n_max=args.n_max, k_max=args.k_max, d_max=args.d_max
    )
    campaigns.verify_theorem_trial(cfg, workers=args.workers, stop_on_failure=args.workers <= 1)
    status = "verified" if cfg.passed else "falsified"
    _emit(args, status, cfg.report(), case_log=[cfg.summary()])
    return EXIT_OK if cfg.passed else EXIT_NO


def cmd_export_dot(args) -> int:
    graph = load_graph(args.graph)
    paths = parse_paths(_read(args.paths)) if args.paths else []
    trace = parse_trace(_read(args.trace)) if args.trace else []
    if trace:
        paths = list(replay(PathCollection(graph, tuple(paths)), trace).paths)
    text = export_dot(graph, paths, parse_nodes(args.W) if args.W else (), trace)
    if args.output:
        FsPath(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_replay(args) -> int:
    graph = load_graph(args.graph)
    coll = PathCollection(graph, tuple(parse_paths(_read(args.paths))))
    records = parse_trace(_read(args.trace))
    before = congestion_map(coll)
    oracle = all_pairs_distances(graph)
    try:
        out = replay(coll, records)
    except ValueError as exc:
        _emit(args, "falsified", f"replay failed: {exc}\n")
        return EXIT_NO
    swaps_only = all(str(r).startswith("swap") for r in records)
    ok = out.is_valid(oracle) and (not swaps_only or congestion_map(out) == before)
    _emit(args, "verified" if ok else "falsified", render_paths(out.paths), out.paths, records)
    return EXIT_OK if ok else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search step / supplier query cap")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="congested-sp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-spc", parents=[common], help="solve a (k,c)-SPC instance")
    p.add_argument("instance")
    p.add_argument("--method", choices=("brute", "reduction"), default="brute")
    p.add_argument("--dsp-backend", choices=sorted(BACKENDS), default="brute")
    p.set_defaults(func=cmd_solve_spc)

    p = sub.add_parser("solve-dsp", parents=[common], help="node-disjoint shortest paths (c = 1)")
    p.add_argument("instance")
    p.add_argument("--dsp-backend", choices=sorted(BACKENDS), default="brute")
    p.set_defaults(func=cmd_solve_dsp)

    p = sub.add_parser("merge", parents=[common], help="merge target nodes onto one path (DAG or undirected)")
    p.add_argument("instance")
    p.add_argument("--paths", help="path file; default: brute-force solution of the instance")
    p.add_argument("--W", help="target nodes; default: max-congestion nodes")
    p.add_argument("--mode", choices=("collection", "theorem"), default="collection")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("roundtrip", parents=[common], help="single-path or roundtrip cover on a digraph")
    p.add_argument("graph")
    p.add_argument("--paths")
    p.add_argument("--W", help="target nodes; default: all nodes")
    p.add_argument("--mode", choices=("collection", "theorem"), default="theorem")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("counterexample", parents=[common], help="exhaustive counterexample checks")
    p.add_argument("which", choices=("cycle", "appendix-b"))
    p.add_argument("--n", type=int)
    p.add_argument("--a", type=int, default=11)
    p.add_argument("--set-size", type=int)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", parents=[common], help="seeded property campaigns")
    p.add_argument("target", choices=sorted(VERIFY_TARGETS))
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--n-max", type=int)
    p.add_argument("--k-max", type=int)
    p.add_argument("--d-max", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", parents=[common], help="Graphviz DOT of a graph with paths")
    p.add_argument("graph")
    p.add_argument("--paths")
    p.add_argument("--W")
    p.add_argument("--trace", help="swap trace applied to --paths before drawing")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("replay", parents=[common], help="apply a swap trace to a path file")
    p.add_argument("graph")
    p.add_argument("--paths", required=True)
    p.add_argument("--trace", required=True)
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, FormatError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PreconditionFailure, SupplierExhausted) as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        _emit(args, "falsified", "")
        return EXIT_NO
    except CongestedPathError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())
