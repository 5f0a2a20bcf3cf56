"""Batch command-line front end.

Subcommands cover the full pipeline: enumerating maximal safe paths
(``safe``), the baseline producers (``unitigs``, ``ext-unitigs``),
candidate decompositions (``decompose``), single-path safety queries
(``verify``), the evaluation harness (``metrics``), funnel splitting
(``filter-funnels``), and synthetic instance generation (``generate``).

Batch behavior: records that fail to parse or validate are reported to
stderr with their name and line number and skipped; the rest of the
batch still runs, and the exit status is nonzero when anything was
skipped.  Identical inputs, flags, and seed produce byte-identical
outputs; records are processed by a bounded worker pool but emitted in
input order.  ``FLOWSAFE_WORKERS`` and ``FLOWSAFE_SEED`` provide
environment defaults for ``--workers`` and ``--seed``.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import io_formats, metrics as metrics_mod
from .decompose import Decomposition, greedy_width, peel_decomposition
from .graph import FlowGraph, Path, is_funnel, validate
from .io_formats import GraphRecord, ParseError
from .represent import SafeReport, safe_report
from .safepaths import extended_unitigs, unitigs
from .safety import verify_path

DECOMPOSERS: dict[str, Callable[[FlowGraph], Decomposition]] = {
    "peel": peel_decomposition,
    "greedy": greedy_width,
}


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"environment variable {name} must be an integer, got {raw!r}")


def _open_out(path: Optional[str]):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline="\n"), True


def _load_records(args) -> tuple[list[GraphRecord], list[str]]:
    problems: list[str] = []
    try:
        with open(args.graph, encoding="utf-8") as fh:
            records, errors = io_formats.parse_graph_file(fh, collect_errors=True)
    except OSError as exc:
        raise SystemExit(f"cannot read graph file: {exc}")
    problems.extend(f"{args.graph}: {e}" for e in errors)

    if getattr(args, "truth", None):
        try:
            with open(args.truth, encoding="utf-8") as fh:
                truths = io_formats.parse_truth_file(fh)
            io_formats.attach_truth(records, truths)
        except OSError as exc:
            raise SystemExit(f"cannot read truth file: {exc}")
        except (ParseError, ValueError) as exc:
            raise SystemExit(f"truth file: {exc}")

    if getattr(args, "node_lengths", None):
        try:
            with open(args.node_lengths, encoding="utf-8") as fh:
                lengths = io_formats.parse_node_lengths(fh)
            io_formats.attach_node_lengths(records, lengths)
        except OSError as exc:
            raise SystemExit(f"cannot read node-length file: {exc}")
        except (ParseError, ValueError) as exc:
            raise SystemExit(f"node-length file: {exc}")

    ok: list[GraphRecord] = []
    for r in records:
        violations = validate(r.graph)
        if violations:
            listing = "; ".join(str(v) for v in violations)
            problems.append(f"record {r.name!r}: invalid flow graph: {listing}")
        else:
            ok.append(r)
    return ok, problems


def _pool_map(workers: int, fn, items):
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit_json(payload, out_path: Optional[str]) -> None:
    stream, close = _open_out(out_path)
    try:
        stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    finally:
        if close:
            stream.close()


def _vertex_list(path: Path, graph: FlowGraph) -> list[int]:
    return list(path.vertices(graph))


def _graph_payload(record: GraphRecord, algorithm: str, paths: list[dict]) -> dict:
    return {
        "name": record.name,
        "k": record.truth.k if record.truth is not None else None,
        "algorithm": algorithm,
        "paths": paths,
        "counts": {
            "paths": len(paths),
            "total_edges": sum(len(p["edges"]) for p in paths),
        },
    }


def _safe_payload(record: GraphRecord, report: SafeReport, mode: str) -> dict:
    graph = record.graph
    if mode == "raw":
        paths = [{
            "vertices": _vertex_list(r.path, graph),
            "edges": list(r.path.edges),
            "excess": r.excess,
        } for r in report.raw]
        return _graph_payload(record, "safe", paths)
    carriers = [{
        "vertices": _vertex_list(e.carrier, graph),
        "edges": list(e.carrier.edges),
        "host": e.host_index,
        "host_offset": e.host_offset,
        "intervals": [[iv.left, iv.right, iv.excess] for iv in e.intervals],
    } for e in report.concise]
    return {
        "name": record.name,
        "k": record.truth.k if record.truth is not None else None,
        "algorithm": "safe",
        "carriers": carriers,
        "counts": {
            "carriers": len(carriers),
            "total_edges": sum(len(c["edges"]) for c in carriers),
            "safe_paths": sum(len(c["intervals"]) for c in carriers),
        },
    }


def _reported_vertex_seqs(record: GraphRecord, algorithm: str,
                          include_single_edges: bool = True) -> list[list[int]]:
    graph = record.graph
    if algorithm == "unitigs":
        return [_vertex_list(p, graph) for p in unitigs(graph)]
    if algorithm == "ext-unitigs":
        return [_vertex_list(p, graph) for p in extended_unitigs(graph)]
    if algorithm == "safe":
        report = safe_report(graph, include_single_edges=include_single_edges)
        return [_vertex_list(r.path, graph) for r in report.raw]
    if algorithm in DECOMPOSERS:
        decomposition = DECOMPOSERS[algorithm](graph)
        return [_vertex_list(wp.path, graph) for wp in decomposition.paths]
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _report_problems(problems: list[str]) -> int:
    for p in problems:
        print(p, file=sys.stderr)
    return 1 if problems else 0


def cmd_safe(args) -> int:
    records, problems = _load_records(args)

    def run(record: GraphRecord):
        try:
            decomposition = DECOMPOSERS[args.algo](record.graph)
            report = safe_report(record.graph, decomposition,
                                 include_single_edges=not args.exclude_single_edges)
            return _safe_payload(record, report, args.mode)
        except Exception as exc:  # per-record isolation
            return {"name": record.name, "error": str(exc)}

    graphs = _pool_map(args.workers, run, records)
    problems += [f"record {g['name']!r}: {g['error']}" for g in graphs if "error" in g]
    _emit_json({"algorithm": "safe", "mode": args.mode, "graphs": graphs}, args.output)
    return _report_problems(problems)


def cmd_paths(args, algorithm: str) -> int:
    records, problems = _load_records(args)
    include_singles = bool(getattr(args, "include_single_edges", False))

    def run(record: GraphRecord):
        try:
            graph = record.graph
            if algorithm == "unitigs":
                found = unitigs(graph, include_single_edges=include_singles)
            else:
                found = extended_unitigs(graph)
            paths = [{"vertices": _vertex_list(p, graph), "edges": list(p.edges)}
                     for p in found]
            return _graph_payload(record, algorithm, paths)
        except Exception as exc:
            return {"name": record.name, "error": str(exc)}

    graphs = _pool_map(args.workers, run, records)
    problems += [f"record {g['name']!r}: {g['error']}" for g in graphs if "error" in g]
    _emit_json({"algorithm": algorithm, "graphs": graphs}, args.output)
    return _report_problems(problems)


def cmd_decompose(args) -> int:
    records, problems = _load_records(args)

    def run(record: GraphRecord):
        try:
            decomposition = DECOMPOSERS[args.algo](record.graph)
            paths = [{
                "vertices": _vertex_list(wp.path, record.graph),
                "edges": list(wp.path.edges),
                "weight": wp.weight,
            } for wp in decomposition.paths]
            return _graph_payload(record, args.algo, paths)
        except Exception as exc:
            return {"name": record.name, "error": str(exc)}

    graphs = _pool_map(args.workers, run, records)
    problems += [f"record {g['name']!r}: {g['error']}" for g in graphs if "error" in g]
    _emit_json({"algorithm": args.algo, "graphs": graphs}, args.output)
    return _report_problems(problems)


def cmd_verify(args) -> int:
    records, problems = _load_records(args)
    if args.name is not None:
        records = [r for r in records if r.name == args.name]
        if not records:
            print(f"no record named {args.name!r}", file=sys.stderr)
            return 1
    if not records:
        print("no usable graph record", file=sys.stderr)
        return 1
    record = records[0]
    try:
        vertices = [int(p) for p in args.path.split(",")]
        path = Path.from_vertices(record.graph, vertices)
    except ValueError as exc:
        print(f"bad path: {exc}", file=sys.stderr)
        return 1
    safe, excess = verify_path(record.graph, path)
    print(f"{'safe' if safe else 'unsafe'}, excess {excess}")
    return _report_problems(problems)


def _fmt(value: Fraction, places: int = 6) -> str:
    return f"{float(value):.{places}f}"


def cmd_metrics(args) -> int:
    if args.unit == "bases" and not args.node_lengths:
        raise SystemExit("--unit bases requires --node-lengths")
    records, problems = _load_records(args)
    algorithms = (list(DECOMPOSERS) + ["unitigs", "ext-unitigs", "safe"]
                  if args.algo == "all" else args.algo.split(","))
    usable: list[GraphRecord] = []
    for r in records:
        if r.truth is None:
            problems.append(f"record {r.name!r}: no ground truth; skipped")
        elif args.unit == "bases" and r.graph.node_lengths is None:
            problems.append(f"record {r.name!r}: no node lengths; skipped")
        elif args.exclude_funnels and is_funnel(r.graph):
            continue
        else:
            usable.append(r)

    def run(record: GraphRecord):
        try:
            return [metrics_mod.compute_row(
                record.name, alg,
                _reported_vertex_seqs(record, alg),
                record.truth, record.graph, args.unit,
            ) for alg in algorithms]
        except Exception as exc:
            return {"name": record.name, "error": str(exc)}

    results = _pool_map(args.workers, run, usable)
    rows: list[metrics_mod.MetricRow] = []
    for result in results:
        if isinstance(result, dict):
            problems.append(f"record {result['name']!r}: {result['error']}")
        else:
            rows.extend(result)

    stream, close = _open_out(args.output)
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["graph_id", "k", "algorithm", "unit",
                         "coverage", "precision", "fscore"])
        for row in rows:
            writer.writerow([row.graph_id, row.k, row.algorithm, row.unit,
                             _fmt(row.coverage), _fmt(row.precision), _fmt(row.fscore)])
    finally:
        if close:
            stream.close()

    buckets = ((2, args.k_split), (args.k_split + 1, None))
    summary = metrics_mod.summarize(rows, buckets)
    target = sys.stderr if args.summary is None else open(
        args.summary, "w", encoding="utf-8", newline="\n")
    try:
        target.write("algorithm\tbucket\tcount\tshare\tcoverage\tprecision\tfscore\n")
        for s in summary:
            target.write(f"{s.algorithm}\t{s.bucket}\t{s.count}\t{_fmt(s.share, 2)}\t"
                         f"{_fmt(s.coverage, 2)}\t{_fmt(s.precision, 2)}\t{_fmt(s.fscore, 2)}\n")
    finally:
        if args.summary is not None:
            target.close()
    return _report_problems(problems)


def cmd_filter_funnels(args) -> int:
    records, problems = _load_records(args)
    funnels = [r for r in records if is_funnel(r.graph)]
    rest = [r for r in records if not is_funnel(r.graph)]
    total = len(records)
    if args.funnels_out:
        with open(args.funnels_out, "w", encoding="utf-8", newline="\n") as fh:
            io_formats.emit_graph_file(funnels, fh)
    if args.rest_out:
        with open(args.rest_out, "w", encoding="utf-8", newline="\n") as fh:
            io_formats.emit_graph_file(rest, fh)
    share = 100.0 * len(funnels) / total if total else 0.0
    print(f"funnels: {len(funnels)}/{total} ({share:.2f}%)")
    print(f"non-funnels: {len(rest)}/{total} ({100.0 - share if total else 0.0:.2f}%)")
    return _report_problems(problems)


def cmd_generate(args) -> int:
    records: list[GraphRecord] = []
    if args.family in ("appendix-worst", "appendix-best"):
        if args.k is None:
            raise SystemExit(f"--family {args.family} requires -k")
        kind = args.family.removeprefix("appendix-")
        records.append(io_formats.gen_appendix_family(kind, args.k, args.bridge_edges))
    elif args.family == "random":
        for i in range(args.count):
            records.append(io_formats.gen_random_instance(
                args.transcripts, args.vertices, args.seed + i,
                max_weight=args.max_weight))
    elif args.family == "funnel":
        for i in range(args.count):
            records.append(io_formats.gen_funnel_instance(
                args.transcripts, args.seed + i, max_weight=args.max_weight or 5))
    else:
        raise SystemExit(f"unknown family {args.family!r}")

    stream, close = _open_out(args.output)
    try:
        io_formats.emit_graph_file(records, stream)
    finally:
        if close:
            stream.close()
    if args.truth_out:
        with open(args.truth_out, "w", encoding="utf-8", newline="\n") as fh:
            io_formats.emit_truth_file([r for r in records if r.truth is not None], fh)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flowsafe",
        description="Maximal safe paths of flow decompositions in weighted DAGs")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, needs_graph=True):
        if needs_graph:
            p.add_argument("--graph", "-g", required=True, help="batch graph file")
        p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
        p.add_argument("--workers", type=int,
                       default=_env_int("FLOWSAFE_WORKERS", 1),
                       help="worker threads for batch processing")

    p = sub.add_parser("safe", help="enumerate maximal safe paths")
    add_common(p)
    p.add_argument("--mode", choices=("raw", "concise"), default="raw",
                   help="raw: one entry per safe path; concise: carriers with intervals")
    p.add_argument("--algo", choices=tuple(DECOMPOSERS), default="peel",
                   help="candidate decomposition (result is identical)")
    p.add_argument("--exclude-single-edges", action="store_true",
                   help="drop single-edge safe paths")
    p.add_argument("--truth", default=None, help="optional truth file (adds k to output)")
    p.set_defaults(func=cmd_safe)

    p = sub.add_parser("unitigs", help="maximal unit-degree chains")
    add_common(p)
    p.add_argument("--include-single-edges", action="store_true",
                   help="keep single-edge chains")
    p.add_argument("--truth", default=None, help="optional truth file")
    p.set_defaults(func=lambda a: cmd_paths(a, "unitigs"))

    p = sub.add_parser("ext-unitigs", help="unitigs extended through forced junctions")
    add_common(p)
    p.add_argument("--truth", default=None, help="optional truth file")
    p.set_defaults(func=lambda a: cmd_paths(a, "ext-unitigs"))

    p = sub.add_parser("decompose", help="decompose the flow into weighted paths")
    add_common(p)
    p.add_argument("--algo", choices=tuple(DECOMPOSERS), required=True)
    p.add_argument("--truth", default=None, help="optional truth file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="safety and exact excess of one path")
    add_common(p)
    p.add_argument("--path", required=True, help="comma-separated vertex ids")
    p.add_argument("--name", default=None, help="record name (default: first record)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("metrics", help="coverage/precision/F-score against ground truth")
    add_common(p)
    p.add_argument("--truth", required=True, help="truth file")
    p.add_argument("--node-lengths", default=None, help="node-length file")
    p.add_argument("--algo", default="all",
                   help="algorithm name, comma list, or 'all' "
                        f"(choices: {', '.join(list(DECOMPOSERS) + ['unitigs', 'ext-unitigs', 'safe'])})")
    p.add_argument("--unit", choices=metrics_mod.UNITS, default="nodes")
    p.add_argument("--exclude-funnels", action="store_true",
                   help="skip funnel records (they score perfectly everywhere)")
    p.add_argument("--k-split", type=int, default=10,
                   help="bucket boundary: 2<=k<=split vs k>split")
    p.add_argument("--summary", default=None,
                   help="summary table file (default stderr)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("filter-funnels", help="split a batch into funnels and the rest")
    add_common(p)
    p.add_argument("--funnels-out", default=None, help="output file for funnel records")
    p.add_argument("--rest-out", default=None, help="output file for the rest")
    p.set_defaults(func=cmd_filter_funnels)

    p = sub.add_parser("generate", help="generate synthetic instances")
    add_common(p, needs_graph=False)
    p.add_argument("--family", required=True,
                   choices=("appendix-worst", "appendix-best", "random", "funnel"))
    p.add_argument("-k", type=int, default=None, help="size parameter for appendix families")
    p.add_argument("--bridge-edges", type=int, default=None,
                   help="bridge density for appendix families (default 2k)")
    p.add_argument("--count", type=int, default=1, help="number of records")
    p.add_argument("--transcripts", type=int, default=3, help="transcripts per record")
    p.add_argument("--vertices", type=int, default=8, help="vertex budget per record")
    p.add_argument("--max-weight", type=int, default=None,
                   help="uniform weights in 1..N instead of simulated abundances")
    p.add_argument("--seed", type=int, default=_env_int("FLOWSAFE_SEED", 0))
    p.add_argument("--truth-out", default=None, help="also write ground truth here")
    p.set_defaults(func=cmd_generate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
