"""Batch file formats and synthetic instance generation.

Files are UTF-8 text with LF or CRLF line endings.  A record starts at a
header line beginning with ``#``; everything after the ``#`` is an
opaque record name.

graph file            truth file              node-length file
-----------           ------------            ----------------
# name                # name                  # name
n                     w v1 v2 ... vk          vertex length
tail head weight      (one transcript/line)   (one vertex/line)
...

Repeated ``tail head`` lines create parallel edges.  Canonical emission
writes LF line endings and edges in ascending edge-id order, so
emit -> parse -> emit is byte-identical.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import IO, Iterable, Optional, Sequence
import warnings

from .graph import Edge, FlowGraph, Transcript, superimpose
from .metrics import GroundTruth


class ParseError(ValueError):
    """A malformed input line; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass
class GraphRecord:
    """One named graph from a batch file, with optional ground truth."""

    name: str
    graph: FlowGraph
    truth: Optional[GroundTruth] = None
    truth_mismatch: bool = False


def _records_of(lines: Iterable[str]):
    """Split numbered, stripped lines into (header_line_no, name, body) blocks."""
    header: Optional[tuple[int, str]] = None
    body: list[tuple[int, str]] = []
    for no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if header is not None:
                yield header[0], header[1], body
            header = (no, line[1:].strip())
            body = []
        else:
            if header is None:
                raise ParseError(no, "content before the first '#' record header")
            body.append((no, line))
    if header is not None:
        yield header[0], header[1], body


def _parse_one_graph(name: str, header_no: int,
                     body: Sequence[tuple[int, str]]) -> GraphRecord:
    if not body:
        raise ParseError(header_no, f"record {name!r} is missing its vertex count")
    no, line = body[0]
    try:
        n = int(line)
    except ValueError:
        raise ParseError(no, f"expected a vertex count, got {line!r}") from None
    if n < 0:
        raise ParseError(no, f"negative vertex count {n}")
    edges = []
    for no, line in body[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ParseError(no, f"expected 'tail head weight', got {line!r}")
        try:
            tail, head, weight = (int(p) for p in parts)
        except ValueError:
            raise ParseError(no, f"non-integer field in edge line {line!r}") from None
        if not (0 <= tail < n and 0 <= head < n):
            raise ParseError(no, f"vertex id outside [0, {n}) in edge line {line!r}")
        if weight <= 0:
            raise ParseError(no, f"nonpositive weight {weight}")
        edges.append(Edge(tail, head, weight))
    return GraphRecord(name, FlowGraph(n, edges, name=name))


def parse_graph_file(stream: IO[str], collect_errors: bool = False):
    """Parse all graph records from a stream.

    Returns the record list, or ``(records, errors)`` when
    ``collect_errors`` is set, in which case a malformed record is
    reported and skipped instead of aborting the batch.
    """
    records: list[GraphRecord] = []
    errors: list[ParseError] = []
    try:
        blocks = list(_records_of(stream))
    except ParseError as exc:
        if not collect_errors:
            raise
        return records, [exc]
    for header_no, name, body in blocks:
        try:
            records.append(_parse_one_graph(name, header_no, body))
        except ParseError as exc:
            if not collect_errors:
                raise
            errors.append(exc)
    if collect_errors:
        return records, errors
    return records


def parse_truth_file(stream: IO[str]) -> list[tuple[str, list[Transcript]]]:
    """Parse per-record transcript lists: each line ``weight v1 v2 ... vk``."""
    out: list[tuple[str, list[Transcript]]] = []
    for _, name, body in _records_of(stream):
        transcripts: list[Transcript] = []
        for no, line in body:
            parts = line.split()
            if len(parts) < 2:
                raise ParseError(no, f"expected 'weight v1 v2 ...', got {line!r}")
            try:
                values = [int(p) for p in parts]
            except ValueError:
                raise ParseError(no, f"non-integer field in transcript line {line!r}") from None
            weight, vertices = values[0], tuple(values[1:])
            if weight <= 0:
                raise ParseError(no, f"nonpositive weight {weight}")
            transcripts.append(Transcript(vertices, weight))
        out.append((name, transcripts))
    return out


def parse_node_lengths(stream: IO[str]) -> list[tuple[str, dict[int, int]]]:
    """Parse per-record vertex length maps: each line ``vertex length``."""
    out: list[tuple[str, dict[int, int]]] = []
    for _, name, body in _records_of(stream):
        lengths: dict[int, int] = {}
        for no, line in body:
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(no, f"expected 'vertex length', got {line!r}")
            try:
                vertex, length = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(no, f"non-integer field in length line {line!r}") from None
            if length < 0:
                raise ParseError(no, f"negative length {length}")
            if vertex in lengths:
                warnings.warn(f"record {name!r}: duplicate length for vertex "
                              f"{vertex}; last wins")
            lengths[vertex] = length
        out.append((name, lengths))
    return out


def truth_consistent(graph: FlowGraph, transcripts: Sequence[Transcript]) -> bool:
    """True iff summing transcript weights per vertex pair reproduces the
    graph's flow exactly (parallel edges compared as summed pairs)."""
    want: dict[tuple[int, int], int] = {}
    for e in graph.edges:
        want[(e.tail, e.head)] = want.get((e.tail, e.head), 0) + e.weight
    got: dict[tuple[int, int], int] = {}
    for t in transcripts:
        for u, v in zip(t.vertices, t.vertices[1:]):
            got[(u, v)] = got.get((u, v), 0) + t.weight
    return want == got


def attach_truth(records: Sequence[GraphRecord],
                 truths: Sequence[tuple[str, list[Transcript]]]) -> None:
    """Match transcript blocks to graph records by header name.

    Blocks sharing a name are assigned to same-named records in file
    order.  A block with no matching record raises; a block whose
    superimposition does not reproduce the graph's weights sets the
    record's ``truth_mismatch`` flag with a warning.  Records with an
    empty block keep ``truth=None`` (their complexity is undefined).
    """
    pools: dict[str, list[GraphRecord]] = {}
    for r in records:
        pools.setdefault(r.name, []).append(r)
    used: dict[str, int] = {}
    for name, transcripts in truths:
        pool = pools.get(name, [])
        idx = used.get(name, 0)
        if idx >= len(pool):
            raise ValueError(f"truth header {name!r} matches no graph record")
        used[name] = idx + 1
        record = pool[idx]
        if not transcripts:
            continue
        for t in transcripts:
            if any(v >= record.graph.vertex_count or v < 0 for v in t.vertices):
                raise ValueError(f"record {name!r}: transcript vertex outside the graph")
        record.truth = GroundTruth(tuple(transcripts))
        if not truth_consistent(record.graph, transcripts):
            record.truth_mismatch = True
            warnings.warn(f"record {name!r}: transcript superimposition does not "
                          f"match the graph's edge weights")


def attach_node_lengths(records: Sequence[GraphRecord],
                        lengths: Sequence[tuple[str, dict[int, int]]]) -> None:
    """Attach parsed length maps by name; uncovered vertices default to 0
    with a warning."""
    pools: dict[str, list[GraphRecord]] = {}
    for r in records:
        pools.setdefault(r.name, []).append(r)
    used: dict[str, int] = {}
    for name, table in lengths:
        pool = pools.get(name, [])
        idx = used.get(name, 0)
        if idx >= len(pool):
            raise ValueError(f"length header {name!r} matches no graph record")
        used[name] = idx + 1
        record = pool[idx]
        missing = [v for v in range(record.graph.vertex_count) if v not in table]
        if missing:
            warnings.warn(f"record {name!r}: no length for vertices {missing}; "
                          f"defaulting to 0")
        record.graph = record.graph.replace(node_lengths=table)


def emit_graph_file(records: Iterable[GraphRecord], stream: IO[str]) -> None:
    for r in records:
        stream.write(f"# {r.name}\n{r.graph.vertex_count}\n")
        for e in r.graph.edges:
            stream.write(f"{e.tail} {e.head} {e.weight}\n")


def emit_truth_file(records: Iterable[GraphRecord], stream: IO[str]) -> None:
    for r in records:
        stream.write(f"# {r.name}\n")
        if r.truth is None:
            continue
        for t in r.truth.transcripts:
            stream.write(" ".join([str(t.weight)] + [str(v) for v in t.vertices]) + "\n")


def simulate_abundances(count: int, rng_seed: int,
                        mu: float = -4.0, sigma: float = 2.0) -> list[int]:
    """Integer abundances: lognormal draws scaled by 1000, rounded, with
    zero-rounded entries excluded (so fewer than ``count`` may return)."""
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    rng = random.Random(rng_seed)
    values = [round(rng.lognormvariate(mu, sigma) * 1000) for _ in range(count)]
    return [v for v in values if v > 0]


def _bridge_pairs(k: int, count: int) -> list[tuple[int, int]]:
    # spread count <= k*k distinct pairs over the k x k grid, matching first
    return [(t % k, (t % k + t // k) % k) for t in range(count)]


def gen_appendix_family(kind: str, k: int,
                        bridge_edges: Optional[int] = None) -> GraphRecord:
    """Stress-test families built from two chains joined by a bipartite bridge.

    Vertices: chain ``a_1..a_k`` (ids 0..k-1), fan-out set C (k..2k-1),
    fan-in set D (2k..3k-1), chain ``b_1..b_k`` (3k..4k-1).  ``a_k`` feeds
    every bridged C vertex, unit-weight bridge edges connect C to D, and
    every bridged D vertex feeds ``b_1``; all remaining weights follow
    from conservation.  The ``worst`` kind keeps the chains intact, so
    every full path is safe and the report grows with (number of bridge
    edges) x (chain length).  The ``best`` kind splits the last A-chain
    edge and the first B-chain edge into two parallel half-flow edges,
    which caps every safe path at one chain or one bridge crossing and
    keeps the report linear in the graph size.

    ``bridge_edges`` defaults to 2k; the best kind needs it even so the
    split halves are integral.
    """
    if kind not in ("worst", "best"):
        raise ValueError(f"kind must be 'worst' or 'best', got {kind!r}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    count = 2 * k if bridge_edges is None else bridge_edges
    if not (1 <= count <= k * k):
        raise ValueError(f"bridge_edges must be in [1, {k * k}], got {count}")
    if kind == "best" and count % 2 != 0:
        raise ValueError("the best kind needs an even number of bridge edges")

    pairs = _bridge_pairs(k, count)
    out_of: dict[int, list[int]] = {}
    in_of: dict[int, list[int]] = {}
    for j, l in pairs:
        out_of.setdefault(j, []).append(l)
        in_of.setdefault(l, []).append(j)
    flow = count  # chain flow equals the total unit flow across the bridge

    def a(i: int) -> int:  # 1-based chain positions
        return i - 1

    def c(j: int) -> int:
        return k + j

    def d(l: int) -> int:
        return 2 * k + l

    def b(i: int) -> int:
        return 3 * k + i - 1

    edges: list[Edge] = []
    for i in range(1, k - 1 if kind == "best" else k):
        edges.append(Edge(a(i), a(i + 1), flow))
    if kind == "best":
        edges.append(Edge(a(k - 1), a(k), flow // 2))
        edges.append(Edge(a(k - 1), a(k), flow // 2))
    for j in sorted(out_of):
        edges.append(Edge(a(k), c(j), len(out_of[j])))
    for j in sorted(out_of):
        for l in sorted(out_of[j]):
            edges.append(Edge(c(j), d(l), 1))
    for l in sorted(in_of):
        edges.append(Edge(d(l), b(1), len(in_of[l])))
    if kind == "best":
        edges.append(Edge(b(1), b(2), flow // 2))
        edges.append(Edge(b(1), b(2), flow // 2))
    for i in range(2 if kind == "best" else 1, k):
        edges.append(Edge(b(i), b(i + 1), flow))

    name = f"appendix-{kind}-k{k}"
    return GraphRecord(name, FlowGraph(4 * k, edges, name=name))


def gen_random_instance(
    num_transcripts: int,
    vertex_budget: int,
    rng_seed: int,
    max_weight: Optional[int] = None,
    mu: float = -4.0,
    sigma: float = 2.0,
    name: Optional[str] = None,
) -> GraphRecord:
    """A random instance built the dataset way: sample monotone vertex
    sequences over a shared order, weight them, and superimpose.

    Weights are uniform in ``1..max_weight`` when given, otherwise
    simulated abundances.  The attached truth includes the appended
    global endpoints, matching the batch file conventions.
    """
    if num_transcripts < 1:
        raise ValueError(f"need at least one transcript, got {num_transcripts}")
    if vertex_budget < 1:
        raise ValueError(f"vertex budget must be positive, got {vertex_budget}")
    rng = random.Random(rng_seed)
    if max_weight is not None:
        weights = [rng.randint(1, max_weight) for _ in range(num_transcripts)]
    else:
        weights = []
        while len(weights) < num_transcripts:
            v = round(rng.lognormvariate(mu, sigma) * 1000)
            if v > 0:
                weights.append(v)
    transcripts = []
    for w in weights:
        size = rng.randint(1, vertex_budget)
        transcripts.append(Transcript(tuple(sorted(rng.sample(range(vertex_budget), size))), w))
    name = name or f"random-{rng_seed}"
    graph = superimpose(transcripts, vertex_count=vertex_budget, name=name)
    source, sink = vertex_budget, vertex_budget + 1
    full = tuple(Transcript((source,) + t.vertices + (sink,), t.weight)
                 for t in transcripts)
    return GraphRecord(name, graph, truth=GroundTruth(full))


def gen_funnel_instance(
    num_transcripts: int,
    rng_seed: int,
    max_length: int = 6,
    max_weight: int = 5,
    name: Optional[str] = None,
) -> GraphRecord:
    """A funnel built from vertex-disjoint transcripts joined only at the
    global endpoints; every source-to-sink path owns all of its internal
    edges, so the decomposition is unique."""
    if num_transcripts < 1:
        raise ValueError(f"need at least one transcript, got {num_transcripts}")
    if max_length < 1:
        raise ValueError(f"max_length must be positive, got {max_length}")
    rng = random.Random(rng_seed)
    transcripts = []
    next_vertex = 0
    for _ in range(num_transcripts):
        size = rng.randint(1, max_length)
        vs = tuple(range(next_vertex, next_vertex + size))
        next_vertex += size
        transcripts.append(Transcript(vs, rng.randint(1, max_weight)))
    name = name or f"funnel-{rng_seed}"
    graph = superimpose(transcripts, vertex_count=next_vertex, name=name)
    source, sink = next_vertex, next_vertex + 1
    full = tuple(Transcript((source,) + t.vertices + (sink,), t.weight)
                 for t in transcripts)
    return GraphRecord(name, graph, truth=GroundTruth(full))
