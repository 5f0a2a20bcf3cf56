"""Core data model: edge-weighted multigraph DAGs carrying an integer flow.

A flow graph is a DAG in which every edge carries a strictly positive
integer weight and every vertex that is neither a source (no incoming
flow) nor a sink (no outgoing flow) conserves flow exactly:
``f_in(v) == f_out(v)``.  Parallel edges between the same vertex pair are
allowed and are distinguished by their edge id (the index into the edge
list).

All arithmetic is exact integer arithmetic.  Weights are restricted to
the unsigned 64-bit range and per-vertex totals to the signed 64-bit
range; exceeding either is a hard error, never a silent wraparound.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

U64_MAX = 2**64 - 1
I64_MAX = 2**63 - 1


class CycleError(ValueError):
    """Raised when a graph that must be acyclic contains a directed cycle."""


@dataclass(frozen=True)
class Edge:
    """A directed edge with a positive integer flow weight."""

    tail: int
    head: int
    weight: int


@dataclass(frozen=True)
class Transcript:
    """A weighted vertex sequence, e.g. one ground-truth path of an instance."""

    vertices: tuple[int, ...]
    weight: int


@dataclass(frozen=True)
class Violation:
    """One failed validation rule, locating the offending vertex or edge."""

    rule: str
    where: str
    detail: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.where}: {self.detail}"


@dataclass(frozen=True)
class FlowAggregates:
    """Per-vertex flow totals plus a topological order.

    ``f_in[v]`` / ``f_out[v]`` are the summed weights of edges entering /
    leaving ``v``.  ``topo_order`` places every edge's tail before its
    head; ties are broken by ascending vertex id so the order is
    reproducible across runs.
    """

    f_in: tuple[int, ...]
    f_out: tuple[int, ...]
    topo_order: tuple[int, ...]


class FlowGraph:
    """An edge-weighted multigraph DAG, immutable after construction.

    Edge identity is positional: ``graph.edges[i]`` has edge id ``i``.
    ``node_lengths`` optionally maps vertices to non-negative integer
    lengths (bases); ``aux_vertices`` marks artificial endpoint vertices
    added by :func:`superimpose` so that length-based metrics can skip
    them.  Instances are safe to share across worker threads.
    """

    __slots__ = ("vertex_count", "edges", "node_lengths", "name",
                 "aux_vertices", "_out", "_in", "_agg")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[Edge | tuple[int, int, int]],
        node_lengths: Optional[dict[int, int]] = None,
        name: str = "",
        aux_vertices: frozenset[int] = frozenset(),
    ):
        self.vertex_count = int(vertex_count)
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be non-negative")
        self.edges: tuple[Edge, ...] = tuple(
            e if isinstance(e, Edge) else Edge(*e) for e in edges
        )
        self.node_lengths = dict(node_lengths) if node_lengths is not None else None
        self.name = name
        self.aux_vertices = frozenset(aux_vertices)
        out: list[list[int]] = [[] for _ in range(self.vertex_count)]
        inc: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for i, e in enumerate(self.edges):
            if not (0 <= e.tail < self.vertex_count and 0 <= e.head < self.vertex_count):
                raise ValueError(f"edge {i} endpoint outside [0, {self.vertex_count})")
            out[e.tail].append(i)
            inc[e.head].append(i)
        self._out = tuple(tuple(ids) for ids in out)
        self._in = tuple(tuple(ids) for ids in inc)
        self._agg: Optional[FlowAggregates] = None

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def out_edges(self, v: int) -> tuple[int, ...]:
        """Edge ids leaving ``v``, in ascending id order."""
        return self._out[v]

    def in_edges(self, v: int) -> tuple[int, ...]:
        """Edge ids entering ``v``, in ascending id order."""
        return self._in[v]

    def out_degree(self, v: int) -> int:
        return len(self._out[v])

    def in_degree(self, v: int) -> int:
        return len(self._in[v])

    def edge_between(self, u: int, v: int) -> Optional[int]:
        """Smallest edge id from ``u`` to ``v``, or None if there is none."""
        for i in self._out[u]:
            if self.edges[i].head == v:
                return i
        return None

    def aggregates(self) -> FlowAggregates:
        """Flow totals and topological order, computed once and cached."""
        if self._agg is None:
            self._agg = aggregates(self)
        return self._agg

    def replace(self, **kw) -> "FlowGraph":
        """A copy with the given constructor fields replaced."""
        fields = dict(
            vertex_count=self.vertex_count,
            edges=self.edges,
            node_lengths=self.node_lengths,
            name=self.name,
            aux_vertices=self.aux_vertices,
        )
        fields.update(kw)
        return FlowGraph(**fields)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FlowGraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.node_lengths == other.node_lengths
            and self.name == other.name
            and self.aux_vertices == other.aux_vertices
        )

    def __repr__(self) -> str:
        return (f"FlowGraph(name={self.name!r}, n={self.vertex_count}, "
                f"m={len(self.edges)})")


@dataclass(frozen=True)
class Path:
    """A non-empty contiguous edge sequence, identified by edge ids.

    Paths in a DAG are automatically simple.  Use :meth:`from_edges` or
    :meth:`from_vertices` to construct a validated instance.
    """

    edges: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def vertices(self, graph: FlowGraph) -> tuple[int, ...]:
        """The vertex sequence traversed by the path."""
        es = graph.edges
        return (es[self.edges[0]].tail,) + tuple(es[i].head for i in self.edges)

    def subpath(self, left: int, right: int) -> "Path":
        """The sub-path spanning edge positions ``left..right`` inclusive."""
        if not (0 <= left <= right < len(self.edges)):
            raise IndexError(f"bad sub-path bounds [{left}, {right}]")
        return Path(self.edges[left:right + 1])

    @classmethod
    def from_edges(cls, graph: FlowGraph, edge_ids: Sequence[int]) -> "Path":
        ids = tuple(edge_ids)
        check_path(graph, ids)
        return cls(ids)

    @classmethod
    def from_vertices(cls, graph: FlowGraph, vertices: Sequence[int]) -> "Path":
        """Resolve a vertex sequence to edges, picking the smallest edge id
        whenever parallel edges give a choice."""
        if len(vertices) < 2:
            raise ValueError("a path needs at least two vertices")
        ids = []
        for u, v in zip(vertices, vertices[1:]):
            e = graph.edge_between(u, v)
            if e is None:
                raise ValueError(f"no edge from {u} to {v}")
            ids.append(e)
        return cls(tuple(ids))


def check_path(graph: FlowGraph, edge_ids: Sequence[int]) -> None:
    """Raise ValueError unless ``edge_ids`` is a contiguous simple path."""
    if not edge_ids:
        raise ValueError("empty path")
    m = len(graph.edges)
    for i in edge_ids:
        if not (0 <= i < m):
            raise ValueError(f"edge id {i} out of range")
    seen = {graph.edges[edge_ids[0]].tail}
    prev_head = graph.edges[edge_ids[0]].tail
    for i in edge_ids:
        e = graph.edges[i]
        if e.tail != prev_head:
            raise ValueError(f"edge {i} does not continue the path at {prev_head}")
        if e.head in seen:
            raise ValueError(f"vertex {e.head} repeats; paths must be simple")
        seen.add(e.head)
        prev_head = e.head


def _flow_totals(graph: FlowGraph) -> tuple[list[int], list[int]]:
    f_in = [0] * graph.vertex_count
    f_out = [0] * graph.vertex_count
    for e in graph.edges:
        f_out[e.tail] += e.weight
        f_in[e.head] += e.weight
    return f_in, f_out


def validate(graph: FlowGraph) -> list[Violation]:
    """Check every flow-graph invariant, returning violations as data.

    An empty list means the graph is a valid flow graph: weights are
    positive integers within the 64-bit range, there are no self-loops,
    the graph is acyclic, and internal vertices conserve flow.
    Disconnected inputs are fine; every rule is local.
    """
    out: list[Violation] = []
    for i, e in enumerate(graph.edges):
        if not isinstance(e.weight, int) or isinstance(e.weight, bool):
            out.append(Violation("non-integer weight", f"edge {i}", f"weight {e.weight!r}"))
            continue
        if e.weight <= 0:
            out.append(Violation("nonpositive weight", f"edge {i}", f"weight {e.weight}"))
        elif e.weight > U64_MAX:
            out.append(Violation("weight overflow", f"edge {i}",
                                 f"weight {e.weight} exceeds unsigned 64-bit range"))
        if e.tail == e.head:
            out.append(Violation("self-loop", f"edge {i}", f"vertex {e.tail}"))

    # Kahn's algorithm; leftovers indicate a cycle.
    indeg = [graph.in_degree(v) for v in range(graph.vertex_count)]
    queue = [v for v in range(graph.vertex_count) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for i in graph.out_edges(v):
            h = graph.edges[i].head
            indeg[h] -= 1
            if indeg[h] == 0:
                queue.append(h)
    if seen != graph.vertex_count:
        cyclic = sorted(v for v in range(graph.vertex_count) if indeg[v] > 0)
        out.append(Violation("cycle", f"vertices {cyclic}", "graph is not a DAG"))

    f_in, f_out = _flow_totals(graph)
    for v in range(graph.vertex_count):
        if f_in[v] == 0 or f_out[v] == 0:
            continue  # sources and sinks are exempt
        if f_in[v] != f_out[v]:
            out.append(Violation("conservation", f"vertex {v}",
                                 f"f_in {f_in[v]} != f_out {f_out[v]}"))
    return out


def aggregates(graph: FlowGraph) -> FlowAggregates:
    """Per-vertex flow totals plus the tie-broken topological order.

    Raises :class:`CycleError` if the graph is not a DAG and
    ``OverflowError`` if a per-vertex total leaves the signed 64-bit
    range.
    """
    f_in, f_out = _flow_totals(graph)
    for v in range(graph.vertex_count):
        if f_in[v] > I64_MAX or f_out[v] > I64_MAX:
            raise OverflowError(f"flow total at vertex {v} exceeds signed 64-bit range")

    indeg = [graph.in_degree(v) for v in range(graph.vertex_count)]
    ready = [v for v in range(graph.vertex_count) if indeg[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for i in graph.out_edges(v):
            h = graph.edges[i].head
            indeg[h] -= 1
            if indeg[h] == 0:
                heapq.heappush(ready, h)
    if len(order) != graph.vertex_count:
        raise CycleError("graph contains a cycle; not a DAG")
    return FlowAggregates(tuple(f_in), tuple(f_out), tuple(order))


def sources_and_sinks(graph: FlowGraph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Vertices with no incoming flow, and vertices with no outgoing flow.

    An isolated vertex is both.
    """
    agg = graph.aggregates()
    sources = tuple(v for v in range(graph.vertex_count) if agg.f_in[v] == 0)
    sinks = tuple(v for v in range(graph.vertex_count) if agg.f_out[v] == 0)
    return sources, sinks


def is_funnel(graph: FlowGraph) -> bool:
    """True iff every source-to-sink path uses at least one private edge.

    An edge is private when exactly one source-to-sink path passes
    through it, i.e. its tail is reached by exactly one path from the
    sources and its head reaches the sinks by exactly one path.  The
    graph is a funnel iff no source-to-sink path avoids private edges
    entirely, which reduces to a reachability check over the non-private
    edges.  Path counts are capped at 2; only "exactly one" matters.
    """
    agg = graph.aggregates()
    n = graph.vertex_count

    paths_from_source = [0] * n
    for v in agg.topo_order:
        if agg.f_in[v] == 0:
            paths_from_source[v] = 1
        else:
            total = sum(paths_from_source[graph.edges[i].tail] for i in graph.in_edges(v))
            paths_from_source[v] = min(2, total)
    paths_to_sink = [0] * n
    for v in reversed(agg.topo_order):
        if agg.f_out[v] == 0:
            paths_to_sink[v] = 1
        else:
            total = sum(paths_to_sink[graph.edges[i].head] for i in graph.out_edges(v))
            paths_to_sink[v] = min(2, total)

    # reached[v]: some source reaches v using only non-private edges
    reached = [False] * n
    for v in agg.topo_order:
        for i in graph.out_edges(v):
            e = graph.edges[i]
            if paths_from_source[e.tail] == 1 and paths_to_sink[e.head] == 1:
                continue  # private edge
            if agg.f_in[v] == 0 or reached[v]:
                reached[e.head] = True
    return not any(reached[v] and agg.f_out[v] == 0 for v in range(n))


def superimpose(
    transcripts: Sequence[Transcript],
    vertex_count: Optional[int] = None,
    name: str = "",
) -> FlowGraph:
    """Overlay weighted vertex paths into a single flow graph.

    Shared edges sum their weights.  A fresh global source and sink are
    appended (ids ``V`` and ``V+1``) with an edge to the first and from
    the last vertex of each transcript; those two vertices are recorded
    in ``aux_vertices``.  The result conserves flow by construction.
    """
    if not transcripts:
        raise ValueError("need at least one transcript")
    for t in transcripts:
        if t.weight <= 0:
            raise ValueError(f"transcript weight must be positive, got {t.weight}")
        if len(t.vertices) < 1:
            raise ValueError("transcript must contain at least one vertex")
    top = max(max(t.vertices) for t in transcripts)
    universe = top + 1 if vertex_count is None else vertex_count
    if universe <= top:
        raise ValueError(f"vertex_count {universe} too small for vertex {top}")
    source, sink = universe, universe + 1

    inner: dict[tuple[int, int], int] = {}
    starts: dict[int, int] = {}
    ends: dict[int, int] = {}
    for t in transcripts:
        for u, v in zip(t.vertices, t.vertices[1:]):
            inner[(u, v)] = inner.get((u, v), 0) + t.weight
        starts[t.vertices[0]] = starts.get(t.vertices[0], 0) + t.weight
        ends[t.vertices[-1]] = ends.get(t.vertices[-1], 0) + t.weight

    edges = [Edge(u, v, w) for (u, v), w in inner.items()]
    edges.extend(Edge(source, v, w) for v, w in starts.items())
    edges.extend(Edge(v, sink, w) for v, w in ends.items())
    return FlowGraph(universe + 2, edges, name=name,
                     aux_vertices=frozenset({source, sink}))
