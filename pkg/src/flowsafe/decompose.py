"""Candidate flow decompositions: classical path peeling and greedy-width.

Both algorithms repeatedly extract a source-to-sink path from a private
residual copy of the edge weights and subtract its weight, until every
residual is zero.  Peeling follows the first positive-residual out-edge
in edge-id order and removes the path's bottleneck; greedy-width removes
the path with the largest bottleneck, found by a widest-path dynamic
program over the topological order.  Tie-breaking is deterministic
everywhere (smallest edge id, smallest sink id), so outputs are
reproducible across runs and platforms.
"""
from __future__ import annotations

from dataclasses import dataclass

from .graph import FlowGraph, Path, check_path


class DecompositionError(RuntimeError):
    """Residual flow got stuck; the input graph violated conservation."""


@dataclass(frozen=True)
class WeightedPath:
    """A source-to-sink path carrying a positive number of flow units."""

    path: Path
    weight: int


@dataclass(frozen=True)
class Decomposition:
    """Weighted source-to-sink paths whose weights sum to every edge's flow."""

    paths: tuple[WeightedPath, ...]

    @property
    def k(self) -> int:
        return len(self.paths)

    def total_edges(self) -> int:
        return sum(len(p.path) for p in self.paths)


def _total_flow(graph: FlowGraph) -> int:
    agg = graph.aggregates()
    return sum(agg.f_out[v] for v in range(graph.vertex_count) if agg.f_in[v] == 0)


def peel_decomposition(graph: FlowGraph) -> Decomposition:
    """Decompose by repeatedly peeling the first positive-residual path.

    Each extracted path is assigned the minimum residual weight along it,
    which zeroes at least one edge, so at most m paths are produced.
    """
    agg = graph.aggregates()
    n = graph.vertex_count
    residual = [e.weight for e in graph.edges]
    remaining = sum(residual)
    if remaining == 0:
        raise ValueError("graph carries no flow")
    res_out = list(agg.f_out)
    sources = [v for v in range(n) if agg.f_in[v] == 0]
    cursor = [0] * n  # per-vertex skip index over spent out-edges
    paths: list[WeightedPath] = []
    si = 0
    while remaining > 0:
        while si < len(sources) and res_out[sources[si]] == 0:
            si += 1
        if si == len(sources):
            raise DecompositionError("positive residual left but no source can emit")
        v = sources[si]
        edge_ids: list[int] = []
        while agg.f_out[v] != 0:
            outs = graph.out_edges(v)
            c = cursor[v]
            while c < len(outs) and residual[outs[c]] == 0:
                c += 1
            cursor[v] = c
            if c == len(outs):
                raise DecompositionError(f"residual stuck at vertex {v}")
            edge_ids.append(outs[c])
            v = graph.edges[outs[c]].head
        w = min(residual[i] for i in edge_ids)
        for i in edge_ids:
            residual[i] -= w
            res_out[graph.edges[i].tail] -= w
        remaining -= w * len(edge_ids)
        paths.append(WeightedPath(Path(tuple(edge_ids)), w))
    return Decomposition(tuple(paths))


def greedy_width(graph: FlowGraph) -> Decomposition:
    """Decompose by repeatedly removing the widest source-to-sink path.

    Width of a path is its bottleneck: the minimum residual weight along
    it.  Each round computes, for every vertex, the widest way to reach
    it from any source, then extracts the widest path into any sink with
    exactly its bottleneck weight.
    """
    agg = graph.aggregates()
    n = graph.vertex_count
    residual = [e.weight for e in graph.edges]
    remaining = sum(residual)
    if remaining == 0:
        raise ValueError("graph carries no flow")
    infinity = remaining + 1
    is_source = [agg.f_in[v] == 0 for v in range(n)]
    sinks = [v for v in range(n) if agg.f_out[v] == 0]
    paths: list[WeightedPath] = []
    while remaining > 0:
        width = [infinity if is_source[v] else 0 for v in range(n)]
        parent = [-1] * n
        for v in agg.topo_order:
            if width[v] == 0:
                continue
            for i in graph.out_edges(v):
                if residual[i] == 0:
                    continue
                cand = min(width[v], residual[i])
                h = graph.edges[i].head
                if cand > width[h]:
                    width[h] = cand
                    parent[h] = i
        best = -1
        for v in sinks:
            if parent[v] != -1 and (best == -1 or width[v] > width[best]):
                best = v
        if best == -1:
            raise DecompositionError("positive residual left but no path reaches a sink")
        w = width[best]
        edge_ids: list[int] = []
        v = best
        while parent[v] != -1:
            edge_ids.append(parent[v])
            v = graph.edges[parent[v]].tail
        edge_ids.reverse()
        for i in edge_ids:
            residual[i] -= w
        remaining -= w * len(edge_ids)
        paths.append(WeightedPath(Path(tuple(edge_ids)), w))
    return Decomposition(tuple(paths))


def validate_decomposition(graph: FlowGraph, decomposition: Decomposition) -> bool:
    """True iff per-edge weight sums match the graph's flow exactly and
    every path runs source to sink with positive weight."""
    agg = graph.aggregates()
    covered = [0] * len(graph.edges)
    for wp in decomposition.paths:
        if wp.weight <= 0:
            return False
        try:
            check_path(graph, wp.path.edges)
        except ValueError:
            return False
        vs = wp.path.vertices(graph)
        if agg.f_in[vs[0]] != 0 or agg.f_out[vs[-1]] != 0:
            return False
        for i in wp.path.edges:
            covered[i] += wp.weight
    return all(covered[i] == e.weight for i, e in enumerate(graph.edges))
