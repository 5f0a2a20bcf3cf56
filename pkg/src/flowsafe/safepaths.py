"""Producers of safe paths: unitigs, extended unitigs, the complete
two-pointer enumeration over a candidate decomposition, and a brute-force
oracle for small instances.

A path is safe when some positive amount of flow is guaranteed to
traverse all of it in every flow decomposition, which holds exactly when
its excess flow is positive.  A safe path is maximal when any one-edge
extension in the graph makes it unsafe.  All maximal safe paths can be
found by scanning each path of one arbitrary decomposition with a
two-pointer window, because every maximal safe path occurs inside every
decomposition; windows are then deduplicated across host paths (see
:mod:`flowsafe.represent`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .decompose import Decomposition
from .graph import FlowGraph, Path
from .safety import excess_flow


class OracleSizeError(ValueError):
    """The instance is too large for the exhaustive oracle."""


@dataclass(frozen=True)
class MaximalSafeWindow:
    """A maximal positive-excess interval of one decomposition path.

    ``left``/``right`` are inclusive edge positions within the host
    path; ``excess`` is the window's exact excess flow.
    """

    host_index: int
    left: int
    right: int
    excess: int


def window_path(decomposition: Decomposition, window: MaximalSafeWindow) -> Path:
    return decomposition.paths[window.host_index].path.subpath(window.left, window.right)


def unitigs(graph: FlowGraph, include_single_edges: bool = False) -> list[Path]:
    """All maximal paths whose internal vertices have indegree 1 and
    outdegree 1.  Single-edge results are excluded by default."""
    agg = graph.aggregates()

    def chain_internal(v: int) -> bool:
        return graph.in_degree(v) == 1 and graph.out_degree(v) == 1

    out: list[Path] = []
    for start in range(len(graph.edges)):
        if chain_internal(graph.edges[start].tail):
            continue  # interior edge of some chain; the chain start emits it
        edge_ids = [start]
        v = graph.edges[start].head
        while chain_internal(v):
            nxt = graph.out_edges(v)[0]
            edge_ids.append(nxt)
            v = graph.edges[nxt].head
        if len(edge_ids) >= 2 or include_single_edges:
            out.append(Path(tuple(edge_ids)))
    return out


def extended_unitigs(graph: FlowGraph) -> list[Path]:
    """Unitigs (single edges included) extended left through unit-indegree
    junctions and right through unit-outdegree junctions, deduplicated."""
    out: list[Path] = []
    seen: set[tuple[int, ...]] = set()
    for seed in unitigs(graph, include_single_edges=True):
        edge_ids = list(seed.edges)
        first = graph.edges[edge_ids[0]].tail
        while graph.in_degree(first) == 1:
            prev = graph.in_edges(first)[0]
            edge_ids.insert(0, prev)
            first = graph.edges[prev].tail
        last = graph.edges[edge_ids[-1]].head
        while graph.out_degree(last) == 1:
            nxt = graph.out_edges(last)[0]
            edge_ids.append(nxt)
            last = graph.edges[nxt].head
        key = tuple(edge_ids)
        if key not in seen:
            seen.add(key)
            out.append(Path(key))
    return out


def safe_and_complete(
    graph: FlowGraph,
    decomposition: Decomposition,
    include_single_edges: bool = True,
) -> list[MaximalSafeWindow]:
    """Every maximal positive-excess window of every decomposition path.

    Each host path is scanned once: the window grows to the right while
    its excess stays positive (O(1) updates), a window is reported the
    moment the next edge would drop the excess to zero or below, and the
    left end then advances until the excess is positive again.  Reported
    windows have strictly increasing left and right ends, so no window
    contains another from the same host.  Set ``include_single_edges``
    to False to drop one-edge windows, mirroring evaluation setups that
    ignore single edges.
    """
    agg = graph.aggregates()
    edges = graph.edges
    windows: list[MaximalSafeWindow] = []
    for host_index, wp in enumerate(decomposition.paths):
        host = wp.path.edges
        if not host:
            continue
        last = len(host) - 1
        left = right = 0
        excess = edges[host[0]].weight
        while True:
            if right == last:
                windows.append(MaximalSafeWindow(host_index, left, right, excess))
                break
            nxt = edges[host[right + 1]]
            delta = nxt.weight - agg.f_out[nxt.tail]
            if excess + delta > 0:
                right += 1
                excess += delta
                continue
            windows.append(MaximalSafeWindow(host_index, left, right, excess))
            right += 1
            excess += delta
            while excess <= 0:
                dropped = edges[host[left]]
                excess += agg.f_in[dropped.head] - dropped.weight
                left += 1
    if not include_single_edges:
        windows = [w for w in windows if w.left != w.right]
    return windows


def all_st_paths(graph: FlowGraph) -> list[Path]:
    """Every source-to-sink edge path.  Exponential; small graphs only."""
    agg = graph.aggregates()
    out: list[Path] = []
    acc: list[int] = []

    def walk(v: int) -> None:
        if agg.f_out[v] == 0:
            if acc:
                out.append(Path(tuple(acc)))
            return
        for i in graph.out_edges(v):
            acc.append(i)
            walk(graph.edges[i].head)
            acc.pop()

    for s in range(graph.vertex_count):
        if agg.f_in[s] == 0:
            walk(s)
    return out


def all_simple_paths(graph: FlowGraph) -> list[Path]:
    """Every simple edge path (any endpoints).  Exponential; small graphs only."""
    out: list[Path] = []
    acc: list[int] = []

    def walk(v: int) -> None:
        for i in graph.out_edges(v):
            acc.append(i)
            out.append(Path(tuple(acc)))
            walk(graph.edges[i].head)
            acc.pop()

    for v in range(graph.vertex_count):
        walk(v)
    return out


def _guard(graph: FlowGraph, max_vertices: int, max_total_flow: int) -> None:
    agg = graph.aggregates()
    total = sum(agg.f_out[v] for v in range(graph.vertex_count) if agg.f_in[v] == 0)
    if graph.vertex_count > max_vertices or total > max_total_flow:
        raise OracleSizeError(
            f"instance too large for exhaustive oracle: {graph.vertex_count} vertices "
            f"(max {max_vertices}), total flow {total} (max {max_total_flow})")


def unit_decompositions(
    graph: FlowGraph,
    max_vertices: int = 8,
    max_total_flow: int = 8,
) -> list[tuple[tuple[int, ...], ...]]:
    """Every decomposition of the flow into unit-weight source-to-sink
    paths, each as a lexicographically sorted tuple of edge-id tuples.

    Enumeration picks paths in nondecreasing order so each multiset
    appears exactly once.  Guarded by instance size.
    """
    _guard(graph, max_vertices, max_total_flow)
    agg = graph.aggregates()
    residual = [e.weight for e in graph.edges]
    remaining = sum(residual)
    sources = [v for v in range(graph.vertex_count) if agg.f_in[v] == 0]

    def residual_paths() -> list[tuple[int, ...]]:
        found: list[tuple[int, ...]] = []
        acc: list[int] = []

        def walk(v: int) -> None:
            if agg.f_out[v] == 0:
                if acc:
                    found.append(tuple(acc))
                return
            for i in graph.out_edges(v):
                if residual[i] > 0:
                    acc.append(i)
                    walk(graph.edges[i].head)
                    acc.pop()

        for s in sources:
            walk(s)
        found.sort()
        return found

    results: list[tuple[tuple[int, ...], ...]] = []
    chosen: list[tuple[int, ...]] = []

    def recurse(floor: tuple[int, ...]) -> None:
        nonlocal remaining
        if remaining == 0:
            results.append(tuple(chosen))
            return
        for p in residual_paths():
            if p < floor:
                continue
            for i in p:
                residual[i] -= 1
            remaining -= len(p)
            chosen.append(p)
            recurse(p)
            chosen.pop()
            remaining += len(p)
            for i in p:
                residual[i] += 1

    recurse(())
    return results


def _contains(big: tuple[int, ...], small: tuple[int, ...]) -> bool:
    if len(small) > len(big):
        return False
    return any(big[i:i + len(small)] == small for i in range(len(big) - len(small) + 1))


def min_decomposition_cover(
    path: Path,
    decompositions: Iterable[tuple[tuple[int, ...], ...]],
) -> int:
    """The smallest number of paths containing ``path`` over the given
    unit decompositions: the largest weight the path is safe for."""
    best: Optional[int] = None
    target = path.edges
    for d in decompositions:
        count = sum(1 for p in d if _contains(p, target))
        if best is None or count < best:
            best = count
        if best == 0:
            break
    if best is None:
        raise ValueError("no decompositions supplied")
    return best


def _drop_contained(paths: Sequence[Path]) -> list[Path]:
    keep = []
    for p in paths:
        if any(q.edges != p.edges and _contains(q.edges, p.edges) for q in paths):
            continue
        keep.append(p)
    return keep


def oracle_safe_paths(
    graph: FlowGraph,
    max_vertices: int = 8,
    max_total_flow: int = 8,
) -> list[Path]:
    """All maximal safe paths, by brute force, for small instances.

    Two independent routes are computed and cross-checked: (a) keep the
    simple paths with positive excess flow and drop those contained in a
    longer kept path; (b) keep the simple paths contained in at least
    one path of *every* exhaustive unit-weight decomposition, and drop
    contained ones.  A mismatch raises, since it would mean the excess
    characterization and the defining property disagree.
    """
    _guard(graph, max_vertices, max_total_flow)
    simple = all_simple_paths(graph)
    by_excess = _drop_contained([p for p in simple if excess_flow(graph, p) > 0])

    decomps = unit_decompositions(graph, max_vertices, max_total_flow)
    by_definition = _drop_contained(
        [p for p in simple if min_decomposition_cover(p, decomps) >= 1])

    if {p.edges for p in by_excess} != {p.edges for p in by_definition}:
        raise RuntimeError("oracle self-check failed: excess-based and "
                           "decomposition-based safe sets differ")
    return sorted(by_excess, key=lambda p: p.edges)
