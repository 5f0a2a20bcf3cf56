"""Excess flow of a path, the safety test it induces, and O(1) window updates.

The excess flow of a path is the amount of flow that must traverse the
whole path in every decomposition of the graph's flow into weighted
source-to-sink paths: the flow entering on the first edge minus the
worst-case leakage at internal vertices.  Two equivalent formulations
exist; with ``u_1..u_k`` the path's vertices and ``e_1..e_{k-1}`` its
edges,

    diverging:   sum f(e_i)  -  sum f_out(u_i)   for internal u_i
    converging:  sum f(e_i)  -  sum f_in(u_i)    for internal u_i

which agree on valid flow graphs by conservation.  A single-edge path
has no internal vertices, so its excess is the edge weight itself.

A path is safe for ``w`` units exactly when its excess flow is at least
``w`` (with ``w > 0``); the exact excess is therefore the largest
weight for which the path is safe.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graph import FlowGraph, Path, check_path


def excess_flow(graph: FlowGraph, path: Path, formulation: str = "diverging") -> int:
    """Exact excess flow of ``path``; may be negative.

    Runs in time linear in the path length after the graph's cached
    per-vertex totals are built.  Raises ValueError if the edge sequence
    is not a contiguous path of the graph.
    """
    check_path(graph, path.edges)
    agg = graph.aggregates()
    total = sum(graph.edges[i].weight for i in path.edges)
    internal = path.vertices(graph)[1:-1]
    if formulation == "diverging":
        return total - sum(agg.f_out[v] for v in internal)
    if formulation == "converging":
        return total - sum(agg.f_in[v] for v in internal)
    raise ValueError(f"unknown formulation {formulation!r}")


def is_w_safe(graph: FlowGraph, path: Path, w: int) -> bool:
    """True iff at least ``w`` units of flow traverse ``path`` in every
    decomposition.  ``w`` must be positive."""
    if w <= 0:
        raise ValueError(f"safety weight must be positive, got {w}")
    return excess_flow(graph, path) >= w


def verify_path(graph: FlowGraph, path: Path) -> tuple[bool, int]:
    """(safe, excess): whether the path is safe at all, and the exact
    number of flow units guaranteed across it."""
    ex = excess_flow(graph, path)
    return ex > 0, ex


@dataclass(frozen=True)
class SafetyWindow:
    """A contiguous edge interval of a host path with its current excess.

    Windows are immutable values; :meth:`extend_right` and
    :meth:`shrink_left` return new windows and update the excess in
    O(1):

    * appending edge ``(u, v)`` changes the excess by ``f(u,v) - f_out(u)``
    * removing the leftmost edge ``(u, v)`` changes it by ``f_in(v) - f(u,v)``
    """

    graph: FlowGraph
    host: Path
    left: int
    right: int
    excess: int

    @classmethod
    def single_edge(cls, graph: FlowGraph, host: Path, index: int) -> "SafetyWindow":
        check_path(graph, host.edges)
        if not (0 <= index < len(host.edges)):
            raise IndexError(f"edge index {index} outside host path")
        return cls(graph, host, index, index, graph.edges[host.edges[index]].weight)

    @classmethod
    def from_span(cls, graph: FlowGraph, host: Path, left: int, right: int) -> "SafetyWindow":
        ex = excess_flow(graph, host.subpath(left, right))
        return cls(graph, host, left, right, ex)

    def path(self) -> Path:
        return self.host.subpath(self.left, self.right)

    def extend_right(self, edge_id: Optional[int] = None) -> "SafetyWindow":
        """Grow the window by the next host edge (which ``edge_id``, if
        given, must match)."""
        if self.right + 1 >= len(self.host.edges):
            raise ValueError("window already ends at the host path's last edge")
        nxt = self.host.edges[self.right + 1]
        if edge_id is not None and edge_id != nxt:
            raise ValueError(f"edge {edge_id} does not continue the window; expected {nxt}")
        e = self.graph.edges[nxt]
        agg = self.graph.aggregates()
        return SafetyWindow(self.graph, self.host, self.left, self.right + 1,
                            self.excess + e.weight - agg.f_out[e.tail])

    def shrink_left(self) -> "SafetyWindow":
        """Drop the leftmost edge; single-edge windows cannot shrink."""
        if self.left == self.right:
            raise ValueError("cannot shrink a single-edge window")
        dropped = self.graph.edges[self.host.edges[self.left]]
        agg = self.graph.aggregates()
        return SafetyWindow(self.graph, self.host, self.left + 1, self.right,
                            self.excess + agg.f_in[dropped.head] - dropped.weight)
