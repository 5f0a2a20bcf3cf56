"""Concise reporting of maximal safe paths.

The raw output of the window scan lists one maximal safe path per
window, with heavy repetition across decomposition paths.  The concise
form keeps, per host path, one *carrier* sub-path for each run of
edge-overlapping windows, annotated with the windows as index intervals,
and then removes duplicate and contained paths across hosts with an
Aho-Corasick automaton over edge-id sequences.  Matching on edge ids
(not vertex ids) keeps two safe paths distinct when they differ only in
which of two parallel edges they use.

Carriers merge only windows that share at least one edge.  Windows that
merely touch at a vertex stay separate, which keeps the total carrier
length minimal (a union of edge-disjoint windows would repeat nothing
but would still be reported as one longer path).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .ahocorasick import drop_duplicates_and_contained
from .decompose import Decomposition, peel_decomposition
from .graph import FlowGraph, Path
from .safepaths import MaximalSafeWindow, safe_and_complete


@dataclass(frozen=True)
class WindowInterval:
    """One maximal safe path inside a carrier, as inclusive edge offsets."""

    left: int
    right: int
    excess: int


@dataclass(frozen=True)
class ConciseEntry:
    """A minimal-length sub-path of one decomposition path that carries
    one or more maximal safe paths."""

    host_index: int
    host_offset: int  # edge position of the carrier within the host path
    carrier: Path
    intervals: tuple[WindowInterval, ...]


@dataclass(frozen=True)
class SafePathRecord:
    """One maximal safe path with its exact excess and originating host."""

    path: Path
    excess: int
    host_index: int


@dataclass(frozen=True)
class SafeReport:
    """Maximal safe paths, both flat and in concise carrier form."""

    raw: tuple[SafePathRecord, ...]
    concise: tuple[ConciseEntry, ...]

    def total_raw_edges(self) -> int:
        return sum(len(r.path) for r in self.raw)

    def total_concise_edges(self) -> int:
        return sum(len(e.carrier) for e in self.concise)


def _group_host_windows(
    host: Path,
    host_index: int,
    windows: Sequence[MaximalSafeWindow],
) -> list[ConciseEntry]:
    entries: list[ConciseEntry] = []
    group: list[MaximalSafeWindow] = []

    def flush() -> None:
        if not group:
            return
        start = group[0].left
        end = max(w.right for w in group)
        carrier = host.subpath(start, end)
        intervals = tuple(WindowInterval(w.left - start, w.right - start, w.excess)
                          for w in group)
        entries.append(ConciseEntry(host_index, start, carrier, intervals))

    for w in sorted(windows, key=lambda w: (w.left, w.right)):
        if group and w.left <= max(g.right for g in group):
            group.append(w)
        else:
            flush()
            group = [w]
    flush()
    return entries


def merge_windows(
    decomposition: Decomposition,
    windows: Sequence[MaximalSafeWindow],
) -> list[ConciseEntry]:
    """Collapse edge-overlapping windows of each host into carriers."""
    by_host: dict[int, list[MaximalSafeWindow]] = {}
    for w in windows:
        by_host.setdefault(w.host_index, []).append(w)
    entries: list[ConciseEntry] = []
    for host_index in sorted(by_host):
        host = decomposition.paths[host_index].path
        entries.extend(_group_host_windows(host, host_index, by_host[host_index]))
    return entries


def dedup(entries: Sequence[ConciseEntry]) -> SafeReport:
    """Remove duplicate and contained safe paths across carriers.

    Every interval of every carrier is matched as an edge-id sequence;
    exact duplicates and paths occurring inside a longer one are
    dropped.  Surviving windows are regrouped into carriers, so a
    carrier whose intervals were all removed disappears and a carrier
    that lost interior windows may split.
    """
    flat: list[tuple[ConciseEntry, WindowInterval, tuple[int, ...]]] = []
    for entry in entries:
        for iv in entry.intervals:
            flat.append((entry, iv, entry.carrier.edges[iv.left:iv.right + 1]))

    survivors = drop_duplicates_and_contained([seq for _, _, seq in flat])

    raw: list[SafePathRecord] = []
    regrouped: list[ConciseEntry] = []
    pending: list[MaximalSafeWindow] = []
    pending_entry: Optional[ConciseEntry] = None

    def flush() -> None:
        if pending_entry is not None and pending:
            host_like = pending_entry.carrier
            # windows are carrier-relative here; regroup within the carrier
            regrouped.extend(
                ConciseEntry(e.host_index, e.host_offset + pending_entry.host_offset,
                             e.carrier, e.intervals)
                for e in _group_host_windows(host_like, pending_entry.host_index, pending)
            )

    for idx in survivors:
        entry, iv, seq = flat[idx]
        raw.append(SafePathRecord(Path(seq), iv.excess, entry.host_index))
        if entry is not pending_entry:
            flush()
            pending_entry = entry
            pending = []
        pending.append(MaximalSafeWindow(entry.host_index, iv.left, iv.right, iv.excess))
    flush()
    return SafeReport(tuple(raw), tuple(regrouped))


def safe_report(
    graph: FlowGraph,
    decomposition: Optional[Decomposition] = None,
    include_single_edges: bool = True,
) -> SafeReport:
    """Scan, merge, and deduplicate in one call.

    When no decomposition is given, the peeling decomposition is used;
    the deduplicated result does not depend on that choice, because
    every maximal safe path occurs inside every decomposition.
    """
    if decomposition is None:
        decomposition = peel_decomposition(graph)
    windows = safe_and_complete(graph, decomposition,
                                include_single_edges=include_single_edges)
    return dedup(merge_windows(decomposition, windows))
