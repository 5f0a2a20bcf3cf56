"""Evaluation metrics: weighted precision, maximum relative coverage, F-score.

A reported path is *correct* when its vertex sequence occurs contiguously
inside some ground-truth transcript.  Weighted precision is the total
length of correct reported paths over the total length of all reported
paths; maximum relative coverage averages, over the transcripts, the
longest contiguous fragment of any reported path inside the transcript
relative to the transcript's length; the F-score is their harmonic mean.

Lengths are measured either in ``nodes`` (vertex counts) or in ``bases``
(summed per-vertex lengths, which requires ``node_lengths`` on the
graph).  Artificial endpoint vertices recorded in ``graph.aux_vertices``
contribute nothing to any length.  All arithmetic is exact rational
arithmetic; render to decimals only at output.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .graph import FlowGraph, Transcript

UNITS = ("nodes", "bases")


@dataclass(frozen=True)
class GroundTruth:
    """The weighted transcripts whose superimposition built a graph."""

    transcripts: tuple[Transcript, ...]

    @property
    def k(self) -> int:
        return len(self.transcripts)


@dataclass(frozen=True)
class MetricRow:
    graph_id: str
    k: int
    algorithm: str
    unit: str
    coverage: Fraction
    precision: Fraction
    fscore: Fraction


@dataclass(frozen=True)
class SummaryRow:
    algorithm: str
    bucket: str
    count: int
    share: Fraction
    coverage: Fraction
    precision: Fraction
    fscore: Fraction


def _measure(graph: FlowGraph, unit: str):
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}, got {unit!r}")
    if unit == "bases":
        if graph.node_lengths is None:
            raise ValueError("bases unit requires node lengths on the graph")
        lengths = graph.node_lengths
        return lambda v: 0 if v in graph.aux_vertices else lengths.get(v, 0)
    return lambda v: 0 if v in graph.aux_vertices else 1


def path_length(vertices: Sequence[int], graph: FlowGraph, unit: str = "nodes") -> int:
    """Length of a vertex sequence in the chosen unit, skipping auxiliary
    endpoint vertices."""
    m = _measure(graph, unit)
    return sum(m(v) for v in vertices)


def _occurs(needle: Sequence[int], hay: Sequence[int]) -> bool:
    n, h = len(needle), len(hay)
    if n > h:
        return False
    needle = tuple(needle)
    return any(tuple(hay[i:i + n]) == needle for i in range(h - n + 1))


def longest_common_segment(
    reported: Sequence[int],
    transcript: Sequence[int],
    graph: FlowGraph,
    unit: str = "nodes",
) -> int:
    """Measured length of the longest contiguous vertex run shared by the
    two sequences.  Matching uses raw vertex ids; only the measure skips
    auxiliary vertices."""
    m = _measure(graph, unit)
    t = tuple(transcript)
    prefix = [0] * (len(t) + 1)
    for j, v in enumerate(t):
        prefix[j + 1] = prefix[j] + m(v)
    best = 0
    prev = [0] * (len(t) + 1)
    for rv in reported:
        cur = [0] * (len(t) + 1)
        for j, tv in enumerate(t):
            if rv == tv:
                run = prev[j] + 1
                cur[j + 1] = run
                length = prefix[j + 1] - prefix[j + 1 - run]
                if length > best:
                    best = length
        prev = cur
    return best


def weighted_precision(
    reported: Iterable[Sequence[int]],
    truth: GroundTruth,
    graph: FlowGraph,
    unit: str = "nodes",
) -> Fraction:
    """Length share of reported paths that occur inside some transcript.

    An empty report (or one of total length zero) counts as precision 1.
    """
    total = 0
    correct = 0
    transcripts = [t.vertices for t in truth.transcripts]
    for r in reported:
        length = path_length(r, graph, unit)
        total += length
        if any(_occurs(r, t) for t in transcripts):
            correct += length
    if total == 0:
        return Fraction(1)
    return Fraction(correct, total)


def max_relative_coverage(
    reported: Iterable[Sequence[int]],
    truth: GroundTruth,
    graph: FlowGraph,
    unit: str = "nodes",
) -> Fraction:
    """Average over transcripts of the longest reported fragment inside
    the transcript, relative to the transcript's length.

    Zero-length transcripts are excluded with a warning.
    """
    reported = list(reported)
    ratios: list[Fraction] = []
    for t in truth.transcripts:
        denom = path_length(t.vertices, graph, unit)
        if denom == 0:
            warnings.warn(f"transcript {t.vertices} has zero length in unit "
                          f"{unit!r}; excluded from coverage")
            continue
        best = max((longest_common_segment(r, t.vertices, graph, unit)
                    for r in reported), default=0)
        ratios.append(Fraction(best, denom))
    if not ratios:
        return Fraction(0)
    return sum(ratios, Fraction(0)) / len(ratios)


def f_score(coverage: Fraction, precision: Fraction) -> Fraction:
    """Harmonic mean; zero when both inputs are zero."""
    if coverage + precision == 0:
        return Fraction(0)
    return 2 * coverage * precision / (coverage + precision)


def compute_row(
    graph_id: str,
    algorithm: str,
    reported: Iterable[Sequence[int]],
    truth: GroundTruth,
    graph: FlowGraph,
    unit: str = "nodes",
) -> MetricRow:
    reported = list(reported)
    cov = max_relative_coverage(reported, truth, graph, unit)
    prec = weighted_precision(reported, truth, graph, unit)
    return MetricRow(graph_id, truth.k, algorithm, unit, cov, prec, f_score(cov, prec))


DEFAULT_BUCKETS: tuple[tuple[int, Optional[int]], ...] = ((2, 10), (11, None))


def _bucket_label(lo: int, hi: Optional[int]) -> str:
    if hi is None:
        return f"k>={lo}"
    return f"{lo}<=k<={hi}"


def summarize(
    rows: Iterable[MetricRow],
    k_buckets: Sequence[tuple[int, Optional[int]]] = DEFAULT_BUCKETS,
) -> list[SummaryRow]:
    """Per-algorithm averages within each k bucket plus an overall bucket.

    Bucket shares are the population fraction of rows (per algorithm)
    landing in the bucket, relative to all bucketed rows.  Empty buckets
    are omitted.
    """
    rows = list(rows)
    algorithms = sorted({r.algorithm for r in rows})
    buckets = [(lo, hi, _bucket_label(lo, hi)) for lo, hi in k_buckets]
    out: list[SummaryRow] = []
    for alg in algorithms:
        mine = [r for r in rows if r.algorithm == alg]
        in_any = [r for r in mine
                  if any(lo <= r.k and (hi is None or r.k <= hi) for lo, hi, _ in buckets)]
        groups = [("all", in_any)]
        groups += [(label, [r for r in in_any if lo <= r.k and (hi is None or r.k <= hi)])
                   for lo, hi, label in buckets]
        for label, members in groups:
            if not members:
                continue
            n = len(members)
            out.append(SummaryRow(
                algorithm=alg,
                bucket=label,
                count=n,
                share=Fraction(n, len(in_any)) if in_any else Fraction(0),
                coverage=sum((r.coverage for r in members), Fraction(0)) / n,
                precision=sum((r.precision for r in members), Fraction(0)) / n,
                fscore=sum((r.fscore for r in members), Fraction(0)) / n,
            ))
    return out
