"""Aho-Corasick automaton over sequences of hashable tokens.

The classic multi-pattern matcher, generalized from character strings to
arbitrary token sequences (here: edge-id sequences of paths).  Three
phases:

    1. goto trie: insert each pattern token by token;
    2. failure links, computed breadth-first: on a mismatch at a node,
       the link points to the node for the longest proper suffix of the
       current position that is also a pattern prefix;
    3. output lists: each node reports its own patterns plus everything
       reachable along its failure chain, so one scan of a text yields
       every pattern occurrence.

One scan of all patterns through the finished automaton is enough to
find every pattern that occurs inside another, which is how duplicate
and contained safe paths are discarded in near-linear total time.
"""
from __future__ import annotations

from collections import deque
from typing import Hashable, Iterator, Sequence

Token = Hashable


class AhoCorasick:
    """Multi-pattern matcher; add patterns, build once, then scan."""

    def __init__(self) -> None:
        self._children: list[dict[Token, int]] = [{}]
        self._fail: list[int] = [0]
        self._out: list[list[int]] = [[]]
        self._lengths: list[int] = []
        self._built = False

    @property
    def pattern_count(self) -> int:
        return len(self._lengths)

    def add(self, tokens: Sequence[Token]) -> int:
        """Insert a pattern; returns its id.  Invalidates a prior build."""
        if not tokens:
            raise ValueError("empty pattern")
        node = 0
        for t in tokens:
            nxt = self._children[node].get(t)
            if nxt is None:
                nxt = len(self._children)
                self._children.append({})
                self._fail.append(0)
                self._out.append([])
                self._children[node][t] = nxt
            node = nxt
        pid = len(self._lengths)
        self._lengths.append(len(tokens))
        self._out[node].append(pid)
        self._built = False
        return pid

    def build(self) -> None:
        """Compute failure links and merge output lists breadth-first."""
        queue: deque[int] = deque()
        for child in self._children[0].values():
            self._fail[child] = 0
            queue.append(child)
        while queue:
            node = queue.popleft()
            for token, child in self._children[node].items():
                fallback = self._fail[node]
                while fallback and token not in self._children[fallback]:
                    fallback = self._fail[fallback]
                self._fail[child] = self._children[fallback].get(token, 0)
                if self._fail[child] == child:
                    self._fail[child] = 0
                self._out[child] = self._out[child] + self._out[self._fail[child]]
                queue.append(child)
        self._built = True

    def scan(self, tokens: Sequence[Token]) -> Iterator[tuple[int, int]]:
        """Yield ``(end_position, pattern_id)`` for every occurrence."""
        if not self._built:
            raise RuntimeError("build() must run before scanning")
        node = 0
        for pos, t in enumerate(tokens):
            while node and t not in self._children[node]:
                node = self._fail[node]
            node = self._children[node].get(t, 0)
            for pid in self._out[node]:
                yield pos, pid


def drop_duplicates_and_contained(patterns: Sequence[Sequence[Token]]) -> list[int]:
    """Indices of patterns that survive duplicate and containment removal.

    A pattern is dropped when an identical pattern appeared earlier, or
    when it occurs as a contiguous subsequence of a strictly longer
    pattern.  Survivors keep their input order.
    """
    first_of: dict[tuple[Token, ...], int] = {}
    unique: list[int] = []
    for idx, pat in enumerate(patterns):
        key = tuple(pat)
        if key in first_of:
            continue
        first_of[key] = idx
        unique.append(idx)

    ac = AhoCorasick()
    ids = {}
    for idx in unique:
        ids[ac.add(patterns[idx])] = idx
    ac.build()

    dropped: set[int] = set()
    for idx in unique:
        for _, pid in ac.scan(patterns[idx]):
            inner = ids[pid]
            if inner != idx:
                dropped.add(inner)
    return [idx for idx in unique if idx not in dropped]
