"""Maximum-cardinality matching on the compatibility graph."""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import NamedTuple, Optional

import numpy as np

from . import kernels
from .compat import CompatibilityGraph


@dataclass(frozen=True)
class Matching:
    """Set of (drop-off, pickup) edges, 1-based, sorted by drop-off index."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted((int(i), int(j)) for i, j in self.pairs)))

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def successor(self):
        return MappingProxyType(dict(self.pairs))

    @property
    def predecessor(self):
        return MappingProxyType({j: i for i, j in self.pairs})

    def arrays(self, n: int):
        """0-based ``(match_l, match_r)``; assumes the pairs are a valid matching."""
        match_l = np.full(n, -1, np.int64)
        match_r = np.full(n, -1, np.int64)
        for i, j in self.pairs:
            match_l[i - 1] = j - 1
            match_r[j - 1] = i - 1
        return match_l, match_r

    @classmethod
    def from_arrays(cls, match_l) -> "Matching":
        return cls(tuple((i + 1, int(j) + 1) for i, j in enumerate(match_l) if j >= 0))


def max_matching(graph: CompatibilityGraph) -> Matching:
    """Hopcroft-Karp; drop-offs and adjacency are scanned in ascending order,
    so the result depends only on the graph."""
    match_l, _ = kernels.hopcroft_karp(graph.n, graph.indptr, graph.indices)
    return Matching.from_arrays(match_l)


class MatchingCheck(NamedTuple):
    ok: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok


NON_EDGE = "non-edge pair"
DUPLICATE_ENDPOINT = "duplicate endpoint"
AUGMENTING_PATH = "augmenting path found"


def check_matching(graph: CompatibilityGraph, matching: Matching, *, maximum: bool = True) -> MatchingCheck:
    """Structural check, plus maximality when ``maximum`` is set.

    Maximality is decided by alternating reachability from the free drop-off
    nodes, not by rerunning the matcher.
    """
    seen_d: set = set()
    seen_p: set = set()
    for i, j in matching.pairs:
        if not (1 <= i <= graph.n and 1 <= j <= graph.n) or not graph.has_edge(i, j):
            return MatchingCheck(False, NON_EDGE)
        if i in seen_d or j in seen_p:
            return MatchingCheck(False, DUPLICATE_ENDPOINT)
        seen_d.add(i)
        seen_p.add(j)
    if maximum:
        match_l, match_r = matching.arrays(graph.n)
        _, zp = kernels.alternating_reach(graph.n, graph.indptr, graph.indices, match_l, match_r)
        if np.any(zp & (match_r < 0)):
            return MatchingCheck(False, AUGMENTING_PATH)
    return MatchingCheck(True)


def verify_matching(graph: CompatibilityGraph, matching: Matching) -> MatchingCheck:
    return check_matching(graph, matching, maximum=True)
