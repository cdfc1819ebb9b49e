"""From a maximum matching to a set of pairwise-incompatible trips.

The chain is: maximum matching -> minimum vertex cover (König) -> its
complement, an independent set of size ``n + k`` -> the ``k`` trips whose
drop-off and pickup nodes both lie in that set. Those ``k = n - m`` trips
admit no edge between them in either direction, so no vehicle can serve two
of them and ``k`` vehicles are necessary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .compat import CompatibilityGraph, build_graph, compatible_pair
from .errors import InvalidInputError, InvariantViolation
from .matching import Matching, max_matching
from .model import Instance


@dataclass(frozen=True)
class VertexCover:
    dropoff_side: frozenset
    pickup_side: frozenset

    @property
    def size(self) -> int:
        return len(self.dropoff_side) + len(self.pickup_side)


@dataclass(frozen=True)
class IndependentSet:
    dropoff_side: frozenset
    pickup_side: frozenset

    @property
    def size(self) -> int:
        return len(self.dropoff_side) + len(self.pickup_side)


@dataclass(frozen=True)
class IncompatibleCertificate:
    trip_indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "trip_indices", tuple(sorted(int(i) for i in self.trip_indices)))

    @property
    def size(self) -> int:
        return len(self.trip_indices)


def _mask(n: int, members) -> np.ndarray:
    m = np.zeros(n, bool)
    m[[i - 1 for i in members]] = True
    return m


def koenig_cover(graph: CompatibilityGraph, matching: Matching) -> VertexCover:
    """Minimum vertex cover ``(D \\ Z) | (P & Z)``, Z = alternating reach of free drop-offs."""
    n = graph.n
    match_l, match_r = matching.arrays(n)
    zd, zp = kernels.alternating_reach(n, graph.indptr, graph.indices, match_l, match_r)
    if np.any(zp & (match_r < 0)):
        raise InvalidInputError("matching is not maximum: an augmenting path exists")
    cover = VertexCover(
        frozenset((np.flatnonzero(~zd) + 1).tolist()),
        frozenset((np.flatnonzero(zp) + 1).tolist()),
    )
    if cover.size != matching.size:
        raise InvariantViolation(f"cover size {cover.size} != matching size {matching.size}")
    return cover


def uncovered_edges(graph: CompatibilityGraph, cover: VertexCover) -> int:
    n = graph.n
    return kernels.count_edges_within(n, graph.indptr, graph.indices,
                                      ~_mask(n, cover.dropoff_side), ~_mask(n, cover.pickup_side))


def independent_set(graph: CompatibilityGraph, cover: VertexCover) -> IndependentSet:
    n = graph.n
    everything = frozenset(range(1, n + 1))
    ind = IndependentSet(everything - cover.dropoff_side, everything - cover.pickup_side)
    inside = kernels.count_edges_within(n, graph.indptr, graph.indices,
                                        _mask(n, ind.dropoff_side), _mask(n, ind.pickup_side))
    if inside:
        raise InvalidInputError(f"not a vertex cover: {inside} edges left uncovered")
    return ind


def extract_pairs(ind: IndependentSet, n: int) -> frozenset:
    """The ``k = |I| - n`` smallest indices with both nodes in ``ind``.

    Every index contributes at most two nodes, so
    ``|I| <= n + #(indices with both)`` and at least ``k`` qualify.
    """
    k = ind.size - n
    if k < 0:
        raise InvalidInputError(f"independent set of size {ind.size} is smaller than n={n}")
    both = sorted(ind.dropoff_side & ind.pickup_side)
    if len(both) < k:
        raise InvariantViolation(f"only {len(both)} full pairs in a set of size n+{k}")
    return frozenset(both[:k])


def build_certificate(instance: Instance, graph: Optional[CompatibilityGraph] = None,
                      matching: Optional[Matching] = None) -> IncompatibleCertificate:
    """Certificate of ``n - m`` pairwise-incompatible trips.

    In delta mode the trips are still pairwise incompatible, but the size is
    not claimed to be a maximum.
    """
    if graph is None:
        graph = build_graph(instance)
    if matching is None:
        matching = max_matching(graph)
    cover = koenig_cover(graph, matching)
    ind = independent_set(graph, cover)
    return IncompatibleCertificate(tuple(extract_pairs(ind, instance.n)))


def verify_certificate(instance: Instance, cert: IncompatibleCertificate) -> bool:
    idx = cert.trip_indices
    for i in idx:
        if not 1 <= i <= instance.n:
            raise InvalidInputError(f"certificate index {i} outside 1..{instance.n}")
    if len(set(idx)) != len(idx):
        raise InvalidInputError("certificate repeats a trip index")
    trips = instance.trips
    for a in range(len(idx)):
        ta = trips[idx[a] - 1]
        for b in range(a + 1, len(idx)):
            if compatible_pair(instance.model, ta, trips[idx[b] - 1], instance.delta):
                return False
    return True
