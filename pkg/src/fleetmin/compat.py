"""Trip-to-trip feasibility and the bipartite drop-off/pickup graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import kernels
from .errors import InvalidInputError
from .model import KIND_MATRIX, Instance, TravelTimeModel, Trip, check_instance


def compatible_directed(model: TravelTimeModel, src: Trip, dst: Trip, delta: Optional[float] = None) -> bool:
    """Can one vehicle drop off ``src`` and then pick up ``dst`` in time?

    With ``delta`` the idle time at the pickup is also capped:
    ``time <= window <= time + delta``.
    """
    if src.id == dst.id:
        raise InvalidInputError(f"trip {src.id} compared with itself")
    t = model.time(src.dropoff, dst.pickup)
    window = dst.pickup_time - src.dropoff_time
    if t > window:
        return False
    return delta is None or window <= t + delta


def compatible_pair(model: TravelTimeModel, a: Trip, b: Trip, delta: Optional[float] = None) -> bool:
    return compatible_directed(model, a, b, delta) or compatible_directed(model, b, a, delta)


@dataclass(frozen=True, eq=False)
class CompatibilityGraph:
    """Bipartite graph between drop-off nodes and pickup nodes.

    Stored as drop-off-major CSR with 0-based rows/columns; every public
    accessor speaks 1-based trip indices.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    delta: Optional[float] = None

    def __post_init__(self):
        for arr in (self.indptr, self.indices):
            arr.setflags(write=False)

    @property
    def edge_count(self) -> int:
        return int(self.indptr[-1])

    def successors(self, i: int) -> list:
        """Sorted pickup indices adjacent to drop-off ``i``."""
        return (self.indices[self.indptr[i - 1]:self.indptr[i]] + 1).tolist()

    @property
    def adjacency(self) -> dict:
        return {i: self.successors(i) for i in range(1, self.n + 1)}

    def edges(self) -> Iterator[tuple]:
        for i in range(1, self.n + 1):
            for j in self.successors(i):
                yield i, j

    def has_edge(self, i: int, j: int) -> bool:
        row = self.indices[self.indptr[i - 1]:self.indptr[i]]
        k = np.searchsorted(row, j - 1)
        return bool(k < row.shape[0] and row[k] == j - 1)

    def __eq__(self, other):
        return (isinstance(other, CompatibilityGraph) and self.n == other.n
                and self.delta == other.delta
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    @classmethod
    def from_edges(cls, n: int, edges, delta=None) -> "CompatibilityGraph":
        """Graph from 1-based ``(dropoff, pickup)`` pairs; mostly for tests."""
        rows = [[] for _ in range(n)]
        for i, j in edges:
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise InvalidInputError(f"bad edge ({i}, {j}) for n={n}")
            rows[i - 1].append(j - 1)
        indptr = np.zeros(n + 1, np.int64)
        indptr[1:] = np.cumsum([len(set(r)) for r in rows])
        flat = [j for r in rows for j in sorted(set(r))]
        return cls(n, indptr, np.array(flat, np.int32), delta)


def build_graph(instance: Instance, *, validate: bool = True) -> CompatibilityGraph:
    if validate:
        check_instance(instance)
    model = instance.model
    table = model.table if model.kind == KIND_MATRIX else np.zeros((1, 1))
    indptr, indices = kernels.build_csr(model.kind, model.speed, table, instance.arrays, instance.delta)
    return CompatibilityGraph(instance.n, indptr, indices, instance.delta)


def naive_edges(instance: Instance) -> list:
    """All 1-based directed edges by scanning every ordered pair."""
    trips = instance.trips
    return [(i, j)
            for i in range(1, instance.n + 1)
            for j in range(1, instance.n + 1)
            if i != j and compatible_directed(instance.model, trips[i - 1], trips[j - 1], instance.delta)]
