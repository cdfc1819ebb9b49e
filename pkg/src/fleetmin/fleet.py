"""Vehicle trajectories from a matching, and the top-level solver."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

from .compat import CompatibilityGraph, build_graph, compatible_directed
from .duality import IncompatibleCertificate, build_certificate
from .errors import InvariantViolation
from .matching import Matching, max_matching
from .model import Instance, check_instance


@dataclass(frozen=True)
class Trajectory:
    trip_indices: tuple

    def __post_init__(self):
        object.__setattr__(self, "trip_indices", tuple(self.trip_indices))

    def __len__(self):
        return len(self.trip_indices)


@dataclass(frozen=True)
class FleetSolution:
    trajectories: tuple
    matching_size: int

    def __post_init__(self):
        object.__setattr__(self, "trajectories", tuple(
            t if isinstance(t, Trajectory) else Trajectory(t) for t in self.trajectories))

    @property
    def fleet_size(self) -> int:
        return len(self.trajectories)

    def as_lists(self) -> list:
        return [list(t.trip_indices) for t in self.trajectories]


def decompose_trajectories(instance: Instance, matching: Matching) -> FleetSolution:
    """One trajectory per pickup node left unmatched, following successors.

    Works for any matching, maximum or not. Trips left unvisited afterwards
    can only sit on successor cycles, which needs zero-length rides at equal
    timestamps; that raises InvariantViolation.
    """
    n = instance.n
    succ = matching.successor
    pred = matching.predecessor
    visited = [False] * (n + 1)
    trajectories = []
    for start in range(1, n + 1):
        if start in pred:
            continue
        path = [start]
        visited[start] = True
        cur = start
        while cur in succ:
            cur = succ[cur]
            if visited[cur]:
                raise InvariantViolation(f"trip {cur} reached twice while following successors")
            visited[cur] = True
            path.append(cur)
        trajectories.append(Trajectory(path))
    if not all(visited[1:]):
        cur = visited.index(False, 1)
        cycle = [cur]
        while succ[cur] != cycle[0]:
            cur = succ[cur]
            cycle.append(cur)
        raise InvariantViolation(f"successor cycle among trips {cycle}")
    return FleetSolution(tuple(trajectories), matching.size)


class SolutionCheck(NamedTuple):
    ok: bool
    reason: Optional[str] = None

    def __bool__(self):
        return self.ok


MISSING_TRIP = "missing trip"
DUPLICATE_TRIP = "duplicate trip"
UNKNOWN_TRIP = "unknown trip"
INFEASIBLE_PAIR = "infeasible consecutive pair"
ORDER_VIOLATION = "order violation"
SIZE_MISMATCH = "size mismatch"


def verify_solution(instance: Instance, solution: FleetSolution) -> SolutionCheck:
    n = instance.n
    seen = set()
    for traj in solution.trajectories:
        for i in traj.trip_indices:
            if not 1 <= i <= n:
                return SolutionCheck(False, UNKNOWN_TRIP)
            if i in seen:
                return SolutionCheck(False, DUPLICATE_TRIP)
            seen.add(i)
    if len(seen) != n:
        return SolutionCheck(False, MISSING_TRIP)
    trips = instance.trips
    for traj in solution.trajectories:
        idx = traj.trip_indices
        for a, b in zip(idx, idx[1:]):
            ta, tb = trips[a - 1], trips[b - 1]
            if not compatible_directed(instance.model, ta, tb, instance.delta):
                return SolutionCheck(False, INFEASIBLE_PAIR)
            if tb.dropoff_time < ta.dropoff_time:
                return SolutionCheck(False, ORDER_VIOLATION)
    if solution.fleet_size != n - solution.matching_size:
        return SolutionCheck(False, SIZE_MISMATCH)
    return SolutionCheck(True)


def matching_from_solution(solution: FleetSolution) -> Matching:
    """Consecutive trip pairs read back as matching edges."""
    return Matching(tuple(pair for t in solution.trajectories
                          for pair in zip(t.trip_indices, t.trip_indices[1:])))


@dataclass(frozen=True)
class SolveResult:
    graph: CompatibilityGraph
    matching: Matching
    solution: FleetSolution
    certificate: IncompatibleCertificate


def solve_instance(instance: Instance) -> SolveResult:
    check_instance(instance)
    graph = build_graph(instance, validate=False)
    matching = max_matching(graph)
    solution = decompose_trajectories(instance, matching)
    cert = build_certificate(instance, graph, matching)
    return SolveResult(graph, matching, solution, cert)


def solve(instance: Instance) -> tuple:
    """``(FleetSolution, IncompatibleCertificate)``; equal sizes unless in delta mode."""
    res = solve_instance(instance)
    return res.solution, res.certificate
