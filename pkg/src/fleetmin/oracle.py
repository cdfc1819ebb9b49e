"""Exhaustive ground truth for small instances, and delta-mode gap search.

Nothing here goes through matching theory except ``duality_gap``'s fleet
size, which is what it is measuring against. The fleet oracle assigns trips
to vehicles by backtracking; the incompatible-set oracle enumerates subsets;
the matching oracle is a subset DP.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .compat import CompatibilityGraph, build_graph, compatible_directed, compatible_pair
from .duality import build_certificate
from .errors import OracleRefused
from .ingest import GeneratorConfig, SplitMix64, derive_seed, generate_instance
from .matching import max_matching
from .model import Instance


@dataclass(frozen=True)
class OracleBounds:
    min_fleet: int = 12
    max_incompatible: int = 20
    max_matching: int = 10


DEFAULT_BOUNDS = OracleBounds()


def _refuse(what: str, n: int, bound: int) -> None:
    if n > bound:
        raise OracleRefused(f"{what} oracle is limited to n <= {bound}, got n={n}")


def brute_min_fleet(instance: Instance, bound: int = DEFAULT_BOUNDS.min_fleet) -> int:
    """Fewest vehicles covering every trip, by backtracking over assignments.

    Trips are taken in ascending pickup time. A vehicle accepts a trip when
    its last trip is directed-compatible with it; at most one new vehicle is
    opened per step since empty vehicles are interchangeable.
    """
    n = instance.n
    _refuse("min-fleet", n, bound)
    trips = instance.trips
    model, delta = instance.model, instance.delta
    ok = [[i != j and compatible_directed(model, trips[i], trips[j], delta) for j in range(n)]
          for i in range(n)]
    order = sorted(range(n), key=lambda i: (trips[i].pickup_time, trips[i].dropoff_time, i))

    def feasible(limit: int) -> bool:
        dead: set = set()

        def place(pos: int, lasts: frozenset) -> bool:
            if pos == n:
                return True
            key = (pos, lasts)
            if key in dead:
                return False
            t = order[pos]
            for last in sorted(lasts):
                if ok[last][t] and place(pos + 1, (lasts - {last}) | {t}):
                    return True
            if len(lasts) < limit and place(pos + 1, lasts | {t}):
                return True
            dead.add(key)
            return False

        return place(0, frozenset())

    for f in range(1, n + 1):
        if feasible(f):
            return f
    return n  # unreachable: n vehicles always suffice


def brute_max_incompatible(instance: Instance, bound: int = DEFAULT_BOUNDS.max_incompatible) -> tuple:
    """``(size, witness)``: largest pairwise-incompatible trip set, 1-based.

    Include-first search over ascending indices visits sets in lexicographic
    order and keeps the first maximum, so the witness is the lexicographically
    smallest among maximizers.
    """
    n = instance.n
    _refuse("max-incompatible", n, bound)
    trips = instance.trips
    model, delta = instance.model, instance.delta
    clash = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if compatible_pair(model, trips[i], trips[j], delta):
                clash[i] |= 1 << j
                clash[j] |= 1 << i
    best: list = []

    def grow(chosen: list, cands: int) -> None:
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        while cands:
            if len(chosen) + bin(cands).count("1") <= len(best):
                return
            low = cands & -cands
            v = low.bit_length() - 1
            cands ^= low
            chosen.append(v)
            grow(chosen, cands & ~clash[v])
            chosen.pop()

    grow([], (1 << n) - 1)
    return len(best), frozenset(v + 1 for v in best)


def brute_max_matching(graph: CompatibilityGraph, bound: int = DEFAULT_BOUNDS.max_matching) -> int:
    """Maximum matching size by DP over (drop-off position, used pickups)."""
    n = graph.n
    _refuse("max-matching", n, bound)
    adj = [[j - 1 for j in graph.successors(i)] for i in range(1, n + 1)]

    @lru_cache(maxsize=None)
    def best(i: int, used: int) -> int:
        if i == n:
            return 0
        r = best(i + 1, used)
        for j in adj[i]:
            if not used >> j & 1:
                r = max(r, 1 + best(i + 1, used | 1 << j))
        return r

    return best(0, 0)


@dataclass(frozen=True)
class GapReport:
    fleet_size: int
    max_incompatible: int
    witness_set: frozenset = field(default_factory=frozenset)

    @property
    def gap(self) -> int:
        return self.fleet_size - self.max_incompatible


def duality_gap(instance: Instance, bounds: OracleBounds = DEFAULT_BOUNDS) -> GapReport:
    fleet = instance.n - max_matching(build_graph(instance)).size
    size, witness = brute_max_incompatible(instance, bounds.max_incompatible)
    return GapReport(fleet, size, witness)


# ---------------------------------------------------------------------------
# seeded case batches


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("FLEETMIN_THREADS", "1")))
    except ValueError:
        return 1


def run_cases(fn: Callable, cases: Iterable, workers: Optional[int] = None) -> list:
    """``[fn(c) for c in cases]``, fanned out over processes when workers > 1.

    Results are always returned in case order.
    """
    workers = worker_count() if workers is None else workers
    cases = list(cases)
    if workers <= 1 or len(cases) < 2:
        return [fn(c) for c in cases]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, cases, chunksize=max(1, len(cases) // (4 * workers))))


@dataclass(frozen=True)
class CaseSpec:
    """Recipe for one seeded random instance of a batch."""

    n_min: int
    n_max: int
    model: str = "euclidean"
    slack: float = 1.2
    horizon: float = 10.0
    speed: float = 1.0
    delta: Optional[float] = None
    placement: Optional[str] = None

    def instance(self, seed: int, index: int) -> Instance:
        sub = derive_seed(seed, index)
        n = self.n_min + SplitMix64(sub).below(self.n_max - self.n_min + 1)
        cfg = GeneratorConfig(n=n, horizon=self.horizon, model=self.model, speed=self.speed,
                              seed=sub, slack=self.slack, placement=self.placement)
        return generate_instance(cfg, self.delta)


def seeded_instances(spec: CaseSpec, count: int, seed: int) -> list:
    return [spec.instance(seed, k) for k in range(count)]


@dataclass(frozen=True)
class Agreement:
    """Five routes to the same number on one classical instance."""

    n: int
    brute_min_fleet: int
    brute_matching_fleet: Optional[int]  # n - brute_max_matching; None above its bound
    matching_fleet: int
    certificate_size: int
    brute_max_incompatible: int

    @property
    def values(self) -> tuple:
        vals = (self.brute_min_fleet, self.matching_fleet, self.certificate_size, self.brute_max_incompatible)
        return vals if self.brute_matching_fleet is None else vals + (self.brute_matching_fleet,)

    @property
    def equal(self) -> bool:
        return len(set(self.values)) == 1

    @property
    def weak_duality(self) -> bool:
        return self.brute_max_incompatible <= self.brute_min_fleet


def agreement(instance: Instance, bounds: OracleBounds = DEFAULT_BOUNDS) -> Agreement:
    graph = build_graph(instance)
    matching = max_matching(graph)
    cert = build_certificate(instance, graph, matching)
    n = instance.n
    return Agreement(
        n=n,
        brute_min_fleet=brute_min_fleet(instance, bounds.min_fleet),
        brute_matching_fleet=n - brute_max_matching(graph, bounds.max_matching) if n <= bounds.max_matching else None,
        matching_fleet=n - matching.size,
        certificate_size=cert.size,
        brute_max_incompatible=brute_max_incompatible(instance, bounds.max_incompatible)[0],
    )


def _agreement_job(job):
    spec, seed, index = job
    return agreement(spec.instance(seed, index))


def check_min_max(spec: CaseSpec, cases: int, seed: int, workers: Optional[int] = None) -> list:
    """Agreement records for ``cases`` seeded instances, in case order."""
    return run_cases(_agreement_job, [(spec, seed, k) for k in range(cases)], workers)


# ---------------------------------------------------------------------------
# delta-mode counterexample search


@dataclass(frozen=True)
class SearchConfig:
    cases: int
    n_min: int = 2
    n_max: int = 8
    delta: Optional[float] = None
    model: str = "line"
    seed: int = 0
    horizon: float = 4.0
    slack: float = 1.0
    speed: float = 1.0

    def case_spec(self) -> CaseSpec:
        return CaseSpec(self.n_min, self.n_max, self.model, self.slack, self.horizon, self.speed, self.delta)


def _gap_job(job):
    spec, seed, index = job
    inst = spec.instance(seed, index)
    return duality_gap(inst).gap


def search_counterexample(config: SearchConfig, workers: Optional[int] = None) -> Optional[tuple]:
    """First ``(case_index, instance, GapReport)`` with a nonzero gap, else None.

    Cases are evaluated in blocks; the reported hit is the lowest case index
    regardless of worker count.
    """
    spec = config.case_spec()
    workers = worker_count() if workers is None else workers
    block = max(1, 64 * workers) if workers > 1 else 1
    for start in range(0, config.cases, block):
        idx = range(start, min(config.cases, start + block))
        gaps = run_cases(_gap_job, [(spec, config.seed, k) for k in idx], workers)
        for k, g in zip(idx, gaps):
            if g != 0:
                inst = spec.instance(config.seed, k)
                return k, inst, duality_gap(inst)
    return None
