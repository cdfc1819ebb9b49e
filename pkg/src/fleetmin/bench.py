"""Wall-clock comparison of the numba kernels against the fallback path."""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import kernels
from .compat import build_graph
from .duality import build_certificate
from .fleet import decompose_trajectories
from .ingest import GeneratorConfig, generate_instance
from .matching import max_matching


@dataclass
class BenchRow:
    backend: str
    n: int
    edges: int
    fleet: int
    build_s: float
    match_s: float
    certify_s: float

    @property
    def total_s(self) -> float:
        return self.build_s + self.match_s + self.certify_s


def _run_once(instance, backend: str) -> BenchRow:
    with kernels.use_backend(backend):
        t0 = time.perf_counter()
        graph = build_graph(instance, validate=False)
        t1 = time.perf_counter()
        matching = max_matching(graph)
        t2 = time.perf_counter()
        decompose_trajectories(instance, matching)
        build_certificate(instance, graph, matching)
        t3 = time.perf_counter()
    return BenchRow(backend, instance.n, graph.edge_count, instance.n - matching.size, t1 - t0, t2 - t1, t3 - t2)


def warm_up() -> None:
    """Trigger numba compilation (or cache load) outside the timed region."""
    if kernels.HAVE_NUMBA:
        _run_once(generate_instance(GeneratorConfig(n=8, seed=1)), "numba")


def bench_backends(sizes, seed: int = 0, model: str = "euclidean", horizon: float = 10.0,
                   backends=None, repeat: int = 1) -> list:
    """Best-of-``repeat`` timing per (size, backend)."""
    if backends is None:
        backends = [b for b in kernels.BACKENDS if b != "numba" or kernels.HAVE_NUMBA]
    warm_up()
    rows = []
    for n in sizes:
        inst = generate_instance(GeneratorConfig(n=n, seed=seed, model=model, horizon=horizon))
        for b in backends:
            rows.append(min((_run_once(inst, b) for _ in range(repeat)), key=lambda r: r.total_s))
    return rows


def format_table(rows) -> str:
    head = f"{'backend':<8} {'n':>7} {'edges':>10} {'fleet':>6} {'build s':>9} {'match s':>9} {'certify s':>10} {'total s':>9}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.backend:<8} {r.n:>7} {r.edges:>10} {r.fleet:>6} {r.build_s:>9.3f} "
                     f"{r.match_s:>9.3f} {r.certify_s:>10.3f} {r.total_s:>9.3f}")
    return "\n".join(lines)
