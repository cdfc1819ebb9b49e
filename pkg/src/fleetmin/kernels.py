"""Hot loops: edge construction, Hopcroft-Karp, alternating reachability.

Every kernel exists twice. The loop version is compiled with numba
``@njit``; the fallback is either vectorized numpy (edge construction,
edge scans) or the same loop source run by the interpreter on plain
Python lists (the matching and reachability searches, which do not
vectorize). Both produce identical output.

The backend is picked at import time: numba when importable, unless
``FLEETMIN_DISABLE_NUMBA`` is set to a non-empty value other than ``0``.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
_DISABLED = os.environ.get("FLEETMIN_DISABLE_NUMBA", "") not in ("", "0")

BACKENDS = ("numba", "numpy")
_backend = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

UNREACHED = 1 << 60


def _jit(fn):
    if numba is None:
        return fn
    return numba.njit(cache=True)(fn)


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@contextmanager
def use_backend(name: str):
    previous = _backend
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


# ---------------------------------------------------------------------------
# edge construction


@_jit
def _travel(kind, speed, ax, ay, asite, bx, by, bsite, table):
    if kind == 0:
        return abs(ax - bx)
    if kind == 1:
        ex = ax - bx
        ey = ay - by
        return math.sqrt(ex * ex + ey * ey) / speed
    if kind == 2:
        return (abs(ax - bx) + abs(ay - by)) / speed
    return table[asite, bsite]


@_jit
def _lower_bound(sorted_vals, x):
    lo = 0
    hi = sorted_vals.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if sorted_vals[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@_jit
def _build_csr_loop(kind, speed, table, px, py, pt, psite, dx, dy, dt, dsite,
                    has_delta, delta, order, sorted_pt):
    n = pt.shape[0]
    indptr = np.zeros(n + 1, np.int64)
    for i in range(n):
        c = 0
        for s in range(_lower_bound(sorted_pt, dt[i]), n):
            j = order[s]
            if j == i:
                continue
            t = _travel(kind, speed, dx[i], dy[i], dsite[i], px[j], py[j], psite[j], table)
            w = pt[j] - dt[i]
            if t <= w and (not has_delta or w <= t + delta):
                c += 1
        indptr[i + 1] = indptr[i] + c
    indices = np.empty(indptr[n], np.int32)
    for i in range(n):
        k = indptr[i]
        for s in range(_lower_bound(sorted_pt, dt[i]), n):
            j = order[s]
            if j == i:
                continue
            t = _travel(kind, speed, dx[i], dy[i], dsite[i], px[j], py[j], psite[j], table)
            w = pt[j] - dt[i]
            if t <= w and (not has_delta or w <= t + delta):
                indices[k] = j
                k += 1
        indices[indptr[i]:indptr[i + 1]].sort()
    return indptr, indices


def _build_csr_numpy(kind, speed, table, px, py, pt, psite, dx, dy, dt, dsite,
                     has_delta, delta, order, sorted_pt):
    n = pt.shape[0]
    starts = np.searchsorted(sorted_pt, dt, side="left")
    rows = []
    indptr = np.zeros(n + 1, np.int64)
    for i in range(n):
        js = order[starts[i]:]
        js = js[js != i]
        if kind == 0:
            t = np.abs(dx[i] - px[js])
        elif kind == 1:
            ex = dx[i] - px[js]
            ey = dy[i] - py[js]
            t = np.sqrt(ex * ex + ey * ey) / speed
        elif kind == 2:
            t = (np.abs(dx[i] - px[js]) + np.abs(dy[i] - py[js])) / speed
        else:
            t = table[dsite[i], psite[js]]
        w = pt[js] - dt[i]
        ok = t <= w
        if has_delta:
            ok &= w <= t + delta
        row = np.sort(js[ok]).astype(np.int32)
        rows.append(row)
        indptr[i + 1] = indptr[i] + row.shape[0]
    indices = np.concatenate(rows) if rows else np.empty(0, np.int32)
    return indptr, indices.astype(np.int32, copy=False)


def build_csr(kind, speed, table, arrays, delta):
    """Drop-off-major CSR adjacency (0-based) of the directed feasibility edges.

    Candidates for drop-off ``i`` are only the trips whose pickup time is at
    least ``dt[i]``; earlier pickups can never satisfy the window since travel
    times are non-negative.
    """
    order = np.argsort(arrays.pt, kind="stable").astype(np.int64)
    sorted_pt = np.ascontiguousarray(arrays.pt[order])
    has_delta = delta is not None
    args = (int(kind), float(speed), np.ascontiguousarray(table, dtype=np.float64),
            arrays.px, arrays.py, arrays.pt, arrays.psite,
            arrays.dx, arrays.dy, arrays.dt, arrays.dsite,
            has_delta, float(delta) if has_delta else 0.0, order, sorted_pt)
    if _backend == "numba":
        return _build_csr_loop(*args)
    return _build_csr_numpy(*args)


# ---------------------------------------------------------------------------
# Hopcroft-Karp


def _hopcroft_karp_src(n, indptr, indices, match_l, match_r, dist, it, stack_u, stack_v, queue):
    inf = UNREACHED
    size = 0
    while True:
        head = 0
        tail = 0
        for u in range(n):
            if match_l[u] < 0:
                dist[u] = 0
                queue[tail] = u
                tail += 1
            else:
                dist[u] = inf
        found = False
        while head < tail:
            u = queue[head]
            head += 1
            for e in range(indptr[u], indptr[u + 1]):
                w = match_r[indices[e]]
                if w < 0:
                    found = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue[tail] = w
                    tail += 1
        if not found:
            return size
        for u in range(n):
            it[u] = indptr[u]
        for root in range(n):
            if match_l[root] >= 0:
                continue
            top = 0
            stack_u[0] = root
            while top >= 0:
                u = stack_u[top]
                moved = False
                while it[u] < indptr[u + 1]:
                    v = indices[it[u]]
                    it[u] += 1
                    w = match_r[v]
                    if w < 0:
                        stack_v[top] = v
                        for k in range(top, -1, -1):
                            match_l[stack_u[k]] = stack_v[k]
                            match_r[stack_v[k]] = stack_u[k]
                        size += 1
                        top = -1
                        moved = True
                        break
                    if dist[w] == dist[u] + 1:
                        stack_v[top] = v
                        top += 1
                        stack_u[top] = w
                        moved = True
                        break
                if not moved:
                    dist[u] = inf
                    top -= 1


_hopcroft_karp_jit = _jit(_hopcroft_karp_src)


def hopcroft_karp(n, indptr, indices):
    """Maximum matching; returns 0-based ``(match_l, match_r)`` with -1 for free."""
    if _backend == "numba":
        match_l = np.full(n, -1, np.int64)
        match_r = np.full(n, -1, np.int64)
        z = np.zeros(n + 1, np.int64)
        _hopcroft_karp_jit(n, indptr, indices, match_l, match_r,
                           z.copy(), z.copy(), z.copy(), z.copy(), z.copy())
        return match_l, match_r
    match_l = [-1] * n
    match_r = [-1] * n
    bufs = [[0] * (n + 1) for _ in range(5)]
    _hopcroft_karp_src(n, indptr.tolist(), indices.tolist(), match_l, match_r, *bufs)
    return np.array(match_l, np.int64), np.array(match_r, np.int64)


# ---------------------------------------------------------------------------
# alternating reachability from free drop-off nodes


def _alternating_reach_src(n, indptr, indices, match_l, match_r, zd, zp, queue):
    tail = 0
    for u in range(n):
        if match_l[u] < 0:
            zd[u] = 1
            queue[tail] = u
            tail += 1
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if v == match_l[u] or zp[v]:
                continue
            zp[v] = 1
            w = match_r[v]
            if w >= 0 and not zd[w]:
                zd[w] = 1
                queue[tail] = w
                tail += 1


_alternating_reach_jit = _jit(_alternating_reach_src)


def alternating_reach(n, indptr, indices, match_l, match_r):
    """Boolean masks of drop-off / pickup nodes reachable from free drop-offs.

    Unmatched edges are walked drop-off to pickup, matched edges pickup to
    drop-off.
    """
    match_l = np.asarray(match_l, np.int64)
    match_r = np.asarray(match_r, np.int64)
    if _backend == "numba":
        zd = np.zeros(n, np.uint8)
        zp = np.zeros(n, np.uint8)
        _alternating_reach_jit(n, indptr, indices, match_l, match_r, zd, zp, np.zeros(n + 1, np.int64))
        return zd.astype(bool), zp.astype(bool)
    zd = [0] * n
    zp = [0] * n
    _alternating_reach_src(n, indptr.tolist(), indices.tolist(), match_l.tolist(), match_r.tolist(),
                           zd, zp, [0] * (n + 1))
    return np.array(zd, bool), np.array(zp, bool)


# ---------------------------------------------------------------------------
# edge scans


@_jit
def _count_within_loop(n, indptr, indices, in_d, in_p):
    c = 0
    for u in range(n):
        if in_d[u]:
            for e in range(indptr[u], indptr[u + 1]):
                if in_p[indices[e]]:
                    c += 1
    return c


def count_edges_within(n, indptr, indices, in_d, in_p) -> int:
    """Number of edges whose drop-off end is in ``in_d`` and pickup end in ``in_p``."""
    in_d = np.asarray(in_d, bool)
    in_p = np.asarray(in_p, bool)
    if _backend == "numba":
        return int(_count_within_loop(n, indptr, indices, in_d, in_p))
    rows = np.repeat(in_d, np.diff(indptr))
    return int(np.count_nonzero(rows & in_p[indices]))
