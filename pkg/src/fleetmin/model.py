"""Trips, travel-time models and instance validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from numbers import Integral, Real
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import InvalidInputError

# Location: an (x, y) pair for the analytic models, a site index for Matrix.
# A bare real x is accepted as shorthand for (x, 0.0).
Location = Union[tuple, int, float]

KIND_LINE = 0
KIND_EUCLIDEAN = 1
KIND_MANHATTAN = 2
KIND_MATRIX = 3


def _xy(loc) -> tuple[float, float]:
    if isinstance(loc, tuple):
        return float(loc[0]), float(loc[1])
    return float(loc), 0.0


@dataclass(frozen=True)
class Line1D:
    """time = |x - y| on the x coordinate."""

    kind = KIND_LINE
    name = "line"

    @property
    def speed(self) -> float:
        return 1.0

    def time(self, s: Location, t: Location) -> float:
        return abs(_xy(s)[0] - _xy(t)[0])


@dataclass(frozen=True)
class Euclidean:
    speed: float = 1.0
    kind = KIND_EUCLIDEAN
    name = "euclidean"

    def time(self, s: Location, t: Location) -> float:
        sx, sy = _xy(s)
        tx, ty = _xy(t)
        ex = sx - tx
        ey = sy - ty
        # kernels use the same expression; do not swap for math.hypot
        return math.sqrt(ex * ex + ey * ey) / self.speed


@dataclass(frozen=True)
class Manhattan:
    speed: float = 1.0
    kind = KIND_MANHATTAN
    name = "manhattan"

    def time(self, s: Location, t: Location) -> float:
        sx, sy = _xy(s)
        tx, ty = _xy(t)
        return (abs(sx - tx) + abs(sy - ty)) / self.speed


@dataclass(frozen=True, eq=False)
class Matrix:
    """Square table of durations indexed by integer site."""

    table: np.ndarray
    kind = KIND_MATRIX
    name = "matrix"

    def __post_init__(self):
        arr = np.array(self.table, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)

    @property
    def speed(self) -> float:
        return 1.0

    @property
    def sites(self) -> int:
        return self.table.shape[0] if self.table.ndim == 2 else 0

    def time(self, s: Location, t: Location) -> float:
        for site in (s, t):
            if not _is_site(site) or not 0 <= site < self.sites:
                raise InvalidInputError(f"site index {site!r} outside matrix of size {self.sites}")
        return float(self.table[s, t])

    def __eq__(self, other):
        return isinstance(other, Matrix) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())


TravelTimeModel = Union[Line1D, Euclidean, Manhattan, Matrix]


def _is_site(loc) -> bool:
    return isinstance(loc, Integral) and not isinstance(loc, bool)


def travel_time(model: TravelTimeModel, s: Location, t: Location) -> float:
    return model.time(s, t)


@dataclass(frozen=True)
class Trip:
    id: int
    pickup: Location
    pickup_time: float
    dropoff: Location
    dropoff_time: float

    @property
    def duration(self) -> float:
        return self.dropoff_time - self.pickup_time


class TripArrays(NamedTuple):
    """Columnar view of an instance consumed by the numeric kernels."""

    px: np.ndarray
    py: np.ndarray
    pt: np.ndarray
    dx: np.ndarray
    dy: np.ndarray
    dt: np.ndarray
    psite: np.ndarray
    dsite: np.ndarray


@dataclass(frozen=True)
class Instance:
    trips: tuple
    model: TravelTimeModel = field(default_factory=Line1D)
    delta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "trips", tuple(self.trips))

    @property
    def n(self) -> int:
        return len(self.trips)

    def trip(self, index: int) -> Trip:
        """Trip by 1-based index."""
        if not 1 <= index <= self.n:
            raise InvalidInputError(f"trip index {index} outside 1..{self.n}")
        return self.trips[index - 1]

    def with_delta(self, delta: Optional[float]) -> "Instance":
        return Instance(self.trips, self.model, delta)

    @cached_property
    def arrays(self) -> TripArrays:
        n = self.n
        cols = np.zeros((6, n), dtype=np.float64)
        psite = np.zeros(n, dtype=np.int64)
        dsite = np.zeros(n, dtype=np.int64)
        matrix = self.model.kind == KIND_MATRIX
        for k, tr in enumerate(self.trips):
            if matrix:
                psite[k] = tr.pickup
                dsite[k] = tr.dropoff
            else:
                cols[0, k], cols[1, k] = _xy(tr.pickup)
                cols[3, k], cols[4, k] = _xy(tr.dropoff)
            cols[2, k] = tr.pickup_time
            cols[5, k] = tr.dropoff_time
        return TripArrays(cols[0], cols[1], cols[2], cols[3], cols[4], cols[5], psite, dsite)


class Violation(NamedTuple):
    code: str
    message: str
    trip: Optional[int] = None  # 1-based index, when the problem is tied to one trip


class ValidationReport(list):
    """List of violations; empty means valid."""

    @property
    def ok(self) -> bool:
        return not self

    def codes(self) -> list:
        return [v.code for v in self]

    def __str__(self):
        return "\n".join(v.message for v in self) or "valid"


def _finite(x) -> bool:
    return isinstance(x, Real) and not isinstance(x, bool) and math.isfinite(x)


def _check_model(model, report: ValidationReport) -> None:
    if isinstance(model, (Euclidean, Manhattan)):
        if not _finite(model.speed) or model.speed <= 0:
            report.append(Violation("bad speed", f"speed must be positive and finite, got {model.speed!r}"))
    elif isinstance(model, Matrix):
        t = model.table
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            report.append(Violation("matrix shape", f"travel-time matrix must be square, got shape {t.shape}"))
            return
        if not np.all(np.isfinite(t)):
            report.append(Violation("matrix value", "travel-time matrix has non-finite entries"))
        elif np.any(t < 0):
            report.append(Violation("matrix value", "travel-time matrix has negative entries"))
        if np.any(np.diag(t) != 0):
            report.append(Violation("matrix diagonal", "travel-time matrix diagonal must be 0"))
    elif not isinstance(model, Line1D):
        report.append(Violation("bad model", f"unknown travel-time model {model!r}"))


def _check_location(model, loc, idx: int, label: str, report: ValidationReport) -> bool:
    if isinstance(model, Matrix):
        if not _is_site(loc) or not 0 <= loc < model.sites:
            report.append(Violation("bad site", f"trip {idx}: {label} site {loc!r} is not a valid matrix index", idx))
            return False
        return True
    try:
        x, y = _xy(loc)
    except (TypeError, ValueError, IndexError):
        report.append(Violation("bad location", f"trip {idx}: {label} {loc!r} is not a location", idx))
        return False
    if not (math.isfinite(x) and math.isfinite(y)):
        report.append(Violation("non-finite", f"trip {idx}: {label} coordinates not finite", idx))
        return False
    if isinstance(model, Line1D) and y != 0:
        report.append(Violation("line y", f"trip {idx}: {label} y must be 0 under the line model", idx))
    return True


def validate_instance(instance: Instance, strict_metric: bool = False) -> ValidationReport:
    """Collect every problem with ``instance``; never raises.

    With ``strict_metric`` trips whose own ride is faster than the model
    allows (time(p, d) > dropoff_time - pickup_time) are reported too.
    """
    report = ValidationReport()
    model = instance.model
    _check_model(model, report)
    if instance.delta is not None and (not _finite(instance.delta) or instance.delta < 0):
        report.append(Violation("bad delta", f"delta must be a non-negative finite number, got {instance.delta!r}"))
    if instance.n < 1:
        report.append(Violation("empty", "instance has no trips"))
    seen: dict = {}
    model_ok = not report or all(v.code == "bad delta" for v in report)
    for idx, tr in enumerate(instance.trips, start=1):
        if not isinstance(tr.id, Integral) or isinstance(tr.id, bool) or tr.id < 0:
            report.append(Violation("bad id", f"trip {idx}: id {tr.id!r} is not a non-negative integer", idx))
        elif tr.id in seen:
            report.append(Violation("duplicate id", f"trip {idx}: duplicate id {tr.id} (first at trip {seen[tr.id]})", idx))
        else:
            seen[tr.id] = idx
        times_ok = _finite(tr.pickup_time) and _finite(tr.dropoff_time)
        if not times_ok:
            report.append(Violation("non-finite", f"trip {idx}: times not finite", idx))
        elif tr.dropoff_time < tr.pickup_time:
            report.append(Violation("dropoff before pickup", f"trip {idx}: dropoff before pickup", idx))
        locs_ok = _check_location(model, tr.pickup, idx, "pickup", report)
        locs_ok = _check_location(model, tr.dropoff, idx, "dropoff", report) and locs_ok
        if strict_metric and times_ok and locs_ok and model_ok:
            need = model.time(tr.pickup, tr.dropoff)
            if need > tr.dropoff_time - tr.pickup_time:
                report.append(Violation(
                    "metric", f"trip {idx}: ride takes {tr.duration!r} but the model needs {need!r}", idx))
    return report


def check_instance(instance: Instance, strict_metric: bool = False) -> None:
    """Raise InvalidInputError carrying the full report if ``instance`` is invalid."""
    report = validate_instance(instance, strict_metric)
    if report:
        raise InvalidInputError(str(report))


def make_instance(rows: Sequence, model: Optional[TravelTimeModel] = None, delta=None) -> Instance:
    """Build an instance from ``(pickup, pickup_time, dropoff, dropoff_time)`` rows, ids 1..n."""
    trips = [Trip(k, p, tp, d, td) for k, (p, tp, d, td) in enumerate(rows, start=1)]
    return Instance(tuple(trips), model if model is not None else Line1D(), delta)
