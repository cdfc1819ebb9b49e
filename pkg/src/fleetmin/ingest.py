"""Trip CSV, travel-time matrix files, solution JSON and the seeded generator."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInputError, ParseError
from .model import (Euclidean, Instance, Line1D, Manhattan, Matrix, Trip,
                    TravelTimeModel, _xy)

CSV_HEADER = ["id", "px", "py", "pt", "dx", "dy", "dt"]

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 sequence; the generator's only randomness source."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform(self) -> float:
        """Double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, bound: int) -> int:
        return self.next_u64() % bound


def derive_seed(seed: int, index: int) -> int:
    """Independent sub-seed for case ``index`` of a seeded batch."""
    return SplitMix64((seed ^ ((index * 0xD1B54A32D192ED03) & MASK64)) & MASK64).next_u64()


# ---------------------------------------------------------------------------
# generator

MODEL_KINDS = ("line", "euclidean", "manhattan")


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    horizon: float = 10.0
    model: str = "euclidean"
    speed: float = 1.0
    seed: int = 0
    slack: float = 1.2
    placement: Optional[str] = None  # "square" | "line"; defaults from model

    def travel_model(self) -> TravelTimeModel:
        if self.model == "line":
            return Line1D()
        if self.model == "euclidean":
            return Euclidean(self.speed)
        if self.model == "manhattan":
            return Manhattan(self.speed)
        raise InvalidInputError(f"generator supports models {MODEL_KINDS}, got {self.model!r}")

    def resolved_placement(self) -> str:
        return self.placement or ("line" if self.model == "line" else "square")

    def check(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise InvalidInputError(f"n must be a positive integer, got {self.n!r}")
        if not (math.isfinite(self.horizon) and self.horizon >= 0):
            raise InvalidInputError(f"horizon must be finite and non-negative, got {self.horizon!r}")
        if not (math.isfinite(self.slack) and self.slack >= 1):
            raise InvalidInputError(f"slack must be >= 1, got {self.slack!r}")
        if not (math.isfinite(self.speed) and self.speed > 0):
            raise InvalidInputError(f"speed must be positive, got {self.speed!r}")
        if self.resolved_placement() not in ("square", "line"):
            raise InvalidInputError(f"unknown placement {self.placement!r}")
        if self.model == "line" and self.resolved_placement() != "line":
            raise InvalidInputError("the line model needs line placement")
        self.travel_model()


def generate_instance(config: GeneratorConfig, delta: Optional[float] = None) -> Instance:
    """Seeded random instance; trip ids are 1..n.

    Draw order per trip: pickup x, pickup y (square only), pickup time,
    dropoff x, dropoff y (square only).
    """
    config.check()
    rng = SplitMix64(config.seed)
    model = config.travel_model()
    square = config.resolved_placement() == "square"
    trips = []
    for k in range(1, config.n + 1):
        p = (rng.uniform(), rng.uniform() if square else 0.0)
        pt = rng.uniform() * config.horizon
        d = (rng.uniform(), rng.uniform() if square else 0.0)
        need = model.time(p, d)
        dt = pt + config.slack * need
        # rounding in pt + x can lose the last ulp of the ride time
        while dt - pt < need:
            dt = math.nextafter(dt, math.inf)
        trips.append(Trip(k, p, pt, d, dt))
    return Instance(tuple(trips), model, delta)


# ---------------------------------------------------------------------------
# CSV


def _open_text(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8"), newline="")
    if isinstance(source, io.TextIOBase):
        return source
    if hasattr(source, "read"):
        return io.TextIOWrapper(source, encoding="utf-8", newline="")
    raise TypeError(f"cannot read trips from {type(source).__name__}")


def _num(text: str, line: int, name: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise ParseError(f"field {name}={text!r} is not a number", line) from None
    if not math.isfinite(v):
        raise ParseError(f"field {name}={text!r} is not finite", line)
    return v


def _site(text: str, line: int, name: str) -> int:
    v = _num(text, line, name)
    if v != int(v) or v < 0:
        raise ParseError(f"field {name}={text!r} is not a site index", line)
    return int(v)


def parse_trips_csv(source, *, sites: bool = False) -> list:
    """Trips in row order from a CSV stream (text, binary or raw bytes).

    With ``sites`` the x columns are matrix site indices and y must be 0.
    Duplicate ids are left for validate_instance to report.
    """
    reader = csv.reader(_open_text(source))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file", 1) from None
    if [h.strip() for h in header] != CSV_HEADER:
        raise ParseError(f"expected header {','.join(CSV_HEADER)}", 1)
    trips = []
    for line, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise ParseError(f"expected {len(CSV_HEADER)} columns, got {len(row)}", line)
        ident = _num(row[0], line, "id")
        if ident != int(ident) or ident < 0:
            raise ParseError(f"id {row[0]!r} is not a non-negative integer", line)
        px, py, pt, dx, dy, dt = (_num(row[c], line, CSV_HEADER[c]) for c in range(1, 7))
        if sites:
            if py != 0 or dy != 0:
                raise ParseError("y columns must be 0 with a matrix model", line)
            pickup, dropoff = _site(row[1], line, "px"), _site(row[4], line, "dx")
        else:
            pickup, dropoff = (px, py), (dx, dy)
        trips.append(Trip(int(ident), pickup, pt, dropoff, dt))
    return trips


def _fmt_loc(loc):
    if isinstance(loc, int):
        return [str(loc), "0"]
    x, y = _xy(loc)
    return [repr(x), repr(y)]


def write_trips_csv(trips, sink) -> None:
    """Inverse of parse_trips_csv; floats use repr, which round-trips exactly."""
    w = csv.writer(sink, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for t in trips:
        w.writerow([str(t.id), *_fmt_loc(t.pickup), repr(float(t.pickup_time)),
                    *_fmt_loc(t.dropoff), repr(float(t.dropoff_time))])


def trips_csv_text(trips) -> str:
    buf = io.StringIO()
    write_trips_csv(trips, buf)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# travel-time matrix file


def parse_matrix(text: str) -> Matrix:
    tokens = text.split()
    if not tokens:
        raise ParseError("empty matrix file", 1)
    try:
        n = int(tokens[0])
    except ValueError:
        raise ParseError(f"first token {tokens[0]!r} is not a size", 1) from None
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != n + 1:
        raise ParseError(f"expected {n} matrix rows, got {len(lines) - 1}", len(lines))
    rows = []
    for k, ln in enumerate(lines[1:], start=2):
        vals = [_num(tok, k, "entry") for tok in ln.split()]
        if len(vals) != n:
            raise ParseError(f"expected {n} entries, got {len(vals)}", k)
        rows.append(vals)
    return Matrix(rows)


def format_matrix(model: Matrix) -> str:
    n = model.sites
    out = [str(n)]
    out += [" ".join(repr(float(v)) for v in row) for row in model.table]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# solution JSON


def solution_document(instance, solution, certificate, *, edge_count: int, gap_report=None) -> dict:
    """JSON-ready dict with the fixed key order. Trip references are trip ids."""
    ids = [t.id for t in instance.trips]
    fleet = solution.fleet_size
    if gap_report is not None:
        gap = gap_report.gap
    elif instance.delta is None:
        gap = fleet - certificate.size
    else:
        gap = None
    return {
        "n": instance.n,
        "delta": None if instance.delta is None else float(instance.delta),
        "edge_count": int(edge_count),
        "matching_size": solution.matching_size,
        "fleet_size": fleet,
        "trajectories": [[ids[i - 1] for i in t.trip_indices] for t in solution.trajectories],
        "certificate": [ids[i - 1] for i in certificate.trip_indices],
        "certificate_size": certificate.size,
        "min_max_gap": gap,
    }


def write_solution_json(solution, certificate, gap_report, sink, *, instance, edge_count: int) -> None:
    doc = solution_document(instance, solution, certificate, edge_count=edge_count, gap_report=gap_report)
    sink.write(json.dumps(doc, indent=2))
    sink.write("\n")


def read_solution_json(text: str, instance):
    """``(FleetSolution, IncompatibleCertificate)`` from a solution document, ids mapped to indices."""
    from .duality import IncompatibleCertificate
    from .fleet import FleetSolution

    try:
        doc = json.loads(text)
        index = {t.id: k for k, t in enumerate(instance.trips, start=1)}

        def to_index(ident):
            if ident not in index:
                raise InvalidInputError(f"solution references unknown trip id {ident!r}")
            return index[ident]

        trajectories = [[to_index(i) for i in traj] for traj in doc["trajectories"]]
        cert = IncompatibleCertificate(tuple(to_index(i) for i in doc["certificate"]))
        matching_size = int(doc.get("matching_size", instance.n - len(trajectories)))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInputError):
            raise
        raise InvalidInputError(f"malformed solution JSON: {exc}") from exc
    return FleetSolution(tuple(trajectories), matching_size), cert
