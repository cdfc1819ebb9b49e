"""``fleetmin`` command line.

Exit codes: 0 success, 1 invalid input, 2 verification or certificate
failure, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys

from .compat import build_graph
from .duality import build_certificate, verify_certificate
from .errors import InvalidInputError, InvariantViolation, OracleRefused, VerificationError
from .fleet import solve_instance, verify_solution
from .ingest import (GeneratorConfig, generate_instance, parse_matrix, parse_trips_csv,
                     read_solution_json, solution_document, trips_csv_text)
from .matching import max_matching, verify_matching
from .model import Euclidean, Instance, Line1D, Manhattan, check_instance

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY = 2
EXIT_INTERNAL = 3

GAP_BOUND = 20  # largest n for which delta-mode output carries a brute-force gap


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError(f"seed {text} outside 0..2^64-1")
    return v


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"{text} must be non-negative")
    return v


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return fh.read()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc


def _model(spec: str, speed: float):
    if spec == "line":
        return Line1D()
    if spec == "euclidean":
        return Euclidean(speed)
    if spec == "manhattan":
        return Manhattan(speed)
    if spec.startswith("matrix:"):
        return parse_matrix(_read_text(spec[len("matrix:"):]))
    raise InvalidInputError(f"unknown model {spec!r}; use line, euclidean, manhattan or matrix:PATH")


def _load_instance(args) -> Instance:
    model = _model(args.model, args.speed)
    trips = parse_trips_csv(_read_text(args.trips).encode("utf-8"), sites=model.name == "matrix")
    inst = Instance(tuple(trips), model, getattr(args, "delta", None))
    check_instance(inst)
    return inst


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInputError(f"cannot write {path}: {exc.strerror}") from exc


def _gap_report(inst: Instance):
    if inst.delta is None or inst.n > GAP_BOUND:
        return None
    from .oracle import duality_gap
    return duality_gap(inst)


def _solved(inst: Instance):
    res = solve_instance(inst)
    check = verify_matching(res.graph, res.matching)
    if not check:
        raise VerificationError(f"matching failed verification: {check.reason}")
    check = verify_solution(inst, res.solution)
    if not check:
        raise VerificationError(f"fleet solution failed verification: {check.reason}")
    if not verify_certificate(inst, res.certificate):
        raise VerificationError("certificate contains a compatible pair")
    if inst.delta is None and res.certificate.size != res.solution.fleet_size:
        raise VerificationError(
            f"certificate size {res.certificate.size} != fleet size {res.solution.fleet_size}")
    return res


def _summary(inst, doc) -> str:
    mode = "classical" if inst.delta is None else f"delta={inst.delta!r}"
    gap = "n/a" if doc["min_max_gap"] is None else doc["min_max_gap"]
    return (f"n={doc['n']} mode={mode} edges={doc['edge_count']} matching={doc['matching_size']} "
            f"fleet={doc['fleet_size']} certificate={doc['certificate_size']} min_max_gap={gap}")


def cmd_solve(args) -> int:
    inst = _load_instance(args)
    res = _solved(inst)
    doc = solution_document(inst, res.solution, res.certificate,
                            edge_count=res.graph.edge_count, gap_report=_gap_report(inst))
    print(_summary(inst, doc))
    if args.out:
        _write(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_certify(args) -> int:
    inst = _load_instance(args)
    graph = build_graph(inst, validate=False)
    matching = max_matching(graph)
    if not verify_matching(graph, matching):
        raise VerificationError("matching failed verification")
    cert = build_certificate(inst, graph, matching)
    if not verify_certificate(inst, cert):
        raise VerificationError("certificate contains a compatible pair")
    ids = [inst.trips[i - 1].id for i in cert.trip_indices]
    gap = _gap_report(inst)
    fleet = inst.n - matching.size
    doc = {
        "n": inst.n,
        "delta": None if inst.delta is None else float(inst.delta),
        "edge_count": graph.edge_count,
        "matching_size": matching.size,
        "fleet_size": fleet,
        "certificate": ids,
        "certificate_size": cert.size,
        "min_max_gap": gap.gap if gap is not None else (fleet - cert.size if inst.delta is None else None),
    }
    print(f"certificate ({cert.size} pairwise-incompatible trips): {' '.join(map(str, ids))}")
    if args.out:
        _write(args.out, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args)
    solution, cert = read_solution_json(_read_text(args.solution), inst)
    check = verify_solution(inst, solution)
    if not check:
        print(f"solution INVALID: {check.reason}")
        return EXIT_VERIFY
    if not verify_certificate(inst, cert):
        print("certificate INVALID: contains a compatible pair")
        return EXIT_VERIFY
    if inst.delta is None and cert.size != solution.fleet_size:
        print(f"certificate size {cert.size} does not match fleet size {solution.fleet_size}; optimality not certified")
        return EXIT_VERIFY
    print(f"valid: fleet={solution.fleet_size} certificate={cert.size}"
          + (" (optimal)" if cert.size == solution.fleet_size else ""))
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(n=args.n, horizon=args.horizon, model=args.model, speed=args.speed,
                          seed=args.seed, slack=args.slack)
    text = trips_csv_text(generate_instance(cfg).trips)
    if args.out:
        _write(args.out, text)
        print(f"wrote {args.n} trips to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    from .oracle import CaseSpec, check_min_max
    if args.n_max > 12:
        raise OracleRefused("check runs the brute-force fleet oracle; --n-max must be <= 12")
    spec = CaseSpec(1, args.n_max, args.model, args.slack, args.horizon, args.speed)
    records = check_min_max(spec, args.cases, args.seed)
    equal = sum(r.equal for r in records)
    weak = sum(r.weak_duality for r in records)
    print(f"{equal}/{len(records)} min-max equalities")
    print(f"{weak}/{len(records)} weak-duality checks")
    for k, r in enumerate(records):
        if not r.equal:
            print(f"case {k}: n={r.n} values={r.values}")
    return EXIT_OK if equal == weak == len(records) else EXIT_VERIFY


def cmd_gap_search(args) -> int:
    from .oracle import SearchConfig, search_counterexample
    cfg = SearchConfig(cases=args.cases, n_min=2, n_max=args.n_max, delta=args.delta, model=args.model,
                       seed=args.seed, horizon=args.horizon, slack=args.slack, speed=args.speed)
    hit = search_counterexample(cfg)
    if hit is None:
        print(f"no nonzero gap in {args.cases} cases")
        return EXIT_OK
    k, inst, report = hit
    print(f"case {k}: n={inst.n} fleet={report.fleet_size} max_incompatible={report.max_incompatible} "
          f"gap={report.gap} witness={sorted(report.witness_set)}")
    if args.out:
        _write(args.out, trips_csv_text(inst.trips))
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import bench_backends, format_table
    sizes = args.n or [250, 500, 1000]
    print(format_table(bench_backends(sizes, seed=args.seed, model=args.model, horizon=args.horizon)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fleetmin", description="Minimum fleet size with min-max certificates.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(sp, delta=True):
        sp.add_argument("--trips", required=True, metavar="PATH")
        sp.add_argument("--model", default="line", metavar="line|euclidean|manhattan|matrix:PATH")
        sp.add_argument("--speed", type=float, default=1.0)
        if delta:
            sp.add_argument("--delta", type=_nonneg, default=None)

    sp = sub.add_parser("solve", help="fleet size, trajectories and certificate")
    instance_args(sp)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("certify", help="pairwise-incompatible certificate only")
    instance_args(sp)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("verify", help="re-check a solution JSON against the trips")
    instance_args(sp)
    sp.add_argument("--solution", required=True, metavar="PATH")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gen", help="write a seeded random trips CSV")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.add_argument("--slack", type=float, default=1.2)
    sp.add_argument("--model", default="euclidean", choices=["line", "euclidean", "manhattan"])
    sp.add_argument("--speed", type=float, default=1.0)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="oracle agreement on seeded classical instances")
    sp.add_argument("--cases", type=int, default=100)
    sp.add_argument("--n-max", type=int, default=10)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--model", default="euclidean", choices=["line", "euclidean", "manhattan"])
    sp.add_argument("--speed", type=float, default=1.0)
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.add_argument("--slack", type=float, default=1.2)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gap-search", help="look for nonzero min-max gaps")
    sp.add_argument("--cases", type=int, default=1000)
    sp.add_argument("--n-max", type=int, default=8)
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--delta", type=_nonneg, default=None)
    sp.add_argument("--model", default="line", choices=["line", "euclidean", "manhattan"])
    sp.add_argument("--speed", type=float, default=1.0)
    sp.add_argument("--horizon", type=float, default=4.0)
    sp.add_argument("--slack", type=float, default=1.0)
    sp.add_argument("--out", metavar="PATH")
    sp.set_defaults(func=cmd_gap_search)

    sp = sub.add_parser("bench", help="time numba kernels against the fallback path")
    sp.add_argument("--n", type=int, action="append")
    sp.add_argument("--seed", type=_u64, default=0)
    sp.add_argument("--model", default="euclidean", choices=["line", "euclidean", "manhattan"])
    sp.add_argument("--horizon", type=float, default=10.0)
    sp.set_defaults(func=cmd_bench)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except VerificationError as exc:
        print(f"fleetmin: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except InvariantViolation as exc:
        print(f"fleetmin: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidInputError as exc:
        print(f"fleetmin: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
