import random

import pytest

from fleetmin.compat import CompatibilityGraph, build_graph
from fleetmin.matching import (AUGMENTING_PATH, DUPLICATE_ENDPOINT, NON_EDGE, Matching, check_matching,
                               max_matching, verify_matching)
from fleetmin.oracle import CaseSpec, brute_max_matching, seeded_instances

from oracles import subset_max_matching


def test_fixture_a(fixture_a, backend):
    m = max_matching(build_graph(fixture_a))
    assert m.pairs == ((1, 2),)
    assert m.size == 1


def test_edgeless(backend):
    g = CompatibilityGraph.from_edges(5, [])
    assert max_matching(g).size == 0


def test_fixture_b_classical(fixture_b, backend):
    m = max_matching(build_graph(fixture_b))
    assert m.pairs == ((1, 2), (2, 3))


def test_successor_predecessor_inverse():
    m = Matching(((3, 1), (1, 2)))
    assert dict(m.successor) == {1: 2, 3: 1}
    assert dict(m.predecessor) == {2: 1, 1: 3}
    assert all(m.predecessor[j] == i for i, j in m.successor.items())


def test_verify_examples(fixture_a, fixture_b):
    ga = build_graph(fixture_a)
    assert verify_matching(ga, Matching(((1, 2),)))
    check = verify_matching(ga, Matching(()))
    assert not check and check.reason == AUGMENTING_PATH
    check = verify_matching(build_graph(fixture_b), Matching(((1, 2), (1, 3))))
    assert not check and check.reason == DUPLICATE_ENDPOINT
    check = verify_matching(ga, Matching(((2, 1),)))
    assert not check and check.reason == NON_EDGE


def test_longer_augmenting_path_detected(backend):
    # d1-p1, d1-p2, d2-p1: {(1,1)} is maximal but not maximum
    g = CompatibilityGraph.from_edges(3, [(1, 2), (1, 3), (2, 3)])
    assert verify_matching(g, Matching(((1, 3),))).reason == AUGMENTING_PATH
    assert check_matching(g, Matching(((1, 3),)), maximum=False)
    assert verify_matching(g, max_matching(g))


def test_matches_subset_enumeration(backend):
    rng = random.Random(99)
    for _ in range(150):
        n = rng.randint(1, 6)
        edges = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j and rng.random() < 0.35]
        g = CompatibilityGraph.from_edges(n, edges)
        m = max_matching(g)
        assert m.size == subset_max_matching(edges)
        assert verify_matching(g, m)


def test_oracle_equivalence_300(backend):
    for inst in seeded_instances(CaseSpec(1, 10, horizon=5.0), 300, seed=21):
        g = build_graph(inst)
        m = max_matching(g)
        assert m.size == brute_max_matching(g)
        assert verify_matching(g, m)
        assert m.size <= inst.n
        assert (m.size == 0) == (g.edge_count == 0)


def test_deterministic(backend):
    for inst in seeded_instances(CaseSpec(20, 200), 10, seed=22):
        g = build_graph(inst)
        assert max_matching(g) == max_matching(g)


def test_backends_agree_pairwise():
    from fleetmin import kernels
    from conftest import AVAILABLE_BACKENDS
    if len(AVAILABLE_BACKENDS) < 2:
        pytest.skip("numba unavailable")
    for inst in seeded_instances(CaseSpec(50, 400), 8, seed=23):
        results = []
        for b in AVAILABLE_BACKENDS:
            with kernels.use_backend(b):
                results.append(max_matching(build_graph(inst)))
        assert results[0] == results[1]
