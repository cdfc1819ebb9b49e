import pytest
from hypothesis import given, strategies as st

from fleetmin.compat import CompatibilityGraph, build_graph
from fleetmin.duality import (IncompatibleCertificate, IndependentSet, VertexCover, build_certificate,
                              extract_pairs, independent_set, koenig_cover, uncovered_edges,
                              verify_certificate)
from fleetmin.errors import InvalidInputError
from fleetmin.matching import Matching, max_matching
from fleetmin.model import make_instance
from fleetmin.oracle import CaseSpec, brute_max_incompatible, seeded_instances


def test_koenig_fixture_a(fixture_a, backend):
    g = build_graph(fixture_a)
    cover = koenig_cover(g, Matching(((1, 2),)))
    assert cover == VertexCover(frozenset({1}), frozenset())
    assert uncovered_edges(g, cover) == 0


def test_koenig_edgeless(backend):
    g = CompatibilityGraph.from_edges(3, [])
    assert koenig_cover(g, Matching(())).size == 0


def test_koenig_fixture_b(fixture_b, backend):
    g = build_graph(fixture_b)
    cover = koenig_cover(g, Matching(((1, 2), (2, 3))))
    assert cover == VertexCover(frozenset({1, 2}), frozenset())
    assert uncovered_edges(g, cover) == 0


def test_koenig_rejects_non_maximum(fixture_a, backend):
    with pytest.raises(InvalidInputError):
        koenig_cover(build_graph(fixture_a), Matching(()))


def test_independent_set_examples(fixture_a, fixture_b):
    ind = independent_set(build_graph(fixture_a), VertexCover(frozenset({1}), frozenset()))
    assert ind == IndependentSet(frozenset({2, 3}), frozenset({1, 2, 3}))
    assert ind.size == 5
    ind = independent_set(CompatibilityGraph.from_edges(2, []), VertexCover(frozenset(), frozenset()))
    assert ind.size == 4
    ind = independent_set(build_graph(fixture_b), VertexCover(frozenset({1, 2}), frozenset()))
    assert ind == IndependentSet(frozenset({3}), frozenset({1, 2, 3}))


def test_independent_set_rejects_non_cover(fixture_a):
    with pytest.raises(InvalidInputError):
        independent_set(build_graph(fixture_a), VertexCover(frozenset(), frozenset()))


def test_extract_pairs_examples():
    assert extract_pairs(IndependentSet(frozenset({2, 3}), frozenset({1, 2, 3})), 3) == {2, 3}
    assert extract_pairs(IndependentSet(frozenset({1, 2}), frozenset({1, 2})), 2) == {1, 2}
    assert extract_pairs(IndependentSet(frozenset({2}), frozenset({1})), 2) == set()
    with pytest.raises(InvalidInputError):
        extract_pairs(IndependentSet(frozenset({1}), frozenset()), 2)


@given(st.data())
def test_extract_pairs_counting(data):
    n = data.draw(st.integers(1, 30))
    ds = data.draw(st.sets(st.integers(1, n)))
    ps = data.draw(st.sets(st.integers(1, n)))
    ind = IndependentSet(frozenset(ds), frozenset(ps))
    if ind.size < n:
        with pytest.raises(InvalidInputError):
            extract_pairs(ind, n)
        return
    k = ind.size - n
    got = extract_pairs(ind, n)
    assert len(got) == k
    assert got <= ds & ps
    assert sorted(got) == sorted(ds & ps)[:k]


def test_build_certificate_examples(fixture_a, fixture_b, single_trip, backend):
    assert build_certificate(fixture_a).trip_indices == (2, 3)
    assert build_certificate(single_trip).trip_indices == (1,)
    assert build_certificate(fixture_b).trip_indices == (3,)
    assert brute_max_incompatible(fixture_a)[0] == 2


def test_verify_certificate_examples(fixture_a, single_trip):
    assert verify_certificate(fixture_a, IncompatibleCertificate((2, 3)))
    assert not verify_certificate(fixture_a, IncompatibleCertificate((1, 2)))
    assert verify_certificate(fixture_a, IncompatibleCertificate((1,)))
    assert verify_certificate(single_trip, IncompatibleCertificate((1,)))
    with pytest.raises(InvalidInputError):
        verify_certificate(fixture_a, IncompatibleCertificate((4,)))


def test_koenig_chain_on_seeded_graphs(backend):
    for inst in seeded_instances(CaseSpec(1, 40, horizon=6.0), 150, seed=31):
        g = build_graph(inst)
        m = max_matching(g)
        cover = koenig_cover(g, m)
        assert cover.size == m.size
        assert uncovered_edges(g, cover) == 0
        ind = independent_set(g, cover)
        assert ind.size == 2 * inst.n - m.size
        cert = build_certificate(inst, g, m)
        assert cert.size == inst.n - m.size
        assert verify_certificate(inst, cert)


@pytest.mark.parametrize("delta", [0.0, 0.2, 1.0])
def test_certificate_valid_in_delta_mode(delta):
    for inst in seeded_instances(CaseSpec(1, 30, delta=delta, horizon=5.0), 60, seed=32):
        assert verify_certificate(inst, build_certificate(inst))


def test_certificate_size_equals_brute_force():
    for inst in seeded_instances(CaseSpec(1, 12), 200, seed=33):
        cert = build_certificate(inst)
        assert cert.size == brute_max_incompatible(inst)[0]


def test_non_metric_instance_certificate_still_incompatible():
    # trip 2 is faster than the road allows; the chain 1->2->3 is feasible yet 1->3 is not
    inst = make_instance([(0, 0, 1, 1), (1, 1, 10, 1), (10, 1, 20, 11)])
    cert = build_certificate(inst)
    assert verify_certificate(inst, cert)
