import numpy as np
import pytest

from fleetmin import kernels
from fleetmin.compat import build_graph
from fleetmin.duality import build_certificate
from fleetmin.ingest import GeneratorConfig, generate_instance
from fleetmin.matching import max_matching
from fleetmin.oracle import CaseSpec, seeded_instances

from conftest import AVAILABLE_BACKENDS

needs_both = pytest.mark.skipif(len(AVAILABLE_BACKENDS) < 2, reason="numba unavailable")


def test_backend_switching():
    before = kernels.get_backend()
    with kernels.use_backend("numpy"):
        assert kernels.get_backend() == "numpy"
    assert kernels.get_backend() == before
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def _everything(inst):
    g = build_graph(inst)
    m = max_matching(g)
    match_l, match_r = m.arrays(inst.n)
    reach = kernels.alternating_reach(inst.n, g.indptr, g.indices, match_l, match_r)
    cert = build_certificate(inst, g, m)
    return g, m, reach, cert


@needs_both
@pytest.mark.parametrize("model", ["line", "euclidean", "manhattan"])
@pytest.mark.parametrize("delta", [None, 0.4])
def test_backends_identical(model, delta):
    for inst in seeded_instances(CaseSpec(1, 300, model=model, delta=delta, horizon=8.0), 12, seed=61):
        out = []
        for b in AVAILABLE_BACKENDS:
            with kernels.use_backend(b):
                out.append(_everything(inst))
        (g0, m0, r0, c0), (g1, m1, r1, c1) = out
        assert g0 == g1
        assert m0 == m1
        np.testing.assert_array_equal(r0[0], r1[0])
        np.testing.assert_array_equal(r0[1], r1[1])
        assert c0 == c1


@needs_both
def test_count_edges_within_backends():
    inst = generate_instance(GeneratorConfig(n=200, seed=62))
    g = build_graph(inst)
    rng = np.random.default_rng(0)
    for _ in range(5):
        a = rng.random(inst.n) < 0.5
        b = rng.random(inst.n) < 0.5
        counts = []
        for be in AVAILABLE_BACKENDS:
            with kernels.use_backend(be):
                counts.append(kernels.count_edges_within(inst.n, g.indptr, g.indices, a, b))
        expected = sum(1 for i, j in g.edges() if a[i - 1] and b[j - 1])
        assert counts == [expected] * len(counts)


def test_disable_flag_selects_fallback():
    import subprocess
    import sys
    code = "from fleetmin import kernels; print(kernels.get_backend())"
    env = {"FLEETMIN_DISABLE_NUMBA": "1", "PATH": ""}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
