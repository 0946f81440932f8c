import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discordant import kernels
from discordant.graph import FAMILIES, Graph, generate
from discordant.mc import trial_generator

HAVE_COMPILED = "compiled" in kernels.BACKENDS


def _run(g, ops, proto, seed, backend, cutoff=10**7):
    arr = np.asarray(ops, dtype=np.int8).copy()
    steps, left = kernels.run(g, arr, proto, trial_generator(seed, 0), cutoff, backend=backend)
    return steps, left, arr.tolist()


def test_backend_registry():
    assert "python" in kernels.BACKENDS
    assert kernels.BACKEND in kernels.BACKENDS
    with pytest.raises(ValueError):
        kernels.run(generate("cycle", 4), np.zeros(4, np.int8), kernels.PUSH, np.random.default_rng(), 1, backend="fortran")


@pytest.mark.parametrize("proto", [kernels.PUSH, kernels.PULL, kernels.OBLIVIOUS])
def test_final_state_is_consensus(backend, proto):
    g = generate("barbell", 4)
    steps, left, ops = _run(g, [0] * 4 + [1] * 4, proto, 3, backend)
    assert left == 0 and len(set(ops)) == 1 and steps > 0


def test_cutoff_reports_remaining_edges(backend):
    g = generate("complete", 10)
    steps, left, _ = _run(g, [0] * 5 + [1] * 5, kernels.PULL, 1, backend, cutoff=3)
    assert steps == 3 and left > 0


def test_zero_steps_at_consensus(backend):
    steps, left, _ = _run(generate("star", 5), [1] * 5, kernels.PUSH, 0, backend)
    assert (steps, left) == (0, 0)


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
@given(
    st.sampled_from(FAMILIES),
    st.integers(3, 9),
    st.sampled_from([kernels.PUSH, kernels.PULL, kernels.OBLIVIOUS]),
    st.integers(0, 2**31),
    st.data(),
)
def test_backends_identical_trajectories(family, size, proto, seed, data):
    g = generate(family, size)
    ops = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    assert _run(g, ops, proto, seed, "python") == _run(g, ops, proto, seed, "compiled")


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
def test_backends_identical_long_run():
    # crosses at least one 4096-draw refill of the python block buffer
    g = generate("cycle", 160)
    ops = [0] * 80 + [1] * 80
    for proto in (kernels.PUSH, kernels.PULL, kernels.OBLIVIOUS):
        a = _run(g, ops, proto, 11, "python")
        assert 2 * a[0] > 4096
        assert a == _run(g, ops, proto, 11, "compiled")


@pytest.mark.skipif(not HAVE_COMPILED, reason="compiled kernel not built")
def test_backends_leave_generator_in_same_state():
    g = generate("star", 40)
    start = np.array([0] * 20 + [1] * 20, dtype=np.int8)
    results = {}
    for b in ("python", "compiled"):
        rng = np.random.default_rng(5)
        steps = [kernels.run(g, start.copy(), kernels.PULL, rng, 10**7, backend=b) for _ in range(3)]
        results[b] = (steps, rng.bit_generator.state)
    assert results["python"] == results["compiled"]


def _brute_ratios(g, ew, vw):
    # ew indexed per CSR slot; convert to per-edge lookups
    w = {}
    for v in range(g.n):
        for k in range(g.indptr[v], g.indptr[v + 1]):
            w[(v, int(g.indices[k]))] = ew[k]
    out = np.full(1 << (g.n - 1), np.inf)
    total = vw.sum()
    for mask in range(1, 1 << (g.n - 1)):
        ins = [(mask >> v) & 1 for v in range(g.n)]
        cut = sum(w[(u, v)] for u, v in g.edges if ins[u] != ins[v])
        a = sum(vw[v] for v in range(g.n) if ins[v])
        out[mask] = cut / min(a, total - a)
    return out


@pytest.mark.parametrize("family,size", [("cycle", 7), ("star", 6), ("barbell", 4), ("double_star", 2)])
def test_cut_ratios_against_direct_enumeration(backend, family, size):
    g = generate(family, size)
    rng = np.random.default_rng(size)
    ew = rng.uniform(0.5, 2.0, len(g.indices))
    # symmetric weights per edge
    sym = {}
    for v in range(g.n):
        for k in range(g.indptr[v], g.indptr[v + 1]):
            key = tuple(sorted((v, int(g.indices[k]))))
            sym.setdefault(key, ew[k])
            ew[k] = sym[key]
    vw = rng.uniform(0.5, 2.0, g.n)
    got = kernels.cut_ratios(g, ew, vw, backend=backend)
    np.testing.assert_allclose(got, _brute_ratios(g, ew, vw), rtol=1e-12)


def test_cut_ratios_small_graph(backend):
    g = Graph(3, ((0, 1), (1, 2)))
    got = kernels.cut_ratios(g, np.ones(4), np.array([1.0, 2.0, 1.0]), backend=backend)
    # S = {0}: cut 1 / 1; S = {1}: cut 2 / 2; S = {0, 1}: cut 1 / 1
    np.testing.assert_allclose(got[1:], [1.0, 1.0, 1.0])
