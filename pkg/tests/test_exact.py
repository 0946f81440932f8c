from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given
from hypothesis import strategies as st

from discordant import exact
from discordant.configuration import BLUE, RED, ColoringSpec, Configuration, coloring_opinions
from discordant.exact import (
    SingularSystemError,
    StateSpaceError,
    absorbing_system,
    brute_force_ET,
    brute_force_vector,
    configuration_system,
    lumped_kn_ET,
    lumped_star_ET,
    star_configuration,
    star_transitions,
)
from discordant.graph import Graph, generate
from discordant.mc import estimate_ET


@st.composite
def connected_graphs(draw, max_n=7):
    n = draw(st.integers(2, max_n))
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}  # random spanning tree
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n))
    edges |= {(min(a, b), max(a, b)) for a, b in extra if a != b}
    return Graph(n, tuple(sorted(edges)))


def test_single_edge():
    g = Graph(2, ((0, 1),))
    for p in ("push", "pull", "oblivious"):
        assert brute_force_ET(g, Configuration(g, [0, 1]), p) == pytest.approx(1.0)


def test_three_vertex_star_by_hand():
    # h = 1 + h'/2 and h' = 1 + h/2 give h = 2
    g = generate("star", 3)
    c = Configuration(g, [RED, RED, BLUE])
    assert brute_force_ET(g, c, "push") == pytest.approx(2.0)
    assert lumped_star_ET(3, "push", (2, RED)) == pytest.approx(2.0)


def test_consensus_start_is_zero():
    g = generate("cycle", 5)
    assert brute_force_ET(g, Configuration(g, [1] * 5), "push") == 0.0


@given(connected_graphs(), st.sampled_from(["push", "pull", "oblivious"]), st.data())
def test_brute_force_sane_on_random_graphs(g, p, data):
    ops = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    vec = brute_force_vector(g, Configuration(g, ops), p)
    vals = np.array(list(vec.values()))
    assert np.all(vals >= 0)
    # non-consensus states need at least one step
    full = (1 << g.n) - 1
    assert all(v >= 1 - 1e-12 for s, v in vec.items() if s not in (0, full))


@given(connected_graphs(), st.data())
def test_oblivious_red_blue_product(g, data):
    ops = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    r = ops.count(RED)
    assert brute_force_ET(g, Configuration(g, ops), "oblivious") == pytest.approx(r * (g.n - r), abs=1e-9)


def test_satisfies_first_step_equations():
    g = generate("barbell", 3)
    c = Configuration(g, coloring_opinions(g, ColoringSpec("clique_bipartite")))
    for p in ("push", "pull"):
        vec = brute_force_vector(g, c, p)
        for s, h in vec.items():
            conf = Configuration.from_bits(g, s)
            if conf.is_consensus():
                assert h == 0.0
                continue
            dist = exact.step_distribution(conf, p)
            rhs = 1 + sum(q * vec[s ^ (1 << v)] for v, q in dist.items())
            assert h == pytest.approx(rhs, rel=1e-10)


def test_matches_monte_carlo():
    g = generate("cycle", 8)
    c = Configuration(g, [0] * 4 + [1] * 4)
    truth = brute_force_ET(g, c, "pull")
    est = estimate_ET(g, c, "pull", 4000, seed=2)
    assert abs(est.mean - truth) < 4 * est.std_dev / np.sqrt(est.trials)


def test_state_space_limit():
    g = generate("cycle", 17)
    with pytest.raises(StateSpaceError):
        brute_force_ET(g, Configuration(g, [0] * 9 + [1] * 8), "push")


def test_disconnected_graph_is_singular():
    g = Graph(4, ((0, 1), (2, 3)))
    with pytest.raises(SingularSystemError):
        brute_force_ET(g, Configuration(g, [0, 1, 0, 0]), "push")


def test_absorbing_system_validation():
    with pytest.raises(ValueError, match="sums"):
        absorbing_system({"a": {"b": 0.5}}, {"b"})
    with pytest.raises(ValueError, match="unknown"):
        absorbing_system({"a": {"c": 1.0}}, {"b"})
    with pytest.raises(SingularSystemError):
        absorbing_system({"a": {"a": 1.0}, "x": {"b": 1.0}}, {"b"})


def test_geometric_absorption():
    # stay with probability 3/4: mean time 4
    sysm = absorbing_system({"a": {"a": Fraction(3, 4), "z": Fraction(1, 4)}}, {"z"})
    assert sysm.solve()[0] == pytest.approx(4.0)
    assert sysm.absorption()[0] == pytest.approx(0.25)


def test_block_solver_matches_dense():
    # random level-structured system
    rng = np.random.default_rng(0)
    sizes = [3, 5, 6, 4]
    levels = np.repeat(np.arange(len(sizes)), sizes)
    n = levels.size
    M = rng.uniform(0, 1, (n, n)) * (np.abs(levels[:, None] - levels[None, :]) <= 1)
    M = M / M.sum(axis=1, keepdims=True) * 0.9
    A = sp.csr_matrix(np.eye(n) - M)
    b = rng.uniform(size=n)
    got = exact._block_tridiagonal_solve(A, b, levels)
    np.testing.assert_allclose(got, np.linalg.solve(A.toarray(), b), rtol=1e-10)


def test_block_solver_used_for_large_systems():
    g = generate("complete", 12)
    c = Configuration(g, [0] * 6 + [1] * 6)
    sysm = configuration_system(g, c, "push")
    assert len(sysm.states) > exact.DENSE_LIMIT and sysm.levels is not None
    h = sysm.solve()
    assert h[sysm.index[c.to_bits()]] == pytest.approx(lumped_kn_ET(12, "push"), rel=1e-9)


@pytest.mark.parametrize("p", ["push", "pull", "oblivious"])
@pytest.mark.parametrize("n", [4, 6, 8])
def test_lumped_kn_all_red_counts(n, p):
    g = generate("complete", n)
    for red in range(n + 1):
        c = Configuration(g, [RED] * red + [BLUE] * (n - red))
        assert lumped_kn_ET(n, p, red=red) == pytest.approx(brute_force_ET(g, c, p), rel=1e-9, abs=1e-12)


def test_lumped_kn_exact_pull():
    # n = 4: E_0 T_1 = 1 and E_1 T_2 = 7
    assert lumped_kn_ET(4, "pull", exact=True) == 8
    assert lumped_kn_ET(4, "oblivious", exact=True) == 4
    with pytest.raises(ValueError):
        lumped_kn_ET(4, "push", red=5)


def test_star_transitions_rows():
    for p in ("push", "pull", "oblivious"):
        rows = star_transitions(7, p)
        assert len(rows) == 2 * 7 - 2
        for row in rows.values():
            assert sum(row.values()) == 1


def test_lumped_star_matches_brute_force():
    n = 6
    g = generate("star", n)
    for start in ((n - 1, BLUE), (1, RED), (3, RED), (3, BLUE)):
        c = Configuration(g, star_configuration(n, start))
        assert c.red == start[0] and c.opinions[0] == start[1]
        for p in ("push", "pull", "oblivious"):
            assert lumped_star_ET(n, p, start) == pytest.approx(brute_force_ET(g, c, p), rel=1e-10)


def test_star_invalid_start():
    with pytest.raises(ValueError):
        lumped_star_ET(5, "push", (0, RED))
    with pytest.raises(ValueError):
        lumped_star_ET(5, "push", (2, 3))
    assert lumped_star_ET(5, "push", (5, RED)) == 0.0
