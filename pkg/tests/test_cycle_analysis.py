import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discordant.analysis import cycle as cyc
from discordant.configuration import Configuration
from discordant.graph import Graph, generate
from discordant.protocols import step, step_distribution

cyclic_opinions = st.integers(3, 14).flatmap(
    lambda n: st.lists(st.integers(0, 1), min_size=n, max_size=n).filter(lambda x: len(set(x)) == 2)
)


def test_runs_example():
    d = cyc.runs_of([0, 0, 1, 0, 1, 1, 1, 0])
    # runs start at vertex 2: [1], [0], [1 1 1], [0 0 0] (wrapping)
    assert d.start == 2
    assert d.lengths == (1, 1, 3, 3)
    assert (d.k, d.s, d.kappa, d.n) == (4, 2, 6, 8)
    assert d.length_at(0) == 3 and d.length_at(2) == 1


def test_runs_consensus_and_errors():
    assert cyc.runs_of([1, 1, 1]).lengths == ()
    assert cyc.potential([0, 0, 0, 0]) == 0
    g = generate("cycle", 5)
    with pytest.raises(ValueError):
        cyc.run_decomposition(Configuration(g, [1] * 5))
    star = generate("star", 5)
    with pytest.raises(ValueError):
        cyc.run_decomposition(Configuration(star, [0, 1, 0, 1, 0]))
    assert not cyc.is_cycle_graph(Graph(4, ((0, 1), (1, 2), (2, 3), (0, 2))))


@given(cyclic_opinions)
def test_kappa_counts_discordant_vertices(ops):
    g = generate("cycle", len(ops))
    c = Configuration(g, ops)
    d = cyc.run_decomposition(c)
    assert d.kappa == len(c.discordant_vertices)
    assert d.n == len(ops) and d.k % 2 == 0
    assert d.k == c.k


@given(cyclic_opinions, st.sampled_from(["push", "pull"]))
def test_drift_is_mean_of_vertex_drifts_and_matches_direct_expectation(ops, p):
    g = generate("cycle", len(ops))
    c = Configuration(g, ops)
    res = cyc.psi_drift(c, p)
    base = cyc.potential(ops)
    direct = 0.0
    for v, q in step_distribution(c, p).items():
        new = list(ops)
        new[v] ^= 1
        direct += q * (cyc.potential(new) - base)
    assert res.delta == pytest.approx(direct, abs=1e-12)
    # per-edge split partitions the vertex drifts
    assert math.fsum(e.delta for e in res.edges) == pytest.approx(math.fsum(res.delta_v.values()), abs=1e-12)


def test_edge_cases_classified():
    g = generate("cycle", 8)
    c = Configuration(g, [0, 0, 1, 0, 1, 1, 1, 0])
    res = cyc.psi_drift(c, "push")
    counts = Counter(e.case for e in res.edges)
    # runs 1,1,3,3: edges between the two singletons (C), singleton-long (B), long-long (A)
    assert counts == {"A": 1, "B": 2, "C": 1}
    b_edges = [e for e in res.edges if e.case == "B"]
    for e in b_edges:
        assert res.runs.length_at(e.v) == 1


def test_oblivious_rejected():
    g = generate("cycle", 5)
    with pytest.raises(ValueError):
        cyc.psi_drift(Configuration(g, [0, 1, 1, 0, 0]), "oblivious")


def test_drift_against_monte_carlo():
    g = generate("cycle", 10)
    ops = [0, 0, 0, 1, 0, 1, 1, 0, 1, 1]
    c = Configuration(g, ops)
    rng = np.random.default_rng(0)
    base = cyc.potential(ops)
    for p in ("push", "pull"):
        samples = [cyc.potential(step(c, p, rng).configuration.opinions) - base for _ in range(20000)]
        se = np.std(samples) / math.sqrt(len(samples))
        assert abs(np.mean(samples) - cyc.psi_drift(c, p).delta) < 5 * se


@pytest.mark.parametrize("n", range(3, 11))
def test_drift_scan_small(n):
    report = cyc.drift_scan(n)
    assert report.ok, report.violations[:3]
    assert report.configurations == 2**n - 2
    assert all(m <= cyc.TOL for m, _ in report.worst.values())


def test_reduced_scan_same_worst():
    full = cyc.drift_scan(9)
    red = cyc.drift_scan(9, reduce=True)
    assert red.configurations < full.configurations
    for key, (m, _) in full.worst.items():
        assert red.worst[key][0] == pytest.approx(m, abs=1e-12)


def test_canonical_orbits():
    n = 6
    reps = [b for b in range(1, 2**n - 1) if cyc._canonical(b, n)]
    # orbits of non-constant binary necklaces of length 6 under rotation and complement
    assert len(reps) == 7


def test_tight_pull_case_c():
    # alternating C_6: every edge is case C; pull keeps each below sqrt(3) - 3
    g = generate("cycle", 6)
    res = cyc.psi_drift(Configuration(g, [0, 1] * 3), "pull")
    assert {e.case for e in res.edges} == {"C"}
    for e in res.edges:
        assert e.delta <= math.sqrt(3) - 3 + 1e-12


def test_curvature_checks():
    for ell in (2, 3, 10, 1000, 10**6):
        assert cyc.sqrt_curvature_checks(ell, 1, 1).curvature
    chk = cyc.sqrt_curvature_checks(5, 1, 1)
    assert chk.merge and abs(chk.merge_margin) < 1e-30
    for l1 in range(1, 30):
        for l2 in range(1, 30):
            assert cyc.sqrt_curvature_checks(2, l1, l2).merge
    assert cyc.merge_margin(1, 1) == pytest.approx(0, abs=1e-15)
    assert cyc.curvature_margin(4) > 0
    with pytest.raises(ValueError):
        cyc.sqrt_curvature_checks(0, 1, 1)


def test_coefficients():
    from discordant.protocols import Protocol

    assert cyc.EDGE_COEF[Protocol.PUSH] == {"A": 1 / 4, "B": 1 / 2, "C": 1 / 5}
    assert cyc.EDGE_COEF[Protocol.PULL] == {"A": 1 / 4, "B": 1 / 10, "C": 1 / 2}
    assert cyc.AGGREGATE_COEF[Protocol.PUSH] == 1 / 40
    assert cyc.AGGREGATE_COEF[Protocol.PULL] == 1 / 80
