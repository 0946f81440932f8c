from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from discordant.analysis import star
from discordant.configuration import BLUE, RED
from discordant.exact import star_transitions


@pytest.mark.parametrize("n", [4, 7, 20, 50])
def test_exit_probabilities_match_solve(n):
    for r in range(1, n):
        for x in "RB":
            up, down = star.star_exit_probability(r, n, x)
            su, sd = star.star_exit_probability_solve(r, n, x)
            assert abs(float(up) - su) < 1e-12 and abs(float(down) - sd) < 1e-12
        assert star.star_exit_probability(r, n, "R")[0] == Fraction(r, n)
        assert star.star_exit_probability(r, n, BLUE)[0] == Fraction(r - 1, n)


def test_exit_probabilities_against_simulation():
    rng = np.random.default_rng(1)
    r, n = 3, 8
    b = n - r
    hits = 0
    trials = 20000
    for _ in range(trials):
        state = "R"
        while True:
            u = rng.random()
            if state == "R":
                if u < 1 / (b + 1):
                    hits += 1
                    break
                state = "B"
            else:
                if u < 1 / r:
                    break
                state = "R"
    p = r / n
    assert abs(hits / trials - p) < 5 * np.sqrt(p * (1 - p) / trials)


def test_exit_probability_errors():
    with pytest.raises(ValueError):
        star.star_exit_probability(0, 5, "R")
    with pytest.raises(ValueError):
        star.star_exit_probability(2, 5, "G")


def test_lumped_push_rows_agree_with_loop_exits():
    # the pseudo-state loop uses the same rows as the lumped star chain
    n = 9
    rows = star_transitions(n, "push")
    for r in range(2, n):
        b = n - r
        assert rows[(r, RED)][(r + 1, RED)] == Fraction(1, b + 1)
        assert rows[(r - 1, BLUE)][(r - 2, BLUE)] == Fraction(1, r)


def test_pull_from_near_consensus():
    # blue centre, all leaves red: a leaf pulls blue with probability (n-1)/n,
    # otherwise the centre pulls red and consensus is reached
    n = 7
    rows = star_transitions(n, "pull")
    row = rows[(n - 1, BLUE)]
    assert row == {(n - 2, BLUE): Fraction(n - 1, n), (n, RED): Fraction(1, n)}


def test_rho_and_loop_expectations():
    r, n = 4, 8
    assert star.star_rho(r, n) == Fraction(4 * 4 * 3 * 5, 64)
    mu = star.star_loop_expectations(r, n)
    assert set(mu) == {"RR", "BR", "RB", "BB"}
    assert all(v == Fraction(3, 2) for v in mu.values())
    for n in (40, 80, 400):
        for v in star.star_loop_expectations(n // 2, n).values():
            assert abs(float(v) / (n / 4) - 1) < 0.1
    with pytest.raises(ValueError):
        star.star_loop_expectations(1, 8)


def test_loop_expectations_against_simulation():
    sample = star.simulate_star_loops(4, 8, 20000, np.random.default_rng(3))
    exact = star.star_loop_expectations(4, 8)
    for key, val in exact.items():
        se = sample.std[key] / np.sqrt(sample.count[key])
        assert abs(sample.mean[key] - float(val)) < 5 * se


def test_pull_run_probability():
    for n in range(2, 15):
        for r in range(1, n + 1):
            for x in range(r, n + 1):
                assert star.star_pull_run_prob(r, x, n) == star.star_pull_run_product(r, x, n)
    with pytest.raises(ValueError):
        star.star_pull_run_prob(3, 2, 5)


def test_dstar_run_probability():
    for b in range(1, 25):
        for k in range(0, b + 1):
            assert star.dstar_run_prob(b, k) == star.dstar_run_product(b, k)
    assert star.dstar_run_prob(6, 0) == 1
    assert star.dstar_recolour_probability(6) == Fraction(1, 4)
    assert 1 - star.dstar_run_prob(6, 1) == star.dstar_recolour_probability(6)
    with pytest.raises(ValueError):
        star.dstar_run_prob(3, 4)
    with pytest.raises(ValueError):
        star.dstar_recolour_probability(-1)


def test_dstar_up_bound_examples():
    ub = star.dstar_up_bound(0, 10)
    assert ub.exact == Fraction(24, 143) and ub.simplified == Fraction(3, 13)
    assert ub.holds


@given(st.integers(1, 200), st.data())
def test_dstar_up_bound_holds_below_half(n, data):
    r = data.draw(st.integers(0, (n - 1) // 2))
    assert star.dstar_up_bound(r, n).holds


@given(st.integers(1, 60), st.data())
def test_dstar_series_closed_form(n, data):
    r = data.draw(st.integers(0, n))
    closed = star.dstar_up_series(r, n)
    assert closed == star.dstar_up_bound(r, n).exact
    assert star.dstar_up_series(r, n, terms=50) < closed


def test_dstar_series_convergence():
    closed = star.dstar_up_series(2, 10)
    assert abs(float(star.dstar_up_series(2, 10, terms=2000)) - float(closed)) < 1e-12
