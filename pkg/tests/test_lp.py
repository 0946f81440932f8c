import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linprog

from discordant.analysis.lp import (
    LPInstance,
    cycle_lp_instance,
    cycle_lp_limit,
    cycle_lp_series_bound,
    dual_feasible,
    lp_bound,
    primal_feasible,
)


@st.composite
def instances(draw):
    nu = draw(st.integers(1, 8))
    b = np.cumsum(draw(st.lists(st.integers(1, 50), min_size=nu, max_size=nu)))
    c = np.cumsum(draw(st.lists(st.integers(1, 50), min_size=nu, max_size=nu)))[::-1]
    return LPInstance(tuple(int(x) for x in b), tuple(int(x) for x in c))


def test_small_instance_by_hand():
    inst = LPInstance((1, 3, 4), (5, 2, 1))
    sol = lp_bound(inst)
    assert sol.x == (1, 2, 1)
    assert sol.y == (3, 1, 1)
    assert sol.primal == sol.dual == 5 + 4 + 1


@given(instances())
def test_strong_duality_exact(inst):
    sol = lp_bound(inst)
    assert primal_feasible(inst, sol.x)
    assert dual_feasible(inst, sol.y)
    assert sol.primal == sol.dual
    assert all(isinstance(v, Fraction) for v in sol.x + sol.y)


@given(instances())
def test_greedy_matches_simplex(inst):
    nu = inst.nu
    A = np.tril(np.ones((nu, nu)))
    res = linprog(-np.array([float(x) for x in inst.c]), A_ub=A, b_ub=[float(x) for x in inst.b], bounds=(0, None))
    assert res.status == 0
    assert float(lp_bound(inst).value) == pytest.approx(-res.fun, rel=1e-9)


def test_feasibility_checks():
    inst = LPInstance((1, 2), (2, 1))
    assert not primal_feasible(inst, (Fraction(2), Fraction(0)))
    assert not primal_feasible(inst, (Fraction(-1), Fraction(0)))
    assert not dual_feasible(inst, (Fraction(0), Fraction(0)))


@pytest.mark.parametrize("b,c", [((2, 1), (2, 1)), ((1, 2), (1, 2)), ((0, 1), (2, 1)), ((1,), (1, 2)), ((), ())])
def test_instance_validation(b, c):
    with pytest.raises(ValueError):
        LPInstance(b, c)


@pytest.mark.parametrize("n", [10, 50, 200])
def test_cycle_instance(n):
    inst = cycle_lp_instance(n, n // 2)
    sol = lp_bound(inst)
    assert sol.primal == sol.dual
    value = float(sol.value)
    assert value <= cycle_lp_limit(n)
    assert value <= cycle_lp_series_bound(n, n // 2) * (1 + 1e-12)
    # the greedy value scales like n^2
    assert 0.5 < value / (20 * n * n * math.fsum(1 / r**2 for r in range(1, n // 2 + 1))) < 1


def test_cycle_instance_coefficients():
    inst = cycle_lp_instance(8, 2)
    assert float(inst.b[1]) == pytest.approx(math.sqrt(32))
    assert float(inst.c[0]) == pytest.approx(10 * math.sqrt(2) * 8**1.5)
    assert cycle_lp_limit(3) == pytest.approx(30 * math.pi**2)
    with pytest.raises(ValueError):
        cycle_lp_instance(0, 1)
