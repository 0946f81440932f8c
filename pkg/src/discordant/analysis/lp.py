"""Greedy solution and dual certificate for prefix-constrained linear programs.

The program is ``max sum_j c_j x_j`` subject to ``sum_{j<=r} x_j <= b_r`` and
``x >= 0``, with ``0 < b_1 < ... < b_nu`` and ``c_1 > ... > c_nu > 0``.  The
greedy point ``x_1 = b_1, x_j = b_j - b_{j-1}`` is optimal, certified by the
dual point ``y_nu = c_nu, y_j = c_j - c_{j+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPInstance:
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        b = tuple(Fraction(x) for x in self.b)
        c = tuple(Fraction(x) for x in self.c)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        if len(b) != len(c) or not b:
            raise ValueError("b and c must be non-empty and of equal length")
        if b[0] <= 0 or any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError("b must be positive and strictly increasing")
        if c[-1] <= 0 or any(x <= y for x, y in zip(c, c[1:])):
            raise ValueError("c must be positive and strictly decreasing")

    @property
    def nu(self) -> int:
        return len(self.b)


@dataclass(frozen=True)
class LPSolution:
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    primal: Fraction
    dual: Fraction

    @property
    def value(self) -> Fraction:
        return self.primal


def primal_feasible(inst: LPInstance, x: Sequence[Fraction]) -> bool:
    acc = Fraction(0)
    for xj, br in zip(x, inst.b):
        acc += xj
        if xj < 0 or acc > br:
            return False
    return True


def dual_feasible(inst: LPInstance, y: Sequence[Fraction]) -> bool:
    acc = Fraction(0)
    for yj, cj in zip(reversed(y), reversed(inst.c)):
        acc += yj
        if yj < 0 or acc < cj:
            return False
    return True


def lp_bound(inst: LPInstance) -> LPSolution:
    """Greedy primal, dual certificate and their (equal) objective values."""
    b, c = inst.b, inst.c
    x = (b[0],) + tuple(b[j] - b[j - 1] for j in range(1, inst.nu))
    y = tuple(c[j] - c[j + 1] for j in range(inst.nu - 1)) + (c[-1],)
    if not primal_feasible(inst, x) or not dual_feasible(inst, y):
        raise AssertionError("greedy certificate infeasible")
    primal = sum((cj * xj for cj, xj in zip(c, x)), Fraction(0))
    dual = sum((bj * yj for bj, yj in zip(b, y)), Fraction(0))
    if primal != dual:
        raise AssertionError("primal and dual objectives differ")
    return LPSolution(x, y, primal, dual)


def cycle_lp_instance(n: int, r0: int) -> LPInstance:
    """Phase LP of the cycle bound: ``b_r = sqrt(2 r n)``, ``c_r = 10 sqrt(2) n^{3/2} / r^{3/2}``.

    The irrational coefficients are rounded to doubles and then taken as
    exact rationals, so the certificate is checked exactly for that instance.
    """
    if n < 1 or r0 < 1:
        raise ValueError("n and r0 must be positive")
    b = [Fraction(math.sqrt(2 * r * n)) for r in range(1, r0 + 1)]
    c = [Fraction(10 * math.sqrt(2) * n**1.5 / r**1.5) for r in range(1, r0 + 1)]
    return LPInstance(tuple(b), tuple(c))


def cycle_lp_limit(n: int) -> float:
    """``(10 pi^2 / 3) n^2``."""
    return 10 * math.pi**2 / 3 * n * n


def cycle_lp_series_bound(n: int, r0: int) -> float:
    """``20 n^2 sum_{r<=r0} 1/r^2``."""
    return 20 * n * n * math.fsum(1 / r**2 for r in range(1, r0 + 1))
