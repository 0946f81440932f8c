"""Birth-and-death chains on ``{0..N}``: hitting times, weights and ruin.

A chain is given by its up-probabilities ``p[0..N]`` with ``q_i = 1 - p_i``
for ``i >= 1`` and ``q_0 = 0``; there is no holding probability.  In the
reflecting variant ``p[0] = 1``.

Exponential-size quantities are handled in log space for floats, or exactly
when the probabilities are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.special import logsumexp


@dataclass(frozen=True)
class ChainSpec:
    p: tuple
    absorbing_zero: bool = False

    def __post_init__(self) -> None:
        p = tuple(self.p)
        if all(isinstance(x, (Fraction, int)) for x in p):
            p = tuple(Fraction(x) for x in p)
        object.__setattr__(self, "p", p)
        if len(p) < 2:
            raise ValueError("chain needs at least two states")
        if any(x < 0 or x > 1 for x in p):
            raise ValueError("up-probabilities must lie in [0, 1]")
        if p[-1] != 0:
            raise ValueError("p_N must be 0")
        if not self.absorbing_zero and p[0] != 1:
            raise ValueError("reflecting chain needs p_0 = 1")

    @property
    def N(self) -> int:
        return len(self.p) - 1

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (Fraction, int)) for x in self.p)

    def q(self, i: int):
        if i == 0:
            return 0
        return 1 - self.p[i]

    def matrix(self) -> np.ndarray:
        """Dense transition matrix (floats); state 0 self-loops if absorbing."""
        N = self.N
        P = np.zeros((N + 1, N + 1))
        for i in range(N + 1):
            if i == 0 and self.absorbing_zero:
                P[0, 0] = 1.0
                continue
            if i < N:
                P[i, i + 1] = float(self.p[i])
            if i > 0:
                P[i, i - 1] = float(self.q(i))
        return P


@dataclass(frozen=True)
class HitProfile:
    """``step[i-1] = E_{i-1} T_i`` and ``cumulative[M-1] = E_0 T_M`` for ``i, M = 1..N``."""

    step: tuple
    cumulative: tuple

    @property
    def N(self) -> int:
        return len(self.step)

    def rows(self):
        for i, (s, c) in enumerate(zip(self.step, self.cumulative), start=1):
            yield i, s, c


def _frac_or_float(x, exact: bool):
    return Fraction(x) if exact else float(x)


def push_chain(n: int, delta: int = 0, exact: bool = False) -> ChainSpec:
    """Push chain on ``{0..n/2}``: interior up-probability ``1/2 + (i + delta)/n``."""
    _check_even(n)
    if delta not in (-1, 0, 1):
        raise ValueError("delta must be -1, 0 or +1")
    N = n // 2
    half = Fraction(1, 2)
    p = [1] + [half + Fraction(i + delta, n) for i in range(1, N)] + [0]
    return ChainSpec(tuple(_frac_or_float(x, exact) for x in p))


def pull_chain(n: int, delta: int = 0, exact: bool = False) -> ChainSpec:
    """Pull chain: interior up-probability ``1/2 - (i + delta)/n``."""
    _check_even(n)
    if delta not in (-1, 0, 1):
        raise ValueError("delta must be -1, 0 or +1")
    N = n // 2
    half = Fraction(1, 2)
    p = [1] + [half - Fraction(i + delta, n) for i in range(1, N)] + [0]
    return ChainSpec(tuple(_frac_or_float(x, exact) for x in p))


def _check_even(n: int) -> None:
    if n % 2 or n < 4:
        raise ValueError(f"chain size n must be even and >= 4 (got {n})")


def _check_reflecting(c: ChainSpec) -> None:
    if c.absorbing_zero:
        raise ValueError("operation needs the reflecting variant")
    for i in range(c.N):
        if c.p[i] <= 0:
            raise ValueError(f"p_{i} = 0 makes the chain reducible")
    for i in range(1, c.N + 1):
        if c.q(i) <= 0:
            raise ValueError(f"q_{i} = 0 makes the chain reducible")


def stationary_weights(c: ChainSpec):
    """Unnormalised weights with ``w_0 = 1`` and ``w_i p_i = w_{i+1} q_{i+1}``.

    Returns a list of Fractions for exact chains, otherwise a float array
    (which may overflow for exponential chains; see :func:`log_stationary_weights`).
    """
    _check_reflecting(c)
    if c.exact:
        w = [Fraction(1)]
        for i in range(c.N):
            w.append(w[-1] * c.p[i] / c.q(i + 1))
        return w
    return np.exp(log_stationary_weights(c))


def log_stationary_weights(c: ChainSpec) -> np.ndarray:
    _check_reflecting(c)
    p = np.array([float(x) for x in c.p])
    q = 1.0 - p
    inc = np.log(p[:-1]) - np.log(q[1:])
    return np.concatenate([[0.0], np.cumsum(inc)])


def hit_profile(c: ChainSpec, method: str = "recurrence") -> HitProfile:
    """Expected upward hitting times ``E_{i-1} T_i`` and their prefix sums.

    ``method`` picks the route:

    ``recurrence``  first-step analysis, ``E_{i-1}T_i = (1 + q_{i-1} E_{i-2}T_{i-1}) / p_{i-1}``;
    ``balance``     ``(1 / (q_i pi(i))) * sum_{k<i} pi(k)`` from the stationary weights;
    ``product``     the double sum of ratio products, ``O(N^2)``.

    Exact (Fraction) chains are evaluated exactly by every method.
    """
    _check_reflecting(c)
    N = c.N
    if method == "recurrence":
        step = []
        prev = 0
        for i in range(1, N + 1):
            cur = (1 + c.q(i - 1) * prev) / c.p[i - 1]
            step.append(cur)
            prev = cur
    elif method == "balance":
        step = _balance_steps(c)
    elif method == "product":
        step = _product_steps(c)
    else:
        raise ValueError(f"unknown method {method!r}")
    if c.exact:
        cum, acc = [], Fraction(0)
        for s in step:
            acc += s
            cum.append(acc)
        return HitProfile(tuple(step), tuple(cum))
    step = [float(s) for s in step]
    return HitProfile(tuple(step), tuple(np.cumsum(step).tolist()))


def _balance_steps(c: ChainSpec) -> list:
    N = c.N
    if c.exact:
        w = stationary_weights(c)
        out, acc = [], Fraction(0)
        for i in range(1, N + 1):
            acc += w[i - 1]
            out.append(acc / (c.q(i) * w[i]))
        return out
    logw = log_stationary_weights(c)
    logcum = np.logaddexp.accumulate(logw)
    q = np.array([1.0 - float(x) for x in c.p])
    return [math.exp(logcum[i - 1] - logw[i]) / q[i] for i in range(1, N + 1)]


def _product_steps(c: ChainSpec) -> list:
    N = c.N
    if c.exact:
        out = []
        for i in range(1, N + 1):
            total = Fraction(0)
            for k in range(i):
                term = 1 / c.p[k]
                for j in range(k + 1, i):
                    term *= c.q(j) / c.p[j]
                total += term
            out.append(total)
        return out
    p = np.array([float(x) for x in c.p])
    q = 1.0 - p
    r = np.zeros(N + 1)
    r[1:N] = np.log(q[1:N]) - np.log(p[1:N])
    R = np.cumsum(r)  # R[k] = sum_{j=1..k} log(q_j/p_j)
    logp = np.log(p[:N])
    out = []
    for i in range(1, N + 1):
        k = np.arange(i)
        out.append(math.exp(logsumexp(-logp[k] + R[i - 1] - R[k])))
    return out


def hitting_time_solve(c: ChainSpec, target: int) -> np.ndarray:
    """Dense first-step solve of ``E_i T_target`` for every ``i < target`` (oracle)."""
    P = c.matrix()[: target, : target]
    A = np.eye(target) - P
    return np.linalg.solve(A, np.ones(target))


# -- gambler's ruin ----------------------------------------------------------


def ruin_probability(p_up, nu: int, start: int = 1):
    """Probability that a +/-1 walk with up-probability ``p_up`` hits ``nu`` before 0.

    Exact when ``p_up`` is a Fraction.
    """
    if not 0 < p_up < 1:
        raise ValueError("p_up must lie strictly between 0 and 1")
    if nu < 2:
        raise ValueError("nu must be at least 2")
    if not 1 <= start < nu:
        raise ValueError("start must satisfy 1 <= start < nu")
    q = 1 - p_up
    if p_up == q:
        return Fraction(start, nu) if isinstance(p_up, Fraction) else start / nu
    ratio = q / p_up
    return (ratio**start - 1) / (ratio**nu - 1)


def ruin_probability_solve(p_up: float, nu: int, start: int = 1) -> float:
    """Dense linear solve of the absorbing walk on ``{0..nu}`` (oracle)."""
    size = nu - 1  # interior states 1..nu-1
    A = np.eye(size)
    b = np.zeros(size)
    for i in range(1, nu):
        row = i - 1
        if i + 1 < nu:
            A[row, row + 1] -= p_up
        else:
            b[row] += p_up
        if i - 1 > 0:
            A[row, row - 1] -= 1 - p_up
    return float(np.linalg.solve(A, b)[start - 1])


def symmetric_duration(n: int, start: int) -> int:
    """Expected time for a symmetric walk from ``start`` to hit 1 or ``n-1``."""
    if not 1 <= start <= n - 1:
        raise ValueError(f"start must lie in 1..{n - 1}")
    return (start - 1) * (n - 1 - start)


# -- complete graph identities ----------------------------------------------


def kn_pull_last_step_closed_form(n: int) -> int:
    """``sum_{k=0}^{N-1} C(n, N+k) = (2^n - 2 + C(n, N)) / 2``."""
    _check_even(n)
    return (2**n - 2 + math.comb(n, n // 2)) // 2


def kn_pull_weights(n: int) -> list[Fraction]:
    """Stationary weights of the pull chain relative to ``w_N = 1``.

    ``w_k = C(n, N+k)`` for ``k >= 1``; the folded middle state carries
    ``C(n, N)/2`` because both colours reach it from state 1.
    """
    w = stationary_weights(pull_chain(n, 0, exact=True))
    return [x / w[-1] for x in w]


@dataclass(frozen=True)
class SuryCheck:
    n: int
    lhs: Fraction
    rhs: Fraction
    index_range: str

    @property
    def difference(self) -> Fraction:
        return self.lhs - self.rhs


def _sury_rhs(n: int) -> Fraction:
    return Fraction(n + 1, 2**n) * sum(Fraction(2**i, i + 1) for i in range(n + 1))


def sury_candidates(n: int) -> dict[str, Fraction]:
    """Reciprocal-binomial sums over the plausible readings of the index range."""
    N = n // 2
    inv = [Fraction(1, math.comb(n, m)) for m in range(n + 1)]
    return {
        "k=1..N of 1/C(n,N+k)": sum(inv[N + 1 :], Fraction(0)),
        "k=0..N of 1/C(n,N+k)": sum(inv[N:], Fraction(0)),
        "k=0..N-1 of 1/C(n,N+k)": sum(inv[N:n], Fraction(0)),
        "m=0..n of 1/C(n,m)": sum(inv, Fraction(0)),
    }


def sury_check(n: int) -> SuryCheck:
    """Compare the reciprocal-binomial sum with ``(n+1)/2^n sum_i 2^i/(i+1)``.

    Every candidate index range is evaluated exactly; the one equal to the
    right-hand side is reported (the full range ``0..n`` for every even n).
    """
    if n % 2:
        raise ValueError("n must be even")
    rhs = _sury_rhs(n)
    cands = sury_candidates(n)
    for name, val in cands.items():
        if val == rhs:
            return SuryCheck(n, val, rhs, name)
    name = "k=1..N of 1/C(n,N+k)"
    return SuryCheck(n, cands[name], rhs, name)
