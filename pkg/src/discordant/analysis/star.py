"""Closed forms for the star and the double star.

Star states follow the ``(r, b, X)`` convention: ``r`` red and ``b = n - r``
blue vertices in total, centre colour ``X``.  The pseudo-state ``S(r)``
groups ``(r, b, R)`` with ``(r - 1, b + 1, B)``; both have ``r - 1`` red
leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..configuration import BLUE, RED

_COLOURS = {"R": RED, "B": BLUE, RED: RED, BLUE: BLUE}


def _colour(x) -> int:
    try:
        return _COLOURS[x]
    except KeyError:
        raise ValueError(f"colour must be 'R', 'B', 0 or 1 (got {x!r})") from None


def _check_r(r: int, n: int, lo: int, hi: int) -> None:
    if not lo <= r <= hi:
        raise ValueError(f"r must lie in {lo}..{hi} for n={n} (got {r})")


def star_exit_probability(r: int, n: int, entering) -> tuple[Fraction, Fraction]:
    """``(P_X(R, r), P_X(B, r))`` for the push process started in colour ``X`` of ``S(r)``.

    Exit via ``R`` leads to ``S(r+1)``, via ``B`` to ``S(r-1)``.
    """
    _check_r(r, n, 1, n - 1)
    x = _colour(entering)
    up = Fraction(r, n) if x == RED else Fraction(r - 1, n)
    return up, 1 - up


def star_exit_probability_solve(r: int, n: int, entering) -> tuple[float, float]:
    """The same exit probabilities from a linear solve of the two-state loop (oracle)."""
    _check_r(r, n, 1, n - 1)
    b = n - r
    # unknowns: probability of exiting via R from (r, R) and from (r-1, B)
    to_b = b / (b + 1)  # (r, R) -> (r-1, B)
    to_r = (r - 1) / r  # (r-1, B) -> (r, R)
    A = np.array([[1.0, -to_b], [-to_r, 1.0]])
    rhs = np.array([1.0 / (b + 1), 0.0])
    pr, pb = np.linalg.solve(A, rhs)
    up = pr if _colour(entering) == RED else pb
    return float(up), float(1 - up)


def star_rho(r: int, n: int) -> Fraction:
    """``rho = r b (r-1)(b+1) / n^2`` with ``b = n - r``."""
    b = n - r
    return Fraction(r * b * (r - 1) * (b + 1), n * n)


def star_loop_expectations(r: int, n: int) -> dict[str, Fraction]:
    """Expected loops inside ``S(r)`` conditioned on entry colour and exit route.

    Keys are ``"RR"``, ``"BR"``, ``"RB"`` and ``"BB"`` (entry then exit).
    """
    _check_r(r, n, 2, n - 2)
    b = n - r
    rho = star_rho(r, n)
    return {
        "RR": rho * Fraction(n, r) / (b + 1),
        "BR": rho * Fraction(n, r) / (b + 1),
        "RB": rho * Fraction(n, n - r) * Fraction(b, r * (b + 1)),
        "BB": rho * Fraction(n, n - r + 1) / r,
    }


@dataclass(frozen=True)
class LoopSample:
    """Monte Carlo loop counts inside one pseudo-state."""

    mean: dict[str, float]
    std: dict[str, float]
    count: dict[str, int]


def simulate_star_loops(r: int, n: int, trials: int, rng: np.random.Generator) -> LoopSample:
    """Sample the push walk inside ``S(r)`` from each entry colour until it exits.

    A loop is a return to the entry state; the count is
    ``floor(internal moves / 2)``.
    """
    _check_r(r, n, 2, n - 2)
    b = n - r
    exit_r, exit_b = 1 / (b + 1), 1 / r
    samples: dict[str, list[int]] = {k: [] for k in ("RR", "BR", "RB", "BB")}
    for entry in "RB":
        u = rng.random((trials, 64))
        for t in range(trials):
            state, moves, j = entry, 0, 0
            while True:
                if j == u.shape[1]:
                    u[t] = rng.random(u.shape[1])
                    j = 0
                draw = u[t, j]
                j += 1
                if state == "R":
                    if draw < exit_r:
                        samples[entry + "R"].append(moves // 2)
                        break
                    state = "B"
                else:
                    if draw < exit_b:
                        samples[entry + "B"].append(moves // 2)
                        break
                    state = "R"
                moves += 1
    mean = {k: float(np.mean(v)) if v else float("nan") for k, v in samples.items()}
    std = {k: float(np.std(v, ddof=1)) if len(v) > 1 else float("nan") for k, v in samples.items()}
    return LoopSample(mean, std, {k: len(v) for k, v in samples.items()})


def star_pull_run_prob(r: int, x: int, n: int) -> Fraction:
    """Probability that pull from ``(r, b, R)`` reaches ``(x, n-x, R)`` without recolouring the centre."""
    if not 1 <= r <= x <= n:
        raise ValueError(f"need 1 <= r <= x <= n (got r={r}, x={x}, n={n})")
    return Fraction(n - x + 1, n - r + 1)


def star_pull_run_product(r: int, x: int, n: int) -> Fraction:
    """Product of the per-step probabilities ``b/(b+1)`` along the run (oracle)."""
    if not 1 <= r <= x <= n:
        raise ValueError(f"need 1 <= r <= x <= n (got r={r}, x={x}, n={n})")
    out = Fraction(1)
    for j in range(r, x):
        out *= Fraction(n - j, n - j + 1)
    return out


# -- double star -----------------------------------------------------------------


def dstar_recolour_probability(b: int) -> Fraction:
    """Probability that pull recolours a red centre at the next step, ``2/(b+2)``."""
    if b < 0:
        raise ValueError("b must be non-negative")
    return Fraction(2, b + 2)


def dstar_run_prob(b: int, k: int) -> Fraction:
    """Probability that a pull run with red centres lasts at least ``k`` steps.

    ``b`` is the number of blue leaves.  ``k = 0`` gives 1; the values are
    ``(b-k+2)(b-k+1) / ((b+2)(b+1))`` for ``1 <= k <= b``.
    """
    if b < 1 or not 0 <= k <= b:
        raise ValueError(f"need 0 <= k <= b with b >= 1 (got b={b}, k={k})")
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(b, b + 2)
    if k == 2:
        return Fraction(b * (b - 1), (b + 2) * (b + 1))
    if k == b:
        return Fraction(2, (b + 1) * (b + 2))
    return Fraction((b - k + 2) * (b - k + 1), (b + 2) * (b + 1))


def dstar_run_product(b: int, k: int) -> Fraction:
    """``prod_{j<k} (b-j)/(b-j+2)``: the unsimplified run probability (oracle)."""
    out = Fraction(1)
    for j in range(k):
        out *= Fraction(b - j, b - j + 2)
    return out


@dataclass(frozen=True)
class UpBound:
    exact: Fraction
    simplified: Fraction

    @property
    def holds(self) -> bool:
        return self.exact <= self.simplified


def dstar_up_bound(r: int, n: int) -> UpBound:
    """Bound on the push up-step probability of the red-leaf count in one star.

    ``exact = (r+2)(n-r+2) / ((n+3)(n-r+1))`` and ``simplified = (r+3)/(n+3)``;
    the latter dominates when ``r <= (n-1)/2``.
    """
    if not 0 <= r <= n:
        raise ValueError(f"need 0 <= r <= n (got r={r}, n={n})")
    exact = Fraction((r + 2) * (n - r + 2), (n + 3) * (n - r + 1))
    return UpBound(exact, Fraction(r + 3, n + 3))


def dstar_up_series(r: int, n: int, terms: int | None = None) -> Fraction:
    """``1/(n-r+1) * sum_k lambda^k`` with ``lambda = (r+1)(n-r+1)/((r+2)(n-r+2))``.

    ``terms=None`` sums the geometric series in closed form.
    """
    lam = Fraction((r + 1) * (n - r + 1), (r + 2) * (n - r + 2))
    if terms is None:
        return 1 / ((n - r + 1) * (1 - lam))
    return sum((lam**k for k in range(terms)), Fraction(0)) / (n - r + 1)
