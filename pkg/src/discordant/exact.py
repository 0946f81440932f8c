"""Exact expected consensus times from absorbing Markov chains.

:func:`brute_force_ET` enumerates the reachable configurations of a small
graph and solves ``(I - Q) h = 1``; :func:`lumped_kn_ET` and
:func:`lumped_star_ET` solve the reduced chains of the complete graph and
the star.  All transition probabilities of the full chain come from
:func:`discordant.protocols.step_distribution`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Mapping

import numpy as np
import scipy.sparse as sp
from scipy.linalg import lu_factor, lu_solve
from scipy.sparse.linalg import spsolve

from . import chains
from .configuration import BLUE, RED, Configuration
from .graph import Graph
from .protocols import Protocol, as_protocol, step_distribution

MAX_VERTICES = 16
DENSE_LIMIT = 4000
RESIDUAL_TOL = 1e-9


class StateSpaceError(ValueError):
    """State space exceeds the enumeration limit."""


class SingularSystemError(ValueError):
    """Some transient state cannot reach absorption."""


@dataclass(frozen=True)
class AbsorbingSystem:
    """Transient states, their sub-stochastic rows and the absorbing set.

    ``Q[i, j]`` is the probability of moving from transient state
    ``states[i]`` to transient state ``states[j]``; the missing mass of each
    row is absorbed.  Optional ``levels`` assign each transient state an
    integer such that transitions only join adjacent levels; large systems
    are then solved by block elimination level by level.
    """

    states: tuple
    Q: sp.csr_matrix
    absorbing: frozenset
    levels: np.ndarray | None = None

    @property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.states)}

    def absorption(self) -> np.ndarray:
        return 1.0 - np.asarray(self.Q.sum(axis=1)).ravel()

    def solve(self) -> np.ndarray:
        """Expected steps to absorption from every transient state."""
        size = len(self.states)
        if size == 0:
            return np.zeros(0)
        A = sp.identity(size, format="csr") - self.Q
        ones = np.ones(size)
        if size < DENSE_LIMIT:
            h = np.linalg.solve(A.toarray(), ones)
        elif self.levels is not None:
            h = _block_tridiagonal_solve(A, ones, self.levels)
        else:
            h = spsolve(A.tocsc(), ones)
            # one step of iterative refinement
            h = h + spsolve(A.tocsc(), ones - A @ h)
        res = np.max(np.abs(A @ h - ones))
        if not np.all(np.isfinite(h)) or res > RESIDUAL_TOL * max(1.0, float(np.max(np.abs(h)))):
            raise SingularSystemError(f"linear solve failed (residual {res:.3g})")
        return h


def _block_tridiagonal_solve(A: sp.csr_matrix, b: np.ndarray, levels: np.ndarray) -> np.ndarray:
    """Solve ``A x = b`` when ``A`` couples only equal or adjacent ``levels``."""
    values = np.unique(levels)
    blocks = [np.flatnonzero(levels == v) for v in values]
    for lo, hi in zip(values[:-1], values[1:]):
        if hi != lo + 1:
            raise ValueError("levels must be consecutive integers")
    coo = A.tocoo()
    if np.any(np.abs(levels[coo.row] - levels[coo.col]) > 1):
        raise ValueError("matrix couples non-adjacent levels")
    A = A.tocsr()
    # forward sweep: X_k = S_k^{-1} A_{k,k+1}, y_k = S_k^{-1} g_k
    X, y = [], []
    S = A[blocks[0]][:, blocks[0]].toarray()
    g = b[blocks[0]]
    for k in range(len(blocks)):
        lu = lu_factor(S, check_finite=False)
        y.append(lu_solve(lu, g, check_finite=False))
        if k + 1 == len(blocks):
            break
        up = A[blocks[k]][:, blocks[k + 1]].toarray()
        X.append(lu_solve(lu, up, check_finite=False))
        down = A[blocks[k + 1]][:, blocks[k]]
        S = A[blocks[k + 1]][:, blocks[k + 1]].toarray() - down @ X[k]
        g = b[blocks[k + 1]] - down @ y[k]
    x = np.empty_like(b)
    nxt = y[-1]
    x[blocks[-1]] = nxt
    for k in range(len(blocks) - 2, -1, -1):
        nxt = y[k] - X[k] @ nxt
        x[blocks[k]] = nxt
    return x


def absorbing_system(
    transitions: Mapping[Hashable, Mapping[Hashable, float]], absorbing, level=None
) -> AbsorbingSystem:
    """Assemble an :class:`AbsorbingSystem` from per-state transition maps.

    ``transitions`` must hold a row for every transient state; states in
    ``absorbing`` need no row.  Raises :class:`SingularSystemError` when some
    transient state cannot reach ``absorbing``.
    """
    absorbing = frozenset(absorbing)
    states = tuple(s for s in transitions if s not in absorbing)
    index = {s: i for i, s in enumerate(states)}
    rows, cols, vals = [], [], []
    preds: dict = {s: [] for s in states}
    hits = set()
    for s in states:
        row = transitions[s]
        total = sum(row.values())
        if abs(total - 1) > 1e-12:
            raise ValueError(f"row of state {s!r} sums to {float(total)}")
        for t, pr in row.items():
            if pr == 0:
                continue
            if t in absorbing:
                hits.add(s)
                continue
            if t not in index:
                raise ValueError(f"transition to unknown state {t!r}")
            rows.append(index[s])
            cols.append(index[t])
            vals.append(float(pr))
            preds[t].append(s)
    # reverse search from the states that can be absorbed in one step
    seen = set(hits)
    queue = deque(hits)
    while queue:
        t = queue.popleft()
        for s in preds[t]:
            if s not in seen:
                seen.add(s)
                queue.append(s)
    if len(seen) != len(states):
        stuck = next(s for s in states if s not in seen)
        raise SingularSystemError(f"state {stuck!r} never reaches absorption (disconnected graph?)")
    size = len(states)
    Q = sp.csr_matrix((vals, (rows, cols)), shape=(size, size))
    levels = None if level is None else np.array([level(s) for s in states], dtype=np.int64)
    return AbsorbingSystem(states, Q, absorbing, levels)


# -- full configuration space --------------------------------------------------


def _check_size(g: Graph) -> None:
    if g.n > MAX_VERTICES:
        raise StateSpaceError(f"brute force limited to n <= {MAX_VERTICES} vertices (got {g.n})")


def _starts(c) -> list[Configuration]:
    return [c] if isinstance(c, Configuration) else list(c)


def configuration_system(g: Graph, c, p: Protocol | str) -> AbsorbingSystem:
    """Configurations of ``g`` reachable from ``c`` as an absorbing system.

    ``c`` is a configuration or an iterable of them.  States are opinion
    bitmasks (bit ``v`` is the opinion of ``v``); the two consensus masks are
    absorbing.
    """
    _check_size(g)
    p = as_protocol(p)
    full = (1 << g.n) - 1
    absorbing = {0, full}
    starts = {x.to_bits() for x in _starts(c)}
    transitions: dict[int, dict[int, float]] = {}
    queue = deque(sorted(starts))
    seen = set(starts)
    while queue:
        s = queue.popleft()
        if s in absorbing:
            continue
        conf = Configuration.from_bits(g, s)
        if conf.is_consensus():
            # no discordant edge but not consensus: stuck forever
            raise SingularSystemError(f"configuration {s:#x} has no discordant edge (disconnected graph)")
        row = {s ^ (1 << v): pr for v, pr in step_distribution(conf, p).items()}
        transitions[s] = row
        for t in row:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    # every flip moves the blue count by one, so it levels the system
    return absorbing_system(transitions, absorbing & seen, level=int.bit_count)


def brute_force_vector(g: Graph, c, p: Protocol | str) -> dict[int, float]:
    """Exact ``E T`` for every configuration reachable from ``c`` (keyed by bitmask).

    ``c`` may be a single configuration or an iterable of starts.
    """
    system = configuration_system(g, c, p)
    h = system.solve()
    out = {s: 0.0 for s in system.absorbing}
    out.update(zip(system.states, h.tolist()))
    return out


def brute_force_ET(g: Graph, c: Configuration, p: Protocol | str) -> float:
    """Exact expected number of steps to consensus from ``c``."""
    if c.graph != g:
        raise ValueError("configuration belongs to a different graph")
    if all(x == c.opinions[0] for x in c.opinions):
        return 0.0
    return brute_force_vector(g, c, p)[c.to_bits()]


# -- lumped chains -------------------------------------------------------------


def kn_chain(n: int, p: Protocol | str, exact: bool = False) -> chains.ChainSpec:
    """Chain of ``max(R, B) - n/2`` on the complete graph ``K_n``."""
    p = as_protocol(p)
    if p is Protocol.PUSH:
        return chains.push_chain(n, 0, exact=exact)
    if p is Protocol.PULL:
        return chains.pull_chain(n, 0, exact=exact)
    chains._check_even(n)
    half = Fraction(1, 2)
    p = [Fraction(1)] + [half] * (n // 2 - 1) + [Fraction(0)]
    return chains.ChainSpec(tuple(x if exact else float(x) for x in p))


def lumped_kn_ET(n: int, p: Protocol | str, exact: bool = False, red: int | None = None):
    """Exact ``E T`` on ``K_n`` from ``red`` red vertices (default ``n/2``).

    Returns a Fraction when ``exact`` is set, else a float.
    """
    N = n // 2
    red = N if red is None else red
    if not 0 <= red <= n:
        raise ValueError(f"red count must lie in 0..{n}")
    i = abs(red - N)
    if i == N:
        return Fraction(0) if exact else 0.0
    cum = chains.hit_profile(kn_chain(n, p, exact=exact)).cumulative
    return cum[-1] - (cum[i - 1] if i else 0)


def star_transitions(n: int, p: Protocol | str) -> dict[tuple[int, int], dict[tuple[int, int], Fraction]]:
    """Transitions of the star ``S_n`` lumped by (red total ``r``, centre colour).

    The red total counts the centre.  Absorbing states ``(n, RED)`` and
    ``(0, BLUE)`` carry no row.
    """
    p = as_protocol(p)
    if n < 2:
        raise ValueError("star needs n >= 2")
    leaves = n - 1
    out: dict[tuple[int, int], dict[tuple[int, int], Fraction]] = {}
    for a in range(leaves + 1):  # red leaves
        # centre red: discordant leaves are the blue ones
        d = leaves - a
        if d:
            r = a + 1
            grow, recolour = (r + 1, RED), (r - 1, BLUE)
            if p is Protocol.PUSH:
                row = {grow: Fraction(1, d + 1), recolour: Fraction(d, d + 1)}
            elif p is Protocol.PULL:
                row = {grow: Fraction(d, d + 1), recolour: Fraction(1, d + 1)}
            else:
                row = {grow: Fraction(1, 2), recolour: Fraction(1, 2)}
            out[(r, RED)] = row
        # centre blue: discordant leaves are the red ones
        if a:
            r = a
            shrink, recolour = (r - 1, BLUE), (r + 1, RED)
            if p is Protocol.PUSH:
                row = {shrink: Fraction(1, a + 1), recolour: Fraction(a, a + 1)}
            elif p is Protocol.PULL:
                row = {shrink: Fraction(a, a + 1), recolour: Fraction(1, a + 1)}
            else:
                row = {shrink: Fraction(1, 2), recolour: Fraction(1, 2)}
            out[(r, BLUE)] = row
    return out


def star_configuration(n: int, start: tuple[int, int]) -> list[int]:
    """Opinion vector on ``star(n)`` for a lumped state ``(r, centre colour)``."""
    r, colour = _check_star_start(n, start)
    red_leaves = r - 1 if colour == RED else r
    return [colour] + [RED] * red_leaves + [BLUE] * (n - 1 - red_leaves)


def _check_star_start(n: int, start) -> tuple[int, int]:
    r, colour = int(start[0]), int(start[1])
    if colour not in (RED, BLUE):
        raise ValueError("centre colour must be 0 (red) or 1 (blue)")
    if not 0 <= r <= n or (colour == RED and r == 0) or (colour == BLUE and r == n):
        raise ValueError(f"invalid star start {start!r} for n={n}")
    return r, colour


def lumped_star_ET(n: int, p: Protocol | str, start: tuple[int, int]) -> float:
    """Exact ``E T`` on ``star(n)`` from ``start = (r, centre colour)``."""
    start = _check_star_start(n, start)
    absorbing = {(n, RED), (0, BLUE)}
    if start in absorbing:
        return 0.0
    system = absorbing_system(star_transitions(n, p), absorbing)
    return float(system.solve()[system.index[start]])
