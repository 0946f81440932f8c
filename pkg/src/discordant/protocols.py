"""Step semantics of the push, pull and oblivious discordant update rules.

A discordant neighbour is always drawn uniformly from the *discordant*
neighbours of the active vertex, never from all neighbours.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import TextIO

import numpy as np

from . import kernels
from .configuration import Configuration


class Protocol(str, enum.Enum):
    PUSH = "push"
    PULL = "pull"
    OBLIVIOUS = "oblivious"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {Protocol.PUSH: kernels.PUSH, Protocol.PULL: kernels.PULL, Protocol.OBLIVIOUS: kernels.OBLIVIOUS}


def as_protocol(p: Protocol | str) -> Protocol:
    try:
        return Protocol(p)
    except ValueError:
        raise ValueError(f"unknown protocol {p!r}; expected push, pull or oblivious") from None


@dataclass(frozen=True)
class StepOutcome:
    active: int
    change: int
    configuration: Configuration
    active_edge: int | None = None


@dataclass(frozen=True)
class TrialResult:
    """Outcome of one run; ``winner`` is ``None`` when censored."""

    steps: int
    censored: bool
    winner: int | None
    seed: object = None


class ConsensusError(ValueError):
    """Raised when a step is requested from a configuration with no discordant edge."""


def _require_discordant(c: Configuration) -> None:
    if c.is_consensus():
        raise ConsensusError("configuration is at consensus; no discordant edge to act on")


def active_distribution(c: Configuration, p: Protocol | str, exact: bool = False) -> dict[int, dict[int, float]]:
    """Conditional flip distribution for each possible active choice.

    For push and pull the keys are active vertices (each chosen with
    probability ``1/|D|``); for oblivious they are discordant edge ids (each
    chosen with probability ``1/|K|``).  Values map the change vertex to its
    probability given that choice.
    """
    p = as_protocol(p)
    _require_discordant(c)
    one = Fraction(1) if exact else 1.0
    out: dict[int, dict[int, float]] = {}
    if p is Protocol.OBLIVIOUS:
        for e in sorted(c.K):
            a, b = c.graph.edges[e]
            out[e] = {a: one / 2, b: one / 2}
        return out
    for v in sorted(c.D):
        nbrs = c.discordant_neighbours(v)
        if p is Protocol.PUSH:
            share = one / len(nbrs)
            out[v] = {w: share for w in nbrs}
        else:
            out[v] = {v: one}
    return out


def step_distribution(c: Configuration, p: Protocol | str, exact: bool = False) -> dict[int, float]:
    """Map each vertex that can flip next to its flip probability."""
    cond = active_distribution(c, p, exact=exact)
    weight = (Fraction(1) if exact else 1.0) / len(cond)
    probs: dict[int, float] = defaultdict(lambda: 0 * weight)
    for inner in cond.values():
        for w, q in inner.items():
            probs[w] += weight * q
    return dict(sorted(probs.items()))


def _index(u: float, size: int) -> int:
    return min(int(u * size), size - 1)


def step(c: Configuration, p: Protocol | str, rng: np.random.Generator, inplace: bool = False) -> StepOutcome:
    """Sample one protocol step.

    Two uniforms are drawn per step, so the outcome is a deterministic
    function of ``c`` and the generator state.  With ``inplace`` the input
    configuration is mutated and returned in the outcome.
    """
    p = as_protocol(p)
    _require_discordant(c)
    u1, u2 = rng.random(2)
    target = c if inplace else c.copy()
    if p is Protocol.OBLIVIOUS:
        e = c.K[_index(u1, len(c.K))]
        a, b = c.graph.edges[e]
        active, change = (b, a) if u2 < 0.5 else (a, b)
        target.flip(change)
        return StepOutcome(active, change, target, active_edge=e)
    v = c.D[_index(u1, len(c.D))]
    nbrs = c.discordant_neighbours(v)
    w = nbrs[_index(u2, len(nbrs))]
    change = w if p is Protocol.PUSH else v
    target.flip(change)
    return StepOutcome(v, change, target)


def run_to_consensus(
    c: Configuration,
    p: Protocol | str,
    rng: np.random.Generator,
    cutoff: int = 10**8,
    trace: TextIO | None = None,
    seed: object = None,
) -> TrialResult:
    """Run from ``c`` until consensus or ``cutoff`` steps.

    ``c`` itself is left untouched.  A ``trace`` stream receives one line
    ``t active change |K|`` per step (forces the pure-Python kernel).
    """
    p = as_protocol(p)
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    g = c.graph
    ops = np.array(c.opinions, dtype=np.int8)
    steps, left = kernels.run(g, ops, p.code, rng, cutoff, trace=trace)
    if left:
        return TrialResult(steps, True, None, seed)
    return TrialResult(steps, False, int(ops[0]), seed)
