"""Run structure, the square-root potential and its one-step drift on cycles.

A run is a maximal arc of equal opinions.  With ``k`` runs of lengths
``l_1..l_k`` the potential is ``psi = sum_i sqrt(l_i)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from typing import Iterator, Sequence

from ..configuration import Configuration
from ..graph import Graph
from ..protocols import Protocol, active_distribution, as_protocol

# per-edge drift coefficients: delta_uv <= -coef * (l_u^{-3/2} + l_v^{-3/2})
EDGE_COEF = {
    Protocol.PUSH: {"A": 1 / 4, "B": 1 / 2, "C": 1 / 5},
    Protocol.PULL: {"A": 1 / 4, "B": 1 / 10, "C": 1 / 2},
}
# uniform per-edge constant used for the aggregate argument
UNIFORM_COEF = {Protocol.PUSH: 1 / 5, Protocol.PULL: 1 / 10}
# aggregate drift: Delta <= -coef * (k/n)^{3/2}
AGGREGATE_COEF = {Protocol.PUSH: 1 / 40, Protocol.PULL: 1 / 80}
TOL = 1e-12


@dataclass(frozen=True)
class RunDecomposition:
    """Cyclic run lengths; the first run starts at ``start``."""

    lengths: tuple[int, ...]
    start: int = 0
    run_of: tuple[int, ...] = field(default=(), repr=False, compare=False)

    @property
    def n(self) -> int:
        return sum(self.lengths)

    @property
    def k(self) -> int:
        return len(self.lengths)

    @property
    def s(self) -> int:
        return sum(1 for x in self.lengths if x == 1)

    @property
    def kappa(self) -> int:
        return 2 * self.k - self.s

    def length_at(self, v: int) -> int:
        """Length of the run containing vertex ``v``."""
        return self.lengths[self.run_of[v]]


def is_cycle_graph(g: Graph) -> bool:
    if g.n < 3 or g.m != g.n:
        return False
    return set(g.edges) == {tuple(sorted((i, (i + 1) % g.n))) for i in range(g.n)}


def runs_of(opinions: Sequence[int]) -> RunDecomposition:
    """Decompose a cyclic opinion sequence into runs.

    The first run starts at the first ``i`` with ``X(i) != X(i-1)``.  A
    constant sequence has no runs.
    """
    n = len(opinions)
    start = next((i for i in range(n) if opinions[i] != opinions[i - 1]), None)
    if start is None:
        return RunDecomposition((), 0, (0,) * n)
    lengths = []
    run_of = [0] * n
    cur = 0
    for j in range(n):
        v = (start + j) % n
        if j and opinions[v] != opinions[v - 1]:
            lengths.append(cur)
            cur = 0
        run_of[v] = len(lengths)
        cur += 1
    lengths.append(cur)
    return RunDecomposition(tuple(lengths), start, tuple(run_of))


def run_decomposition(c: Configuration) -> RunDecomposition:
    """Runs of a non-consensus configuration on a cycle."""
    if not is_cycle_graph(c.graph):
        raise ValueError("run decomposition needs a cycle graph")
    if c.is_consensus():
        raise ValueError("consensus configuration has no runs")
    return runs_of(c.opinions)


def psi(d: RunDecomposition) -> float:
    return math.fsum(math.sqrt(x) for x in d.lengths)


def potential(opinions: Sequence[int]) -> float:
    """``psi`` of a cyclic opinion sequence (0 at consensus)."""
    return psi(runs_of(opinions))


@dataclass(frozen=True)
class EdgeDrift:
    """Drift contribution of one discordant edge ``uv``.

    For case ``B`` the vertex ``v`` is the singleton.
    """

    edge: int
    u: int
    v: int
    case: str
    delta: float
    weight: float  # l_u^{-3/2} + l_v^{-3/2}

    def margin(self, coef: float) -> float:
        """``delta + coef*weight``; the bound holds when this is <= 0."""
        return self.delta + coef * self.weight


@dataclass(frozen=True)
class DriftResult:
    protocol: Protocol
    delta: float  # exact expected one-step change of psi
    delta_v: dict[int, float]
    edges: tuple[EdgeDrift, ...]
    runs: RunDecomposition

    @property
    def n(self) -> int:
        return self.runs.n

    def aggregate_bound(self) -> float:
        return -AGGREGATE_COEF[self.protocol] * (self.runs.k / self.n) ** 1.5

    def aggregate_margin(self) -> float:
        return self.delta - self.aggregate_bound()

    def edge_margins(self, uniform: bool = False) -> Iterator[tuple[EdgeDrift, float]]:
        for e in self.edges:
            coef = UNIFORM_COEF[self.protocol] if uniform else EDGE_COEF[self.protocol][e.case]
            yield e, e.margin(coef)


def psi_drift(c: Configuration, p: Protocol | str) -> DriftResult:
    """Exact drift of ``psi`` under push or pull with its per-edge split.

    ``delta_v`` is the expected change given active vertex ``v``; edges are
    classified by how many endpoints are singleton runs (A none, B one, C
    both) and weighted as ``d_u + d_v``, ``d_u + d_v/2`` (``v`` singleton)
    or ``(d_u + d_v)/2``.
    """
    p = as_protocol(p)
    if p is Protocol.OBLIVIOUS:
        raise ValueError("psi drift is defined for push and pull only")
    d = run_decomposition(c)
    base = psi(d)
    ops = list(c.opinions)
    after: dict[int, float] = {}

    def flipped(w: int) -> float:
        if w not in after:
            ops[w] ^= 1
            after[w] = potential(ops)
            ops[w] ^= 1
        return after[w]

    delta_v = {}
    for v, inner in active_distribution(c, p).items():
        delta_v[v] = math.fsum(pr * (flipped(w) - base) for w, pr in inner.items())
    delta = math.fsum(delta_v.values()) / len(delta_v)

    edges = []
    for e in sorted(c.K):
        a, b = c.graph.edges[e]
        la, lb = d.length_at(a), d.length_at(b)
        weight = la**-1.5 + lb**-1.5
        if la > 1 and lb > 1:
            edges.append(EdgeDrift(e, a, b, "A", delta_v[a] + delta_v[b], weight))
        elif la == 1 and lb == 1:
            edges.append(EdgeDrift(e, a, b, "C", 0.5 * (delta_v[a] + delta_v[b]), weight))
        else:
            u, v = (a, b) if lb == 1 else (b, a)
            edges.append(EdgeDrift(e, u, v, "B", delta_v[u] + 0.5 * delta_v[v], weight))
    return DriftResult(p, delta, delta_v, tuple(edges), d)


# -- auxiliary inequalities ------------------------------------------------------


def curvature_margin(ell: int) -> float:
    """``2 sqrt(l) - l^{-3/2}/4 - sqrt(l+1) - sqrt(l-1)`` (non-negative)."""
    return 2 * math.sqrt(ell) - 0.25 * ell**-1.5 - math.sqrt(ell + 1) - math.sqrt(ell - 1)


def merge_margin(l1: int, l2: int) -> float:
    """``sqrt(l1) + sqrt(l2) + 1 - sqrt(l1+l2+1) - (3 - sqrt 3)`` (zero at (1, 1))."""
    return math.sqrt(l1) + math.sqrt(l2) + 1 - math.sqrt(l1 + l2 + 1) - (3 - math.sqrt(3))


@dataclass(frozen=True)
class CurvatureChecks:
    curvature: bool
    merge: bool
    curvature_margin: float
    merge_margin: float


def sqrt_curvature_checks(ell: int, l1: int, l2: int) -> CurvatureChecks:
    """Check both square-root inequalities used by the case analysis.

    Margins are evaluated with 50-digit arithmetic so the merge equality at
    ``l1 = l2 = 1`` and the tiny curvature gap at large ``l`` are resolved.
    """
    if min(ell, l1, l2) < 1:
        raise ValueError("run lengths must be >= 1")
    with localcontext() as ctx:
        ctx.prec = 50
        L, a, b = Decimal(ell), Decimal(l1), Decimal(l2)
        cm = 2 * L.sqrt() - L ** Decimal(-1.5) / 4 - (L + 1).sqrt() - (L - 1).sqrt()
        three = Decimal(3)
        mm = a.sqrt() + b.sqrt() + 1 - (a + b + 1).sqrt() - (three - three.sqrt())
        tiny = Decimal(10) ** -40
        return CurvatureChecks(cm >= -tiny, mm >= -tiny, float(cm), float(mm))


# -- exhaustive scan ---------------------------------------------------------------


@dataclass
class DriftScanReport:
    n: int
    configurations: int = 0
    violations: list = field(default_factory=list)
    # worst (largest) margin per check; <= 0 means the inequality holds
    worst: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def _record(self, key: str, margin: float, where) -> None:
        if key not in self.worst or margin > self.worst[key][0]:
            self.worst[key] = (margin, where)
        if margin > TOL:
            self.violations.append((key, margin, where))


def drift_scan(
    n: int, protocols: Sequence[Protocol | str] = ("push", "pull"), reduce: bool = False
) -> DriftScanReport:
    """Check every per-edge and aggregate drift bound on all configurations of ``C_n``.

    With ``reduce`` only one configuration per orbit of rotation and colour
    swap is visited (both preserve the drift exactly).
    """
    from ..graph import cycle

    g = cycle(n)
    report = DriftScanReport(n)
    protos = [as_protocol(p) for p in protocols]
    full = (1 << n) - 1
    for bits in range(1, full):
        if reduce and not _canonical(bits, n):
            continue
        c = Configuration.from_bits(g, bits)
        report.configurations += 1
        for p in protos:
            res = psi_drift(c, p)
            for e, m in res.edge_margins():
                report._record(f"{p.value}:edge:{e.case}", m, bits)
            for e, m in res.edge_margins(uniform=True):
                report._record(f"{p.value}:edge:uniform", m, bits)
            report._record(f"{p.value}:aggregate", res.aggregate_margin(), bits)
    return report


def _canonical(bits: int, n: int) -> bool:
    full = (1 << n) - 1
    for x in (bits, bits ^ full):
        for _ in range(n):
            if x < bits:
                return False
            x = ((x >> 1) | ((x & 1) << (n - 1))) & full
    return True
