"""Graph parameters: conductance, the push parameter Psi and degree regularity nu."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import kernels
from ..graph import Graph

MAX_VERTICES = 20
_REL_SLACK = 1e-9


def _check_size(g: Graph) -> None:
    if g.n > MAX_VERTICES:
        raise ValueError(f"exhaustive subset search limited to n <= {MAX_VERTICES} (got {g.n})")
    if g.n < 2:
        raise ValueError("need at least two vertices")


def _min_ratio(g: Graph, ew: np.ndarray, vw: np.ndarray, exact_edge, exact_vertex) -> Fraction:
    """Exact ``min_S cut(S)/min(A(S), A(S^c))``.

    A Gray-code float sweep over subsets (vertex ``n-1`` always outside, which
    covers each cut once up to complement) shortlists the near-minimal sets;
    those are re-evaluated in integer arithmetic over a common denominator.
    """
    ratios = kernels.cut_ratios(g, ew, vw)
    lo = float(np.min(ratios))
    masks = np.flatnonzero(ratios <= lo * (1 + _REL_SLACK) + 1e-300).astype(np.int64)
    e_frac = [Fraction(exact_edge(u, v)) for u, v in g.edges]
    v_frac = [Fraction(exact_vertex(v)) for v in range(g.n)]
    e_den = math.lcm(*(x.denominator for x in e_frac))
    v_den = math.lcm(*(x.denominator for x in v_frac))
    e_int = [int(x * e_den) for x in e_frac]
    v_int = [int(x * v_den) for x in v_frac]
    total = sum(v_int)
    if sum(e_int) < 2**62 and total < 2**62:
        inside = ((masks[:, None] >> np.arange(g.n)) & 1).astype(bool)
        eu, ev = g.edge_u, g.edge_v
        cut = (inside[:, eu] != inside[:, ev]).astype(np.int64) @ np.array(e_int, dtype=np.int64)
        a = inside.astype(np.int64) @ np.array(v_int, dtype=np.int64)
        pairs = set(zip(cut.tolist(), np.minimum(a, total - a).tolist()))
    else:
        pairs = set()
        for mask in masks.tolist():
            ins = [(mask >> v) & 1 for v in range(g.n)]
            a = sum(w for v, w in enumerate(v_int) if ins[v])
            cut = sum(w for (u, v), w in zip(g.edges, e_int) if ins[u] != ins[v])
            pairs.add((cut, min(a, total - a)))
    return min(Fraction(cut * v_den, a * e_den) for cut, a in pairs)


def conductance(g: Graph) -> Fraction:
    """``min_S E(S:S^c) / min(d(S), d(S^c))`` over nonempty proper subsets."""
    _check_size(g)
    if not g.is_connected():
        return Fraction(0)
    deg = g.degrees()
    ew = np.ones(len(g.indices))
    vw = np.array(deg, dtype=np.float64)
    return _min_ratio(g, ew, vw, lambda u, v: 1, lambda v: deg[v])


def psi_param(g: Graph) -> Fraction:
    """``Psi(G) = 2 C(G) / (n d_max) * min_S sum_{vw in E(S:S^c)} 1/(d(v)d(w)) / min(J(S), J(S^c))``.

    ``C(G) = 1 / sum_v 1/d(v)`` and ``J(S) = sum_{v in S} 1/d(v)``.
    """
    _check_size(g)
    if not g.is_connected():
        raise ValueError("Psi needs a connected graph")
    deg = g.degrees()
    src = np.repeat(np.arange(g.n), np.diff(g.indptr))
    dega = np.array(deg, dtype=np.float64)
    ew = 1.0 / (dega[src] * dega[g.indices])
    vw = 1.0 / dega
    m = _min_ratio(g, ew, vw, lambda u, v: Fraction(1, deg[u] * deg[v]), lambda v: Fraction(1, deg[v]))
    C = 1 / sum(Fraction(1, d) for d in deg)
    return 2 * C / (g.n * max(deg)) * m


def nu_param(g: Graph) -> Fraction:
    """``nu = sum_v d(v)^2 / (d^2 n)`` with ``d = 2m/n``."""
    deg = g.degrees()
    if g.m == 0:
        raise ValueError("nu needs at least one edge")
    d = Fraction(2 * g.m, g.n)
    return sum(Fraction(x * x) for x in deg) / (d * d * g.n)
