"""Undirected simple graphs and the graph families used in the experiments.

Vertex labelling conventions (all ids are ``0..n-1``):

complete
    every pair adjacent.
cycle
    ``i`` adjacent to ``i+1 mod n``.
star
    vertex 0 is the centre, ``1..n-1`` are leaves; ``n`` counts all vertices.
double_star
    size parameter is the number of leaves per side.  Vertex 0 is ``c1``,
    vertex 1 is ``c2``, leaves of ``c1`` are ``2..L+1`` and leaves of ``c2``
    are ``L+2..2L+1``.
barbell
    size parameter is the clique size ``n``.  Clique ``S1`` is ``0..n-1``,
    ``S2`` is ``n..2n-1`` and the bridge joins ``0`` and ``n``.

Text format
-----------
::

    # optional comment lines
    n m
    u v          (m lines, one edge each)
    0101...      (optional opinion bitstring of length n)

Opinions are ``0`` (red) and ``1`` (blue).
"""

from __future__ import annotations

import io
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

FAMILIES = ("complete", "cycle", "star", "double_star", "barbell")

_MIN_SIZE = {
    "complete": (2, "complete graph needs n >= 2"),
    "cycle": (3, "cycle needs n >= 3"),
    "star": (2, "star needs n >= 2 vertices"),
    "double_star": (1, "double star needs at least 1 leaf per side"),
    "barbell": (2, "barbell needs clique size >= 2"),
}


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph.

    ``adjacency[v]`` is the sorted tuple of neighbours of ``v`` and
    ``edges[e]`` is ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    name: str = ""
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _incident: tuple[tuple[tuple[int, int], ...], ...] = field(init=False, repr=False, compare=False)
    # CSR arrays shared with the compiled kernels
    indptr: np.ndarray = field(init=False, repr=False, compare=False)
    indices: np.ndarray = field(init=False, repr=False, compare=False)
    edge_ids: np.ndarray = field(init=False, repr=False, compare=False)
    edge_u: np.ndarray = field(init=False, repr=False, compare=False)
    edge_v: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        canon = []
        for e, (u, v) in enumerate(self.edges):
            u, v = int(u), int(v)
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has a vertex outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            a, b = min(u, v), max(u, v)
            if (a, b) in seen:
                raise ValueError(f"multi-edge ({a}, {b})")
            seen.add((a, b))
            canon.append((a, b))
            nbrs[a].append((b, e))
            nbrs[b].append((a, e))
        for lst in nbrs:
            lst.sort()
        object.__setattr__(self, "edges", tuple(canon))
        object.__setattr__(self, "adjacency", tuple(tuple(w for w, _ in lst) for lst in nbrs))
        object.__setattr__(self, "_incident", tuple(tuple(lst) for lst in nbrs))
        degs = np.array([len(lst) for lst in nbrs], dtype=np.int64)
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(degs, out=indptr[1:])
        flat = [pair for lst in nbrs for pair in lst]
        indices = np.array([w for w, _ in flat], dtype=np.int64)
        edge_ids = np.array([e for _, e in flat], dtype=np.int64)
        edge_u = np.array([a for a, _ in canon], dtype=np.int64)
        edge_v = np.array([b for _, b in canon], dtype=np.int64)
        for arr in (indptr, indices, edge_ids, edge_u, edge_v):
            arr.setflags(write=False)
        object.__setattr__(self, "edge_u", edge_u)
        object.__setattr__(self, "edge_v", edge_v)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "edge_ids", edge_ids)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def incident(self, v: int) -> tuple[tuple[int, int], ...]:
        """``(neighbour, edge_id)`` pairs of ``v`` in neighbour order."""
        return self._incident[v]

    def is_connected(self) -> bool:
        seen = [False] * self.n
        seen[0] = True
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in self.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
        return all(seen)

    def is_regular(self) -> bool:
        return len(set(self.degrees())) == 1


def complete(n: int) -> Graph:
    _check_size("complete", n)
    return Graph(n, tuple(combinations(range(n), 2)), name=f"complete({n})")


def cycle(n: int) -> Graph:
    _check_size("cycle", n)
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)), name=f"cycle({n})")


def star(n: int) -> Graph:
    _check_size("star", n)
    return Graph(n, tuple((0, i) for i in range(1, n)), name=f"star({n})")


def double_star(leaves: int) -> Graph:
    _check_size("double_star", leaves)
    edges = [(0, 1)]
    edges += [(0, 2 + i) for i in range(leaves)]
    edges += [(1, 2 + leaves + i) for i in range(leaves)]
    return Graph(2 * leaves + 2, tuple(edges), name=f"double_star({leaves})")


def barbell(n: int) -> Graph:
    _check_size("barbell", n)
    edges = list(combinations(range(n), 2))
    edges += [(n + a, n + b) for a, b in combinations(range(n), 2)]
    edges.append((0, n))
    return Graph(2 * n, tuple(edges), name=f"barbell({n})")


_GENERATORS = {
    "complete": complete,
    "cycle": cycle,
    "star": star,
    "double_star": double_star,
    "barbell": barbell,
}


def generate(family: str, size: int) -> Graph:
    """Build a member of one of the named families (see module docstring)."""
    try:
        gen = _GENERATORS[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}") from None
    return gen(int(size))


def family_of(g: Graph) -> str | None:
    """Family name recorded by :func:`generate`, or ``None`` for custom graphs."""
    head = g.name.split("(", 1)[0]
    return head if head in _GENERATORS else None


def _check_size(family: str, size: int) -> None:
    low, msg = _MIN_SIZE[family]
    if size < low:
        raise ValueError(f"{msg} (got {size})")


# -- text format -------------------------------------------------------------


def dump(g: Graph, out: TextIO, opinions: Sequence[int] | None = None) -> None:
    out.write(f"{g.n} {g.m}\n")
    for u, v in g.edges:
        out.write(f"{u} {v}\n")
    if opinions is not None:
        if len(opinions) != g.n:
            raise ValueError("opinion vector length differs from n")
        out.write("".join("1" if x else "0" for x in opinions) + "\n")


def dumps(g: Graph, opinions: Sequence[int] | None = None) -> str:
    buf = io.StringIO()
    dump(g, buf, opinions)
    return buf.getvalue()


def load(src: TextIO) -> tuple[Graph, list[int] | None]:
    lines = [ln.strip() for ln in src]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty graph file")
    try:
        n, m = (int(t) for t in lines[0].split())
    except ValueError:
        raise ValueError(f"bad header line {lines[0]!r}; expected 'n m'") from None
    if len(lines) < 1 + m:
        raise ValueError(f"header declares {m} edges but only {len(lines) - 1} lines follow")
    edges = []
    for ln in lines[1 : 1 + m]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    g = Graph(n, tuple(edges))
    rest = lines[1 + m :]
    if not rest:
        return g, None
    if len(rest) > 1:
        raise ValueError("trailing lines after opinion bitstring")
    bits = rest[0]
    if len(bits) != n or set(bits) - {"0", "1"}:
        raise ValueError(f"opinion line must be a bitstring of length {n}")
    return g, [int(ch) for ch in bits]


def loads(text: str) -> tuple[Graph, list[int] | None]:
    return load(io.StringIO(text))


def write(path: str | Path, g: Graph, opinions: Sequence[int] | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump(g, fh, opinions)


def read(path: str | Path) -> tuple[Graph, list[int] | None]:
    with open(path, encoding="utf-8") as fh:
        return load(fh)
