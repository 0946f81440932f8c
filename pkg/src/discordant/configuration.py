"""Opinion configurations with incrementally maintained discordant sets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph import Graph, family_of

RED, BLUE = 0, 1

COLORING_KINDS = (
    "arc",
    "alternating",
    "star_bipartite",
    "clique_bipartite",
    "random_balanced",
    "random",
    "all_but_one",
    "explicit",
)


class IndexedSet:
    """Set of ints supporting O(1) add, discard and uniform indexing.

    Removal swaps the last element into the hole, so iteration order depends
    on the history of operations (but is deterministic).
    """

    __slots__ = ("_items", "_pos")

    def __init__(self, items: Sequence[int] = ()) -> None:
        self._items: list[int] = []
        self._pos: dict[int, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: int) -> None:
        if x not in self._pos:
            self._pos[x] = len(self._items)
            self._items.append(x)

    def discard(self, x: int) -> None:
        i = self._pos.pop(x, None)
        if i is None:
            return
        last = self._items.pop()
        if i < len(self._items):
            self._items[i] = last
            self._pos[last] = i

    def __contains__(self, x: object) -> bool:
        return x in self._pos

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[int]:
        return iter(self._items)

    def __getitem__(self, i: int) -> int:
        return self._items[i]

    def copy(self) -> "IndexedSet":
        new = IndexedSet()
        new._items = list(self._items)
        new._pos = dict(self._pos)
        return new


class Configuration:
    """Binary opinions on a graph plus the discordant edge/vertex sets.

    ``K`` holds discordant edge ids, ``D`` discordant vertices and
    ``dcount[v]`` the number of discordant neighbours of ``v``.  Flips update
    all three in ``O(deg(v))``.
    """

    __slots__ = ("graph", "opinions", "dcount", "K", "D")

    def __init__(self, graph: Graph, opinions: Sequence[int]) -> None:
        if len(opinions) != graph.n:
            raise ValueError(f"expected {graph.n} opinions, got {len(opinions)}")
        ops = [int(x) for x in opinions]
        if any(x not in (0, 1) for x in ops):
            raise ValueError("opinions must be 0 (red) or 1 (blue)")
        self.graph = graph
        self.opinions = ops
        self.dcount = [0] * graph.n
        self.K = IndexedSet()
        self.D = IndexedSet()
        for e, (u, v) in enumerate(graph.edges):
            if ops[u] != ops[v]:
                self.K.add(e)
                self.dcount[u] += 1
                self.dcount[v] += 1
        for v in range(graph.n):
            if self.dcount[v]:
                self.D.add(v)

    @classmethod
    def from_bits(cls, graph: Graph, bits: int) -> "Configuration":
        """Configuration whose opinion at ``v`` is bit ``v`` of ``bits``."""
        return cls(graph, [(bits >> v) & 1 for v in range(graph.n)])

    def to_bits(self) -> int:
        out = 0
        for v, x in enumerate(self.opinions):
            if x:
                out |= 1 << v
        return out

    def copy(self) -> "Configuration":
        new = Configuration.__new__(Configuration)
        new.graph = self.graph
        new.opinions = list(self.opinions)
        new.dcount = list(self.dcount)
        new.K = self.K.copy()
        new.D = self.D.copy()
        return new

    # -- queries ---------------------------------------------------------

    @property
    def discordant_edges(self) -> frozenset[int]:
        return frozenset(self.K)

    @property
    def discordant_vertices(self) -> frozenset[int]:
        return frozenset(self.D)

    @property
    def k(self) -> int:
        return len(self.K)

    @property
    def red(self) -> int:
        return self.opinions.count(RED)

    @property
    def blue(self) -> int:
        return self.opinions.count(BLUE)

    def is_consensus(self) -> bool:
        return not self.K

    def discordant_neighbours(self, v: int) -> list[int]:
        x = self.opinions[v]
        return [w for w in self.graph.adjacency[v] if self.opinions[w] != x]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.graph == other.graph and self.opinions == other.opinions

    def __hash__(self) -> int:
        return hash(tuple(self.opinions))

    def __repr__(self) -> str:
        bits = "".join(map(str, self.opinions))
        return f"Configuration({self.graph.name or 'graph'}, {bits}, |K|={self.k})"

    # -- mutation --------------------------------------------------------

    def flip(self, v: int) -> "Configuration":
        """Invert the opinion of ``v`` in place and return ``self``."""
        if not 0 <= v < self.graph.n:
            raise IndexError(f"vertex {v} outside 0..{self.graph.n - 1}")
        ops = self.opinions
        ops[v] ^= 1
        x = ops[v]
        dc = self.dcount
        for w, e in self.graph.incident(v):
            if ops[w] != x:
                self.K.add(e)
                dc[w] += 1
                dc[v] += 1
                self.D.add(w)
            else:
                self.K.discard(e)
                dc[w] -= 1
                dc[v] -= 1
                if not dc[w]:
                    self.D.discard(w)
        if dc[v]:
            self.D.add(v)
        else:
            self.D.discard(v)
        return self

    def check(self) -> None:
        """Raise ``AssertionError`` if the incremental state disagrees with a rebuild."""
        fresh = Configuration(self.graph, self.opinions)
        assert set(self.K) == set(fresh.K), "discordant edges out of sync"
        assert set(self.D) == set(fresh.D), "discordant vertices out of sync"
        assert self.dcount == fresh.dcount, "discordant-neighbour counts out of sync"


def apply_flip(c: Configuration, v: int) -> Configuration:
    """Return a new configuration equal to ``c`` with ``v`` flipped."""
    return c.copy().flip(v)


@dataclass(frozen=True)
class ColoringSpec:
    """Recipe for an initial colouring.

    ``red`` is the red count for ``random``; ``vertex`` is the lone blue
    vertex for ``all_but_one``; ``opinions`` is the vector for ``explicit``.
    """

    kind: str
    red: int | None = None
    vertex: int = 0
    opinions: tuple[int, ...] | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in COLORING_KINDS:
            raise ValueError(f"unknown colouring kind {self.kind!r}; expected one of {COLORING_KINDS}")

    @classmethod
    def explicit(cls, opinions: Sequence[int]) -> "ColoringSpec":
        return cls("explicit", opinions=tuple(int(x) for x in opinions))


def default_coloring(family: str, seed: int = 0) -> ColoringSpec:
    """Balanced start used for each family in the sweep experiments."""
    return {
        "cycle": ColoringSpec("arc"),
        "double_star": ColoringSpec("star_bipartite"),
        "barbell": ColoringSpec("clique_bipartite"),
    }.get(family, ColoringSpec("random_balanced", seed=seed))


def coloring_opinions(g: Graph, spec: ColoringSpec) -> list[int]:
    fam = family_of(g)
    n = g.n
    kind = spec.kind

    def need(family: str) -> None:
        if fam != family:
            raise ValueError(f"colouring {kind!r} only applies to {family} graphs (got {g.name or 'custom graph'})")

    def need_even() -> None:
        if n % 2:
            raise ValueError(f"colouring {kind!r} needs an even number of vertices (got {n})")

    if kind == "arc":
        need("cycle")
        need_even()
        return [RED] * (n // 2) + [BLUE] * (n // 2)
    if kind == "alternating":
        need("cycle")
        need_even()
        return [i % 2 for i in range(n)]
    if kind == "star_bipartite":
        need("double_star")
        leaves = (n - 2) // 2
        ops = [BLUE, RED] + [BLUE] * leaves + [RED] * leaves
        return ops
    if kind == "clique_bipartite":
        need("barbell")
        return [RED] * (n // 2) + [BLUE] * (n // 2)
    if kind in ("random_balanced", "random"):
        if kind == "random_balanced":
            need_even()
            red = n // 2
        else:
            if spec.red is None or not 0 <= spec.red <= n:
                raise ValueError(f"colouring 'random' needs 0 <= red <= {n}")
            red = spec.red
        rng = np.random.default_rng(spec.seed)
        ops = [BLUE] * n
        for v in rng.permutation(n)[:red].tolist():
            ops[v] = RED
        return ops
    if kind == "all_but_one":
        if not 0 <= spec.vertex < n:
            raise ValueError(f"vertex {spec.vertex} outside 0..{n - 1}")
        ops = [RED] * n
        ops[spec.vertex] = BLUE
        return ops
    # explicit
    if spec.opinions is None or len(spec.opinions) != n:
        raise ValueError(f"explicit colouring needs {n} opinions")
    return list(spec.opinions)


def init_configuration(g: Graph, spec: ColoringSpec) -> Configuration:
    return Configuration(g, coloring_opinions(g, spec))
