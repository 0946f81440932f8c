import pytest
from hypothesis import given
from hypothesis import strategies as st

from discordant.graph import FAMILIES, Graph, dumps, family_of, generate, loads, read, write


@pytest.mark.parametrize(
    "family,size,n,m",
    [
        ("complete", 5, 5, 10),
        ("cycle", 7, 7, 7),
        ("star", 6, 6, 5),
        ("double_star", 3, 8, 7),
        ("barbell", 4, 8, 13),
    ],
)
def test_family_sizes(family, size, n, m):
    g = generate(family, size)
    assert (g.n, g.m) == (n, m)
    assert g.is_connected()
    assert family_of(g) == family


def test_labelling_conventions():
    s = generate("star", 5)
    assert s.degree(0) == 4 and all(s.degree(v) == 1 for v in range(1, 5))
    d = generate("double_star", 3)
    assert d.adjacency[0] == (1, 2, 3, 4)
    assert d.adjacency[1] == (0, 5, 6, 7)
    b = generate("barbell", 3)
    assert b.adjacency[0] == (1, 2, 3)
    assert b.adjacency[3] == (0, 4, 5)


@pytest.mark.parametrize("family,size", [("cycle", 2), ("star", 1), ("double_star", 0), ("barbell", 1), ("complete", 1)])
def test_minimum_sizes(family, size):
    with pytest.raises(ValueError):
        generate(family, size)


def test_unknown_family():
    with pytest.raises(ValueError, match="unknown family"):
        generate("wheel", 5)


@pytest.mark.parametrize("edges", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
def test_invalid_edges(edges):
    with pytest.raises(ValueError):
        Graph(3, edges)


def test_csr_matches_adjacency():
    g = generate("barbell", 4)
    for v in range(g.n):
        lo, hi = g.indptr[v], g.indptr[v + 1]
        assert tuple(g.indices[lo:hi]) == g.adjacency[v]
        for w, e in zip(g.indices[lo:hi], g.edge_ids[lo:hi]):
            assert set(g.edges[e]) == {v, int(w)}


def test_regular_and_connected():
    assert generate("cycle", 6).is_regular()
    assert not generate("star", 6).is_regular()
    assert not Graph(4, ((0, 1), (2, 3))).is_connected()


def test_text_round_trip(tmp_path):
    g = generate("double_star", 2)
    ops = [1, 0, 1, 1, 0, 0]
    path = tmp_path / "g.txt"
    write(path, g, ops)
    text = path.read_bytes()
    assert b"\r" not in text
    h, ops2 = read(path)
    assert h.edges == g.edges and ops2 == ops


def test_text_comments_and_missing_opinions():
    g, ops = loads("# a path\n3 2\n0 1\n1 2\n")
    assert g.m == 2 and ops is None


@pytest.mark.parametrize(
    "text",
    ["", "3\n", "3 2\n0 1\n", "3 1\n0 1 2\n", "3 1\n0 1\n01\n", "3 1\n0 1\n012\n", "3 1\n0 1\n010\n11\n"],
)
def test_text_errors(text):
    with pytest.raises(ValueError):
        loads(text)


@given(st.sampled_from(FAMILIES), st.integers(3, 9), st.data())
def test_round_trip_property(family, size, data):
    g = generate(family, size)
    ops = data.draw(st.lists(st.integers(0, 1), min_size=g.n, max_size=g.n))
    h, ops2 = loads(dumps(g, ops))
    assert h.edges == g.edges and ops2 == ops
