import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftcut.errors import GraphParseError, GraphValidationError
from ftcut.graph import (
    Cut,
    WeightedGraph,
    crossing_degree,
    crossing_degrees,
    cut_value,
    delete_vertices,
    dump_graph,
    flip,
    ft_value,
    load_graph,
    masked_graph,
    max_fault_degree,
    parse_cut,
    restrict_cut,
)

from conftest import cycle, shared_triangles, path_with_leaf, random_graph, single_edge


@st.composite
def graphs(draw, max_n=8, max_weight=3):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    ws = draw(st.lists(st.integers(1, max_weight), min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph.from_edges(n, [(u, v, w) for (u, v), w in zip(chosen, ws)])


@st.composite
def graph_and_cut(draw, max_n=8):
    G = draw(graphs(max_n))
    return G, Cut(G.n, draw(st.integers(0, (1 << G.n) - 1)))


# ------------------------------------------------------------------ loading


def test_load_smallest_graph():
    G = load_graph("p 2 1\n0 1 1")
    assert (G.n, G.m, G.total_weight) == (2, 1, 1)


def test_load_shared_triangles_structure():
    G = shared_triangles()
    assert (G.n, G.m, G.max_degree) == (5, 6, 4)
    assert sorted(G.neighbors(0)) == [1, 2, 3, 4]


def test_load_rejects_self_loop():
    with pytest.raises(GraphValidationError):
        load_graph("p 2 1\n0 0 1")


@pytest.mark.parametrize(
    "text",
    ["p 2 1\n0 1 0", "p 2 2\n0 1\n1 0", "p 2 1\n0 2", "p 3 1\n0 1 -2"],
)
def test_load_rejects_invalid_edges(text):
    with pytest.raises(GraphValidationError):
        load_graph(text)


@pytest.mark.parametrize("text", ["0 x", "0 1 2 3", "p 3", "0 1 1.5", "q 1 2"])
def test_load_rejects_malformed_lines(text):
    with pytest.raises((GraphParseError, GraphValidationError)):
        load_graph(text)


def test_load_comments_defaults_and_isolated_vertices():
    G = load_graph("# header comment\np 4 2\n\n0 1\n# mid\n1 2 5\n")
    assert G.n == 4 and G.degree(3) == 0
    assert G.edges == ((0, 1, 1), (1, 2, 5))


def test_load_without_header_infers_n():
    assert load_graph("0 3\n1 2 2").n == 4


def test_header_edge_count_mismatch():
    with pytest.raises(GraphValidationError):
        load_graph("p 3 2\n0 1")


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_dump_load_round_trip(G):
    assert load_graph(dump_graph(G)) == G


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_cached_degrees_match_recomputation(G):
    for v in range(G.n):
        assert G.degree(v) == sum(w for a, b, w in G.edges if v in (a, b))
    assert G.total_weight == sum(w for *_, w in G.edges)


# --------------------------------------------------------------- cut values


def test_path_with_leaf_cut_values():
    G = path_with_leaf()
    assert cut_value(G, Cut.from_members(6, [1, 3])) == 5
    assert cut_value(G, Cut.from_members(6, [0, 2, 3])) == 4
    assert cut_value(G, Cut(6, 0)) == 0


def test_cut_dimension_mismatch():
    with pytest.raises(GraphValidationError):
        cut_value(path_with_leaf(), Cut(5, 0))


def test_crossing_degree_examples():
    G = shared_triangles()
    assert crossing_degree(G, Cut.from_members(5, [0, 1, 4]), [0]) == 2
    assert crossing_degree(G, Cut.from_members(5, [0, 1, 4]), []) == 0
    assert crossing_degree(single_edge(), Cut.from_members(2, [0]), [1]) == 1


def test_crossing_degree_counts_shared_edge_once():
    G = single_edge()
    assert crossing_degree(G, Cut.from_members(2, [0]), [0, 1]) == 1


def test_ft_value_examples():
    G = shared_triangles()
    assert ft_value(G, Cut.from_members(5, [0]), 1) == 0
    assert ft_value(G, Cut.from_members(5, [0, 1, 4]), 1) == 2
    assert ft_value(cycle(4), Cut.from_members(4, [0, 2]), 1) == 2


def test_ft_value_witness_is_lexicographically_first():
    G = cycle(4)
    val, F = ft_value(G, Cut.from_members(4, [0, 2]), 2, witness=True)
    # {0,2} and {1,3} both remove all four edges; the first one is reported
    assert val == 0 and F == (0, 2)
    assert ft_value(G, Cut.from_members(4, [0, 2]), 1, witness=True) == (2, (0,))


def test_ft_value_rejects_large_k():
    with pytest.raises(GraphValidationError):
        ft_value(cycle(3), Cut(3, 1), 4)


def test_flip_examples():
    assert flip(Cut(3, 0), 0) == Cut(3, 1)
    assert flip(Cut(3, 1), 0) == Cut(3, 0)
    with pytest.raises(GraphValidationError):
        flip(Cut(3, 0), 3)


@settings(max_examples=100, deadline=None)
@given(graph_and_cut(), st.data())
def test_flip_is_involution_and_change_rule(gs, data):
    G, S = gs
    v = data.draw(st.integers(0, G.n - 1))
    T = flip(S, v)
    assert flip(T, v) == S
    d, dT = crossing_degrees(G, S), crossing_degrees(G, T)
    assert cut_value(G, T) - cut_value(G, S) == dT[v] - d[v]


@settings(max_examples=100, deadline=None)
@given(graph_and_cut(max_n=7), st.data())
def test_deleting_faults_matches_crossing_degree(gs, data):
    G, S = gs
    k = data.draw(st.integers(0, G.n))
    F = data.draw(st.lists(st.integers(0, G.n - 1), min_size=k, max_size=k, unique=True))
    H, keep = delete_vertices(G, F)
    assert cut_value(H, restrict_cut(S, keep)) == cut_value(G, S) - crossing_degree(G, S, F)


def test_ft_value_matches_explicit_deletion_exhaustively():
    rng = random.Random(5)
    for _ in range(40):
        G = random_graph(rng, rng.randint(1, 8), connected=False, max_weight=3)
        for bits in range(1 << G.n):
            S = Cut(G.n, bits)
            for k in range(min(G.n, 3) + 1):
                explicit = min(
                    cut_value(*(lambda H, keep: (H, restrict_cut(S, keep)))(*delete_vertices(G, F)))
                    for F in itertools.combinations(range(G.n), k)
                )
                assert ft_value(G, S, k) == explicit


@settings(max_examples=80, deadline=None)
@given(graph_and_cut(max_n=7))
def test_ft_value_monotone_and_symmetric(gs):
    G, S = gs
    assert ft_value(G, S, 0) == cut_value(G, S)
    vals = [ft_value(G, S, k) for k in range(G.n + 1)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals == [ft_value(G, S.complement(), k) for k in range(G.n + 1)]


def test_masked_graph_examples():
    G = shared_triangles()
    assert masked_graph(G, []) == G
    assert masked_graph(single_edge(), [0]).m == 0
    H = masked_graph(G, [0])
    assert H.n == 5 and {(u, v) for u, v, _ in H.edges} == {(1, 2), (3, 4)}


def test_max_fault_degree():
    G = shared_triangles()
    assert max_fault_degree(G, 1) == 4
    assert max_fault_degree(G, 2) == 5


def test_cut_serialisation():
    S = Cut.from_members(5, [3, 0, 2])
    assert str(S) == "[0,2,3]"
    assert parse_cut("[0,2,3]", 5) == S
    assert parse_cut("[]", 2) == Cut(2, 0)
    with pytest.raises(GraphParseError):
        parse_cut("0,2", 5)
