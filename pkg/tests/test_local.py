import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ftcut.errors import GraphValidationError
from ftcut.exact import exact_aftcut
from ftcut.graph import Cut, WeightedGraph, crossing_degrees, cut_value, flip, ft_value
from ftcut.local import (
    STEP_KINDS,
    critical_vertices,
    excess,
    excess_numerator,
    excesses,
    ft1,
    is_greedy_step,
    is_k_stable,
    local_search_single_fault,
    stabilize_cut,
)

from conftest import cycle, shared_triangles, random_graph, single_edge, triangle


@st.composite
def unweighted_graph_and_cut(draw, max_n=10):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return WeightedGraph.from_edges(n, edges), Cut(n, draw(st.integers(0, (1 << n) - 1)))


# ------------------------------------------------------------ stabilisation


def test_stabilize_single_edge():
    S = stabilize_cut(single_edge(), Cut(2, 0), 1)
    assert S == Cut.from_members(2, [0]) and cut_value(single_edge(), S) == 1


def test_stabilize_star_separates_center():
    G = WeightedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    S = stabilize_cut(G, Cut(4, 0), 1)
    assert cut_value(G, S) == 3


def test_stabilize_keeps_stable_cut():
    G = cycle(4)
    S = Cut.from_members(4, [0, 2])
    assert is_k_stable(G, S, 1) and stabilize_cut(G, S, 1) == S


def test_stabilize_rejects_weighted_graphs():
    with pytest.raises(GraphValidationError):
        stabilize_cut(WeightedGraph.from_edges(2, [(0, 1, 2)]), Cut(2, 0), 1)


@settings(max_examples=150, deadline=None)
@given(unweighted_graph_and_cut(), st.integers(1, 3))
def test_stabilize_dominates_input(gs, k):
    G, S = gs
    k = min(k, G.n)
    T = stabilize_cut(G, S, k)
    assert is_k_stable(G, T, k)
    assert cut_value(G, T) >= cut_value(G, S)
    assert ft_value(G, T, k) >= ft_value(G, S, k)


@settings(max_examples=150, deadline=None)
@given(unweighted_graph_and_cut(), st.integers(1, 3))
def test_greedy_step_gains_at_least_k(gs, k):
    G, S = gs
    k = min(k, G.n)
    for v in range(G.n):
        if is_greedy_step(G, S, v, k):
            T = flip(S, v)
            assert cut_value(G, T) >= cut_value(G, S) + k
            assert ft_value(G, T, k) >= ft_value(G, S, k)


# ----------------------------------------------------------------- excess


def test_excess_is_exact_half_integer():
    G = shared_triangles()
    S = Cut.from_members(5, [0])
    assert excess(G, S, 0) == 2 and excess(G, S, 1) == 0
    T = Cut.from_members(5, [1])
    assert excess(G, T, 0) == -1 and excess_numerator(G, T, 0) == -2
    G3 = WeightedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert excess(G3, Cut.from_members(4, [1]), 0) == Fraction(-1, 2)


@settings(max_examples=100, deadline=None)
@given(unweighted_graph_and_cut())
def test_stable_cuts_have_nonnegative_excess(gs):
    G, S = gs
    T = stabilize_cut(G, S, 1)
    assert all(x >= 0 for x in excesses(G, T))
    # the cut value decomposes into m/2 plus half the total excess
    assert cut_value(G, T) == Fraction(G.m, 2) + sum(excesses(G, T)) / 2


@settings(max_examples=100, deadline=None)
@given(unweighted_graph_and_cut())
def test_single_fault_fast_path(gs):
    G, S = gs
    assert ft1(G, S) == ft_value(G, S, 1)
    crit = critical_vertices(G, S)
    assert all(ft_value(G, S, 1) == cut_value(G, S) - crossing_degrees(G, S)[u] for u in crit)


# ----------------------------------------------------------- local search


def test_local_search_shared_triangles():
    G = shared_triangles()
    S, trace = local_search_single_fault(G)
    assert 2 * ft1(G, S) >= G.m - G.max_degree
    assert 2 * ft1(G, S) >= exact_aftcut(G, 1)[1]
    assert all(step.kind in STEP_KINDS for step in trace)


def test_local_search_four_cycle_is_stable_cut():
    G = cycle(4)
    S, trace = local_search_single_fault(G)
    assert is_k_stable(G, S, 1) and ft1(G, S) in (1, 2)
    assert all(step.kind == "type-1" for step in trace)


def test_local_search_small_degree_cases():
    path = WeightedGraph.from_edges(3, [(0, 1), (1, 2)])
    S, _ = local_search_single_fault(path)
    assert is_k_stable(path, S, 1)
    S, _ = local_search_single_fault(triangle())
    assert ft1(triangle(), S) == 0 == exact_aftcut(triangle(), 1)[1]
    assert local_search_single_fault(WeightedGraph.from_edges(3, []))[1] == []


def test_local_search_rejects_weighted_graphs():
    with pytest.raises(GraphValidationError):
        local_search_single_fault(WeightedGraph.from_edges(2, [(0, 1, 3)]))


def test_trace_serialisation():
    _, trace = local_search_single_fault(shared_triangles())
    doc = json.loads(trace.dumps())
    assert doc == trace.to_json()
    assert all(set(row) == {"step", "vertex", "cut_value", "ft_value"} for row in doc)


def test_local_search_on_disconnected_and_cycle_graphs():
    rng = random.Random(21)
    for _ in range(150):
        G = random_graph(rng, rng.randint(1, 10), p=rng.choice([0.1, 0.3]), connected=False)
        S, trace = local_search_single_fault(G)
        assert 2 * ft1(G, S) >= exact_aftcut(G, 1)[1]
        assert len(trace) <= 4 * G.m + 2
    for n in range(3, 12):
        S, _ = local_search_single_fault(cycle(n))
        assert 2 * ft1(cycle(n), S) >= exact_aftcut(cycle(n), 1)[1]


def test_local_search_is_deterministic():
    G = random_graph(random.Random(22), 9, p=0.5)
    assert local_search_single_fault(G) == local_search_single_fault(G)
