import sys
import random

import pytest

from ftcut.graph import WeightedGraph, load_graph

SHARED_TRIANGLES_TEXT = "p 5 6\n0 1 1\n1 2 1\n0 2 1\n0 3 1\n3 4 1\n0 4 1"


def shared_triangles() -> WeightedGraph:
    """Two triangles sharing vertex 0."""
    return load_graph(SHARED_TRIANGLES_TEXT)


def path_with_leaf() -> WeightedGraph:
    """Path 0-1-2-3-4 with a leaf 5 on vertex 3."""
    return WeightedGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)])


def cycle(n: int) -> WeightedGraph:
    return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def triangle() -> WeightedGraph:
    return cycle(3)


def single_edge() -> WeightedGraph:
    return WeightedGraph.from_edges(2, [(0, 1)])


def random_graph(rng: random.Random, n: int, p: float = 0.4, connected: bool = True, max_weight: int = 1):
    """Random graph; connected ones start from a random recursive tree."""
    pairs = set()
    if connected:
        for v in range(1, n):
            pairs.add((rng.randrange(v), v))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                pairs.add((u, v))
    return WeightedGraph.from_edges(n, [(u, v, rng.randint(1, max_weight)) for u, v in sorted(pairs)])


@pytest.fixture
def rng():
    return random.Random(20240611)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    verdicts = getattr(module, "VERDICTS", None)
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for number in sorted(verdicts):
            terminalreporter.write_line(verdicts[number])
