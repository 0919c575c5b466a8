"""Instance generators, the star reduction and random-cut experiments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import CapExceededError, GraphValidationError
from .graph import WeightedGraph, fault_incidence, fault_sets

FAMILIES = ("shared-triangles", "path-leaf", "cycle", "heavy-cycle", "star", "random-connected")
EXACT_RANDOM_CUT_MAX_N = 20


@dataclass(frozen=True)
class FamilySpec:
    """Parameters of a generated family.

    ``n`` is the vertex count except for ``shared-triangles`` (where ``t``
    counts triangles) and ``star`` (where ``n`` counts leaves).
    ``random-connected`` uses ``p`` for extra-edge density, ``seed`` for the
    generator and ``max_weight`` for uniform integer weights in
    ``1..max_weight``.
    """

    family: str
    n: int = 0
    t: int = 2
    p: float = 0.3
    seed: int = 0
    max_weight: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise GraphValidationError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        f = self.family
        if f == "shared-triangles" and self.t < 1:
            raise GraphValidationError("shared-triangles needs t >= 1")
        if f == "cycle" and self.n < 3:
            raise GraphValidationError("cycle needs n >= 3")
        if f == "heavy-cycle" and self.n < 4:
            raise GraphValidationError("heavy-cycle needs n >= 4")
        if f == "star" and self.n < 1:
            raise GraphValidationError("star needs at least one leaf")
        if f == "random-connected":
            if self.n < 1:
                raise GraphValidationError("random-connected needs n >= 1")
            if not 0 <= self.p <= 1:
                raise GraphValidationError(f"edge probability {self.p} outside [0, 1]")
            if self.max_weight < 1:
                raise GraphValidationError("max_weight must be at least 1")


def generate(spec: FamilySpec) -> WeightedGraph:
    f = spec.family
    if f == "shared-triangles":
        edges = []
        for i in range(spec.t):
            a, b = 2 * i + 1, 2 * i + 2
            edges += [(0, a), (a, b), (0, b)]
        return WeightedGraph.from_edges(2 * spec.t + 1, edges)
    if f == "path-leaf":
        # path 0-1-2-3-4 with a leaf 5 hanging off vertex 3
        return WeightedGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (3, 5)])
    if f == "cycle":
        n = spec.n
        return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])
    if f == "heavy-cycle":
        return heavy_cycle(spec.n)
    if f == "star":
        return WeightedGraph.from_edges(spec.n + 1, [(0, i) for i in range(1, spec.n + 1)])
    return random_connected(spec.n, spec.p, spec.seed, spec.max_weight)


def heavy_cycle(n: int) -> WeightedGraph:
    """Cycle ``v_0 .. v_{n-1}`` where edges ``e_0`` and ``e_2`` weigh ``n(n-3)``.

    Edge ``e_i`` joins ``v_i`` and ``v_{i+1 mod n}``.
    """
    if n < 4:
        raise GraphValidationError("heavy-cycle needs n >= 4")
    heavy = n * (n - 3)
    return WeightedGraph.from_edges(
        n, [(i, (i + 1) % n, heavy if i in (0, 2) else 1) for i in range(n)]
    )


def random_connected(n: int, p: float, seed: int, max_weight: int = 1) -> WeightedGraph:
    """Uniform random recursive tree plus each other pair with probability ``p``."""
    rng = np.random.default_rng(seed)
    pairs = set()
    for v in range(1, n):
        pairs.add((int(rng.integers(v)), v))
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in pairs and rng.random() < p:
                pairs.add((u, v))
    ordered = sorted(pairs)
    if max_weight > 1:
        ws = rng.integers(1, max_weight + 1, size=len(ordered))
        return WeightedGraph.from_edges(n, [(u, v, int(w)) for (u, v), w in zip(ordered, ws)])
    return WeightedGraph.from_edges(n, ordered)


def star_reduction(G: WeightedGraph) -> WeightedGraph:
    """Disjoint union of ``G`` with a star on ``n`` leaves, centre joined to vertex 0.

    Vertex ids: ``0..n-1`` original, ``n`` the centre, ``n+1..2n`` the leaves.
    """
    if not G.is_unweighted:
        raise GraphValidationError("star reduction is defined for unweighted graphs")
    if G.n < 1:
        raise GraphValidationError("star reduction needs at least one vertex")
    n = G.n
    edges = [(u, v, 1) for u, v, _ in G.edges]
    edges += [(n, n + i, 1) for i in range(1, n + 1)]
    edges.append((0, n, 1))
    return WeightedGraph.from_edges(2 * n + 1, edges)


@dataclass(frozen=True)
class RandomCutResult:
    mean: float | Fraction
    stderr: float
    trials: int
    exact: bool


def _ft_values(G: WeightedGraph, bits: np.ndarray, k: int) -> np.ndarray:
    """Fault tolerant values of the cuts given as rows of a 0/1 matrix."""
    if G.m == 0:
        return np.zeros(len(bits), dtype=np.int64)
    us, vs, ws = G.edge_arrays()
    cross = (bits[:, us] != bits[:, vs]).astype(np.int64)
    T = fault_incidence(G, fault_sets(G.n, k)).astype(np.int64)
    removed = (cross @ T).max(axis=1) if T.shape[1] else 0
    return cross @ ws.astype(np.int64) - removed


def uniform_random_cut_ft(
    G: WeightedGraph,
    k: int,
    mode: str = "exact",
    trials: int = 10_000,
    seed: int = 0,
    chunk: int = 1 << 14,
) -> RandomCutResult:
    """Expected ``k``-fault tolerant value of a uniformly random cut.

    ``exact`` averages over all ``2^n`` cuts and returns a Fraction.
    ``monte-carlo`` draws trial ``i`` from a generator seeded by
    ``(seed, i)``, so the result does not depend on how trials are batched.
    """
    if not G.integral:
        raise GraphValidationError("random-cut experiments need integer weights")
    if k < 0 or k > G.n:
        raise GraphValidationError(f"fault budget k={k} must lie in 0..{G.n}")
    if mode == "exact":
        if G.n > EXACT_RANDOM_CUT_MAX_N:
            raise CapExceededError(f"exact random-cut mode needs n <= {EXACT_RANDOM_CUT_MAX_N}, got {G.n}")
        total = 0
        shifts = np.arange(G.n, dtype=np.int64)
        for start in range(0, 1 << G.n, chunk):
            masks = np.arange(start, min(1 << G.n, start + chunk), dtype=np.int64)
            total += int(_ft_values(G, (masks[:, None] >> shifts) & 1, k).sum())
        return RandomCutResult(Fraction(total, 1 << G.n), 0.0, 1 << G.n, True)
    if mode != "monte-carlo":
        raise GraphValidationError(f"unknown mode {mode!r}")
    if trials < 2:
        raise GraphValidationError("monte-carlo mode needs at least 2 trials")
    vals = []
    for s in range(0, trials, chunk):
        rows = [
            np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,))).integers(0, 2, size=G.n)
            for i in range(s, min(trials, s + chunk))
        ]
        vals.append(_ft_values(G, np.array(rows, dtype=np.int8).reshape(len(rows), G.n), k))
    v = np.concatenate(vals).astype(float)
    return RandomCutResult(float(v.mean()), float(v.std(ddof=1) / np.sqrt(trials)), trials, False)


def heavy_cycle_witness_value(n: int) -> int:
    """Fault tolerant value of the cut ``{v_1, v_2}`` in :func:`heavy_cycle`."""
    return n * (n - 3)


def random_cut_trend(n: int, p: float, trials: int, seed: int) -> dict:
    """Mean single-fault value of a random cut over ``m - max_degree``.

    An empirical trend on large random graphs, reported without guarantee.
    """
    G = random_connected(n, p, seed)
    res = uniform_random_cut_ft(G, 1, "monte-carlo", trials=trials, seed=seed)
    upper = G.total_weight - G.max_degree
    ratio: Optional[float] = None if upper == 0 else res.mean / upper
    return {"n": n, "m": G.m, "mean": res.mean, "stderr": res.stderr, "phi_upper": upper, "ratio": ratio, "guaranteed": False}
