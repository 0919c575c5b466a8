"""Brute-force baselines and the oracle contract.

Every solver here enumerates cuts with vertex 0 kept outside (a cut and its
complement have the same value, fault tolerant value and crossing degrees),
in increasing bit-vector order, and keeps the first maximiser.  So ties go to
the smallest mask, and parallel or chunked runs agree exactly with serial
ones.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .distribution import CutDistribution, configuration_lp, distribution_from_solution
from .errors import CapExceededError, GraphValidationError, NumericalError
from .graph import Cut, WeightedGraph, crossing_matrix, fault_incidence, fault_sets
from .lp import simplex_solve

CHUNK_CELLS = 1 << 22


@dataclass(frozen=True)
class EnumerationCaps:
    max_n: int = 26
    max_fault_sets: int = 20_000
    max_lp_n: int = 14

    def check_n(self, n: int, what: str) -> None:
        if n > self.max_n:
            raise CapExceededError(f"{what}: n={n} exceeds enumeration cap {self.max_n}")

    def check_faults(self, n: int, k: int, what: str) -> None:
        if k < 0 or k > n:
            raise GraphValidationError(f"{what}: fault budget k={k} must lie in 0..{n}")
        if math.comb(n, k) > self.max_fault_sets:
            raise CapExceededError(
                f"{what}: C({n},{k}) = {math.comb(n, k)} fault sets exceeds cap {self.max_fault_sets}"
            )


DEFAULT_CAPS = EnumerationCaps()


@dataclass(frozen=True)
class OracleHandle:
    """Deterministic solver with a declared approximation ratio.

    ``kind`` is one of

    * ``"max-cut"``: ``solver(G) -> Cut``;
    * ``"simultaneous-max-cut"``: ``solver(graphs) -> Cut`` maximising the
      smallest cut value;
    * ``"threshold"``: ``solver(graphs, c) -> Cut | None``, returning a cut with
      every value ``>= ratio * c`` whenever some cut reaches ``c`` everywhere.
    """

    kind: str
    ratio: float
    solver: Callable
    name: str = "custom"

    def __post_init__(self) -> None:
        if self.kind not in ("max-cut", "simultaneous-max-cut", "threshold"):
            raise ValueError(f"unknown oracle kind {self.kind!r}")
        if not 0 < self.ratio <= 1:
            raise ValueError(f"oracle ratio must lie in (0, 1], got {self.ratio}")

    def __call__(self, *args):
        return self.solver(*args)


# ---------------------------------------------------------------- enumeration


def _half_masks(n: int):
    """Yield arrays of cut masks with bit 0 clear, ascending, in chunks."""
    total = 1 << max(n - 1, 0)
    step = max(1, min(total, CHUNK_CELLS // max(n, 1)))
    for start in range(0, total, step):
        yield np.arange(start, min(total, start + step), dtype=np.int64) << 1


@functools.lru_cache(maxsize=16)
def _cached_crossing(n: int, pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    G = WeightedGraph(n, tuple((u, v, 1) for u, v in pairs))
    masks = np.arange(1 << max(n - 1, 0), dtype=np.int64) << 1
    out = crossing_matrix(G, masks).astype(float)
    out.setflags(write=False)
    return out


def _small_crossing(G: WeightedGraph) -> Optional[np.ndarray]:
    """Whole crossing matrix, cached by edge structure, when it is small."""
    if (1 << max(G.n - 1, 0)) * max(G.m, 1) > CHUNK_CELLS:
        return None
    return _cached_crossing(G.n, tuple((u, v) for u, v, _ in G.edges))


def _argmax_over_cuts(G: WeightedGraph, score: Callable[[np.ndarray, np.ndarray], np.ndarray]):
    """Enumerate half the cuts, scoring each chunk by ``score(masks, cross)``."""
    best_val, best_mask = None, 0
    for masks in _half_masks(G.n):
        cross = crossing_matrix(G, masks)
        vals = score(masks, cross)
        i = int(np.argmax(vals))
        if best_val is None or vals[i] > best_val:
            best_val, best_mask = vals[i], int(masks[i])
    return Cut(G.n, best_mask), best_val


def _as_number(x, integral: bool):
    return int(x) if integral else float(x)


def exact_max_cut(G: WeightedGraph, caps: EnumerationCaps = DEFAULT_CAPS) -> tuple[Cut, int | float]:
    """Maximum cut by exhaustive search over ``2^(n-1)`` cuts."""
    caps.check_n(G.n, "exact_max_cut")
    if G.m == 0:
        return Cut(G.n, 0), _as_number(0, G.integral)
    _, _, ws = G.edge_arrays()
    table = _small_crossing(G)
    if table is not None:
        vals = table @ ws.astype(float)
        i = int(np.argmax(vals))
        best = int(round(vals[i])) if G.integral else float(vals[i])
        return Cut(G.n, i << 1), best
    S, best = _argmax_over_cuts(G, lambda masks, cross: cross @ ws)
    return S, _as_number(best, G.integral)


def exact_aftcut(
    G: WeightedGraph, k: int, caps: EnumerationCaps = DEFAULT_CAPS
) -> tuple[Cut, int | float]:
    """Cut maximising the ``k``-fault tolerant value, with that value."""
    caps.check_n(G.n, "exact_aftcut")
    caps.check_faults(G.n, k, "exact_aftcut")
    if G.m == 0:
        return Cut(G.n, 0), _as_number(0, G.integral)
    _, _, ws = G.edge_arrays()
    T = fault_incidence(G, fault_sets(G.n, k))

    def score(masks, cross):
        c = cross.astype(ws.dtype)
        removed = (c @ T).max(axis=1) if T.shape[1] else 0
        return c @ ws - removed

    S, best = _argmax_over_cuts(G, score)
    return S, _as_number(best, G.integral)


def best_ft_cut_on(
    G: WeightedGraph, k: int, vertices: Sequence[int], caps: EnumerationCaps = DEFAULT_CAPS
) -> tuple[Cut, int | float]:
    """Like :func:`exact_aftcut` but only cuts inside ``vertices`` are tried.

    Vertices outside the list stay outside the cut.  The first listed vertex
    is fixed outside as well (complement symmetry within the list).
    """
    verts = list(vertices)
    caps.check_n(len(verts), "best_ft_cut_on")
    caps.check_faults(G.n, k, "best_ft_cut_on")
    if not verts or G.m == 0:
        return Cut(G.n, 0), _as_number(0, G.integral)
    _, _, ws = G.edge_arrays()
    T = fault_incidence(G, fault_sets(G.n, k))
    shifts = np.array(verts, dtype=np.int64)
    best_val, best_mask = None, 0
    for local in _half_masks(len(verts)):
        masks = (((local[:, None] >> np.arange(len(verts))) & 1) << shifts).sum(axis=1)
        c = crossing_matrix(G, masks).astype(ws.dtype)
        removed = (c @ T).max(axis=1) if T.shape[1] else 0
        vals = c @ ws - removed
        i = int(np.argmax(vals))
        if best_val is None or vals[i] > best_val:
            best_val, best_mask = vals[i], int(masks[i])
    return Cut(G.n, best_mask), _as_number(best_val, G.integral)


def _check_family(graphs: Sequence[WeightedGraph]) -> int:
    if not graphs:
        raise GraphValidationError("need at least one graph")
    n = graphs[0].n
    for H in graphs:
        if H.n != n:
            raise GraphValidationError(f"graphs disagree on vertex count ({H.n} vs {n})")
    return n


def _family_values(graphs: Sequence[WeightedGraph], masks: np.ndarray) -> np.ndarray:
    """``(len(masks), len(graphs))`` cut values."""
    cols = []
    for H in graphs:
        _, _, ws = H.edge_arrays()
        if H.m == 0:
            cols.append(np.zeros(len(masks)))
        else:
            cols.append(crossing_matrix(H, masks).astype(float) @ ws.astype(float))
    return np.stack(cols, axis=1)


def exact_simultaneous_max_cut(
    graphs: Sequence[WeightedGraph], caps: EnumerationCaps = DEFAULT_CAPS
) -> tuple[Cut, int | float]:
    """Cut maximising ``min_i C_{S,G_i}``, with that minimum."""
    n = _check_family(graphs)
    caps.check_n(n, "exact_simultaneous_max_cut")
    integral = all(H.integral for H in graphs)
    best_val, best_mask = None, 0
    for masks in _half_masks(n):
        vals = _family_values(graphs, masks).min(axis=1)
        i = int(np.argmax(vals))
        if best_val is None or vals[i] > best_val:
            best_val, best_mask = vals[i], int(masks[i])
    best = int(round(best_val)) if integral else float(best_val)
    return Cut(n, best_mask), best


def exact_threshold_cut(
    graphs: Sequence[WeightedGraph], c: float, caps: EnumerationCaps = DEFAULT_CAPS
) -> Optional[Cut]:
    """First cut (in enumeration order) reaching ``c`` in every graph, else ``None``."""
    n = _check_family(graphs)
    caps.check_n(n, "exact_threshold_cut")
    for masks in _half_masks(n):
        ok = (_family_values(graphs, masks) >= c - 1e-12).all(axis=1)
        hits = np.flatnonzero(ok)
        if hits.size:
            return Cut(n, int(masks[hits[0]]))
    return None


def stable_half_max_cut(G: WeightedGraph) -> Cut:
    """Single-flip local search from the empty cut.

    Scans vertices by ascending id and restarts after each improving move.
    Every vertex of the result has at least half its weight crossing, so the
    cut holds at least ``W/2 >= OPT/2``.
    """
    S = 0
    tol = 1e-12 * max(1.0, float(G.total_weight))
    inside = [False] * G.n
    improved = True
    while improved:
        improved = False
        for v in range(G.n):
            crossing = 0.0
            for idx in G.adjacency[v]:
                a, b, w = G.edges[idx]
                other = b if a == v else a
                if inside[other] != inside[v]:
                    crossing += w
            if G.degrees[v] - 2 * crossing > tol:
                inside[v] = not inside[v]
                S ^= 1 << v
                improved = True
                break
    return Cut(G.n, S)


EXACT_MAX_CUT = OracleHandle("max-cut", 1.0, lambda G: exact_max_cut(G)[0], name="exact")
EXACT_SMC = OracleHandle(
    "simultaneous-max-cut", 1.0, lambda graphs: exact_simultaneous_max_cut(graphs)[0], name="exact"
)
EXACT_THRESHOLD_SMC = OracleHandle(
    "threshold", 1.0, lambda graphs, c: exact_threshold_cut(graphs, c), name="exact-threshold"
)
STABLE_HALF_MAX_CUT = OracleHandle("max-cut", 0.5, stable_half_max_cut, name="stable-half")


# ---------------------------------------------------------------- oblivious


def exact_oftcut_value(
    G: WeightedGraph, k: int, caps: EnumerationCaps = DEFAULT_CAPS
) -> tuple[CutDistribution, float]:
    """Optimal oblivious distribution from the full configuration LP.

    One column per cut with vertex 0 outside; the complement of a cut has an
    identical column, so dropping it leaves the optimum unchanged.
    """
    if G.n > caps.max_lp_n:
        raise CapExceededError(f"exact_oftcut_value: n={G.n} exceeds LP cap {caps.max_lp_n}")
    caps.check_faults(G.n, k, "exact_oftcut_value")
    if G.m == 0:
        return CutDistribution.point_mass(Cut(G.n, 0)), 0.0
    cuts = [Cut(G.n, b << 1) for b in range(1 << (G.n - 1))]
    lp, _ = configuration_lp(G, k, cuts)
    res = simplex_solve(lp)
    if not res.optimal:
        raise NumericalError(f"configuration LP returned status {res.status}")
    return distribution_from_solution(cuts, res.x[:-1]), float(res.objective)


def oftcut_dual(G: WeightedGraph, k: int, caps: EnumerationCaps = DEFAULT_CAPS):
    """Optimal dual ``(X, Y)`` of the full configuration LP.

    ``X`` is indexed like ``fault_sets(n, k)``; ``Y`` is the mass-row price.
    """
    if G.n > caps.max_lp_n:
        raise CapExceededError(f"oftcut_dual: n={G.n} exceeds LP cap {caps.max_lp_n}")
    caps.check_faults(G.n, k, "oftcut_dual")
    cuts = [Cut(G.n, b << 1) for b in range(1 << max(G.n - 1, 0))]
    lp, faults = configuration_lp(G, k, cuts)
    res = simplex_solve(lp)
    if not res.optimal:
        raise NumericalError(f"configuration LP returned status {res.status}")
    return res.duals[: len(faults)], float(res.duals[-1]), faults
