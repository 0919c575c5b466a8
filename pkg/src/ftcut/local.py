"""Greedy stabilisation and the typed local search for a single fault.

Everything here works on unweighted graphs with integer arithmetic.  Half
integer thresholds such as ``d(v)/2`` are compared after doubling both sides.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from fractions import Fraction

from .errors import GraphValidationError, InvariantViolation
from .graph import Cut, WeightedGraph, crossing_degrees, cut_value, flip

STEP_KINDS = ("type-0", "type-1", "build-up", "type-2")


@dataclass(frozen=True)
class Step:
    kind: str
    vertex: int
    cut_value: int
    ft_value: int


class StepTrace(list):
    """List of :class:`Step` records in execution order."""

    def to_json(self) -> list[dict]:
        return [
            {"step": s.kind, "vertex": s.vertex, "cut_value": s.cut_value, "ft_value": s.ft_value}
            for s in self
        ]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def _require_unweighted(G: WeightedGraph, what: str) -> None:
    if not G.is_unweighted:
        raise GraphValidationError(f"{what} requires an unweighted graph")


def excess_numerator(G: WeightedGraph, S: Cut, v: int) -> int:
    """``2 * x_S(v) = 2 d_S(v) - d(v)``, an integer."""
    return 2 * crossing_degrees(G, S)[v] - G.degree(v)


def excess(G: WeightedGraph, S: Cut, v: int) -> Fraction:
    """``x_S(v) = d_S(v) - d(v)/2`` as an exact half integer."""
    return Fraction(excess_numerator(G, S, v), 2)


def excesses(G: WeightedGraph, S: Cut) -> list[Fraction]:
    d = crossing_degrees(G, S)
    return [Fraction(2 * d[v] - G.degree(v), 2) for v in range(G.n)]


def is_greedy_step(G: WeightedGraph, S: Cut, v: int, k: int) -> bool:
    """``d_S(v) <= (d(v) - k) / 2``."""
    return 2 * crossing_degrees(G, S)[v] <= G.degree(v) - k


def is_k_stable(G: WeightedGraph, S: Cut, k: int) -> bool:
    d = crossing_degrees(G, S)
    return all(2 * d[v] > G.degree(v) - k for v in range(G.n))


def ft1(G: WeightedGraph, S: Cut) -> int:
    """Single-fault value via the fast path ``C_S - max_v d_S(v)``."""
    d = crossing_degrees(G, S)
    return sum(d) // 2 - max(d, default=0)


def critical_vertices(G: WeightedGraph, S: Cut) -> list[int]:
    """Vertices whose single failure realises the single-fault value."""
    d = crossing_degrees(G, S)
    top = max(d, default=0)
    return [v for v in range(G.n) if d[v] == top]


def stabilize_cut(G: WeightedGraph, S: Cut, k: int) -> Cut:
    """Apply ``k``-greedy steps until none is left.

    Scans by ascending vertex id and restarts the scan after every move, so
    the result is a deterministic function of the input.
    """
    _require_unweighted(G, "stabilize_cut")
    if S.n != G.n:
        raise GraphValidationError(f"cut has {S.n} bits, graph has {G.n} vertices")
    deg = G.degrees
    while True:
        d = crossing_degrees(G, S)
        for v in range(G.n):
            if 2 * d[v] <= deg[v] - k:
                S = flip(S, v)
                break
        else:
            return S


def local_search_single_fault(G: WeightedGraph) -> tuple[Cut, StepTrace]:
    """Combinatorial 1/2-approximation for the single-fault tolerant cut.

    For ``max_degree <= 2`` this is plain stabilisation from the empty cut
    (its moves are recorded as type-1 steps).  Otherwise it runs the four
    step kinds in priority order until the fault tolerant value reaches
    ``(m - max_degree) / 2``.
    """
    _require_unweighted(G, "local_search_single_fault")
    trace = StepTrace()
    S = Cut(G.n, 0)
    m, top = G.m, G.max_degree
    deg = G.degrees

    if top <= 2:
        while True:
            d = crossing_degrees(G, S)
            v = next((v for v in range(G.n) if 2 * d[v] <= deg[v] - 1), None)
            if v is None:
                return S, trace
            S = flip(S, v)
            trace.append(Step("type-1", v, cut_value(G, S), ft1(G, S)))

    target = m - top  # compare 2 * phi against this
    cap = 4 * m + 2
    phi = ft1(G, S)
    while 2 * phi < target:
        if len(trace) >= cap:
            raise InvariantViolation(f"local search exceeded {cap} iterations")
        kind, v = _choose_step(G, S, phi, target, deg)
        S = flip(S, v)
        new_phi = ft1(G, S)
        if new_phi < phi:
            raise InvariantViolation(f"{kind} step on vertex {v} lowered the fault tolerant value")
        phi = new_phi
        trace.append(Step(kind, v, cut_value(G, S), phi))
    return S, trace


def _choose_step(G: WeightedGraph, S: Cut, phi: int, target: int, deg) -> tuple[str, int]:
    n = G.n
    d = crossing_degrees(G, S)
    flipped = [flip(S, v) for v in range(n)]
    phis = [ft1(G, T) for T in flipped]

    for v in range(n):
        if 2 * phis[v] >= target:
            return "type-0", v
    for v in range(n):
        if 2 * d[v] < deg[v]:
            return "type-1", v
    balanced = [v for v in range(n) if 2 * d[v] == deg[v]]
    for v in balanced:
        if phis[v] >= phi:
            d2 = crossing_degrees(G, flipped[v])
            if any(2 * d2[w] < deg[w] for w in range(n)):
                return "build-up", v
    for v in balanced:
        if phis[v] > phi:
            return "type-2", v
    raise InvariantViolation(
        f"no step applies to cut {S} with value {phi} below target {Fraction(target, 2)}"
    )


__all__ = [
    "STEP_KINDS",
    "Step",
    "StepTrace",
    "critical_vertices",
    "excess",
    "excess_numerator",
    "excesses",
    "ft1",
    "is_greedy_step",
    "is_k_stable",
    "local_search_single_fault",
    "stabilize_cut",
]
