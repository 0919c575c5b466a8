"""Approximation pipeline for ``k`` vertex faults on unweighted graphs.

The driver picks a small set of high-degree vertices, solves a simultaneous
max-cut over every way of failing ``k`` of them, and, when the result is
"shallow" (few edges survive those failures and every other vertex has low
degree), recomputes the cut on the residual graph after setting aside the
super-heavy vertices.

All thresholds are compared as exact rationals.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import CapExceededError, GraphValidationError, InvariantViolation
from .exact import (
    DEFAULT_CAPS,
    EXACT_MAX_CUT,
    EXACT_SMC,
    EnumerationCaps,
    OracleHandle,
    best_ft_cut_on,
)
from .graph import (
    Cut,
    WeightedGraph,
    crossing_degree,
    crossing_degrees,
    cut_value,
    flip,
    ft_value,
    masked_graph,
)

ALPHA_SMC = Fraction(878, 1000)


def as_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats go through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def _check_eps(eps: Fraction) -> None:
    if not 0 < eps < 1:
        raise GraphValidationError(f"precision must lie strictly between 0 and 1, got {eps}")


@dataclass(frozen=True)
class HeavyReport:
    H: tuple[int, ...]
    sigma: tuple[Fraction, ...]
    order: tuple[int, ...]

    @property
    def t(self) -> int:
        """Number of loop iterations (vertices added beyond the first ``k``)."""
        return len(self.sigma) - 1


def heavy_size_bound(k: int, eps, alpha: Fraction = ALPHA_SMC) -> int:
    """Largest possible ``|H|``: ``k + ceil(4 (3k^2 + k) / (eps alpha))``."""
    return k + math.ceil(4 * (3 * k * k + k) / (as_fraction(eps) * alpha))


def heavy_vertices(G: WeightedGraph, k: int, eps, alpha: Fraction = ALPHA_SMC) -> HeavyReport:
    """Greedy prefix of the degree order that carries enough guaranteed weight."""
    eps = as_fraction(eps)
    _check_eps(eps)
    if k < 1:
        raise GraphValidationError(f"fault budget must be at least 1, got {k}")
    if G.n < k:
        raise GraphValidationError(f"graph has {G.n} vertices, fewer than k={k}")
    deg = G.degrees
    order = tuple(sorted(range(G.n), key=lambda v: (-deg[v], v)))
    H = list(order[:k])
    sigma = Fraction(0)
    trace = [sigma]
    scale = eps * alpha / k
    i = 1
    while k + i <= G.n:
        dv = deg[order[k + i - 1]]
        if not (dv > scale * sigma and dv > 3 * k):
            break
        sigma += Fraction(dv - 3 * k, 4)
        trace.append(sigma)
        H.append(order[k + i - 1])
        i += 1
    return HeavyReport(tuple(H), tuple(trace), order)


def cut_minus_heavy(G: WeightedGraph, S: Cut, H: Sequence[int], k: int):
    """Smallest cut value left after failing ``k`` vertices of ``H``."""
    H = sorted(set(H))
    if len(H) < k:
        raise GraphValidationError(f"|H|={len(H)} is smaller than k={k}")
    C = cut_value(G, S)
    return min(C - crossing_degree(G, S, F) for F in itertools.combinations(H, k))


def heavy_failure_graphs(G: WeightedGraph, H: Sequence[int], k: int) -> list[WeightedGraph]:
    """``G`` with the edges of each ``k``-subset of ``H`` masked out."""
    return [masked_graph(G, F) for F in itertools.combinations(sorted(H), k)]


def simultaneous_mc(graphs: Sequence[WeightedGraph], oracle: OracleHandle = EXACT_SMC) -> Cut:
    """Cut that is large in every graph at once.

    A max-min oracle is called directly.  A threshold oracle is driven by
    binary search over integer thresholds in ``[0, max_i W_i]``; the cut from
    the largest accepted threshold is returned.
    """
    if oracle.kind == "simultaneous-max-cut":
        return oracle(list(graphs))
    if oracle.kind != "threshold":
        raise GraphValidationError(f"oracle kind {oracle.kind!r} cannot solve simultaneous max-cut")
    graphs = list(graphs)
    best = oracle(graphs, 0)
    if best is None:
        raise InvariantViolation("threshold oracle rejected the trivial threshold 0")
    lo, hi = 0, int(math.ceil(max(H.total_weight for H in graphs)))
    while lo < hi:
        mid = (lo + hi + 1) // 2
        S = oracle(graphs, mid)
        if S is None:
            hi = mid - 1
        else:
            lo, best = mid, S
    return best


def non_heavy_max_degree(G: WeightedGraph, H: Iterable[int]) -> int:
    Hs = set(H)
    return max((G.degree(v) for v in range(G.n) if v not in Hs), default=0)


def is_shallow(G: WeightedGraph, H: Sequence[int], S: Cut, k: int, eps) -> bool:
    """Low degree outside ``H`` and small cut after ``k`` heavy failures."""
    eps = as_fraction(eps)
    if non_heavy_max_degree(G, H) > 3 * k:
        return False
    return cut_minus_heavy(G, S, H, k) < Fraction(3 * k * k) / eps


@dataclass(frozen=True)
class SuperHeavyReport:
    X: tuple[int, ...]
    residual: WeightedGraph = field(repr=False)
    m_R: int
    n_R: int
    ell: Fraction
    brute_force_threshold: Fraction

    @property
    def brute_force(self) -> bool:
        return self.m_R < self.brute_force_threshold


def super_heavy(
    G: WeightedGraph, H: Sequence[int], S: Cut, k: int, eps, alpha: Fraction = ALPHA_SMC
) -> SuperHeavyReport:
    """Vertices whose degree dwarfs the heavy-failure cut value, plus the residual graph.

    The residual keeps every vertex and drops the edges touching the
    super-heavy set, so cut bit-vectors stay aligned with ``G``.
    """
    eps = as_fraction(eps)
    base = cut_minus_heavy(G, S, H, k)
    limit = Fraction(base) / alpha
    X = tuple(v for v in range(G.n) if Fraction(G.degree(v) - 3 * k, 2) > limit)
    R = masked_graph(G, X)
    n_R = sum(1 for v in range(R.n) if R.degree(v) > 0)
    ell = Fraction(6 * k * k) / (alpha * eps) + 3 * k
    return SuperHeavyReport(X, R, R.m, n_R, ell, 2 * k * ell / (alpha * eps))


def shallow_ft_cut(
    G: WeightedGraph,
    H: Sequence[int],
    S: Cut,
    k: int,
    eps,
    maxcut_oracle: OracleHandle = EXACT_MAX_CUT,
    alpha: Fraction = ALPHA_SMC,
    caps: EnumerationCaps = DEFAULT_CAPS,
    report: Optional[dict] = None,
) -> Cut:
    """Recompute the cut in the shallow case.

    Brute force over the non-isolated residual vertices when the residual is
    small, otherwise the max-cut oracle on the residual.  Super-heavy
    vertices start outside and are then greedily flipped until each has more
    than ``(d(v) - k) / 2`` crossing weight.
    """
    sh = super_heavy(G, H, S, k, eps, alpha)
    if len(sh.X) > k:
        raise InvariantViolation(f"{len(sh.X)} super-heavy vertices exceed the fault budget {k}")
    R = sh.residual
    if sh.brute_force:
        active = [v for v in range(R.n) if R.degree(v) > 0]
        if len(active) > caps.max_n:
            raise CapExceededError(
                f"shallow brute force over {len(active)} residual vertices exceeds cap {caps.max_n}"
            )
        bits = best_ft_cut_on(R, k - len(sh.X), active, caps)[0].bits
        branch = "brute-force"
    else:
        if maxcut_oracle.kind != "max-cut":
            raise GraphValidationError(f"oracle kind {maxcut_oracle.kind!r} is not a max-cut oracle")
        bits = maxcut_oracle(R).bits
        branch = "max-cut-oracle"
    for v in sh.X:
        bits &= ~(1 << v)
    out = Cut(G.n, bits)
    deg = G.degrees
    while True:
        d = crossing_degrees(G, out)
        v = next((v for v in sh.X if 2 * d[v] <= deg[v] - k), None)
        if v is None:
            break
        out = flip(out, v)
    if report is not None:
        report.update(X=list(sh.X), branch=branch, m_R=sh.m_R, n_R=sh.n_R)
    return out


@dataclass
class PipelineReport:
    H: list[int]
    shallow: bool
    X: list[int]
    branch: str
    cut: Cut
    phi: int
    phi_star: Optional[int] = None

    def to_json(self) -> dict:
        out = {
            "H": self.H,
            "shallow": self.shallow,
            "X": self.X,
            "branch": self.branch,
            "cut": self.cut.members(),
            "phi": self.phi,
        }
        if self.phi_star is not None:
            out["phi_star"] = self.phi_star
            out["ratio"] = 1.0 if self.phi_star == 0 else self.phi / self.phi_star
        return out


def aftcut_k_pipeline(
    G: WeightedGraph,
    k: int,
    eps,
    smc_oracle: OracleHandle = EXACT_SMC,
    maxcut_oracle: OracleHandle = EXACT_MAX_CUT,
    alpha: Fraction = ALPHA_SMC,
    caps: EnumerationCaps = DEFAULT_CAPS,
) -> PipelineReport:
    """Run the full driver and report every intermediate decision."""
    if not G.is_unweighted:
        raise GraphValidationError("the k-fault pipeline requires an unweighted graph")
    heavy = heavy_vertices(G, k, eps, alpha)
    S = simultaneous_mc(heavy_failure_graphs(G, heavy.H, k), smc_oracle)
    if not is_shallow(G, heavy.H, S, k, eps):
        return PipelineReport(list(heavy.H), False, [], "not-shallow", S, ft_value(G, S, k))
    info: dict = {}
    out = shallow_ft_cut(G, heavy.H, S, k, eps, maxcut_oracle, alpha, caps, report=info)
    return PipelineReport(list(heavy.H), True, info["X"], info["branch"], out, ft_value(G, out, k))


def aftcut_k_approx(
    G: WeightedGraph,
    k: int,
    eps,
    smc_oracle: OracleHandle = EXACT_SMC,
    maxcut_oracle: OracleHandle = EXACT_MAX_CUT,
) -> Cut:
    return aftcut_k_pipeline(G, k, eps, smc_oracle, maxcut_oracle).cut
