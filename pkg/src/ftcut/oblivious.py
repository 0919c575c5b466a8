"""Oblivious-adversary pipeline: dual search by ellipsoid, primal by simplex.

The dual of the configuration LP asks for a distribution ``X`` over fault
sets and a value ``Y`` such that no cut is heavier than ``Y`` once each edge
is discounted by the probability that one of its endpoints fails.  For a
fixed ``X`` the most violated dual constraint is a max-cut of the reweighted
graph, which is what the separation oracle computes.  A binary search on
``Y`` with an ellipsoid run per probe finds the smallest oracle-feasible
``Y``, and the cuts the oracle returned along the way become the columns of
a reduced configuration LP whose solution is the output distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .distribution import (
    CutDistribution,
    configuration_lp,
    distribution_from_solution,
    distribution_ft_value,
)
from .errors import CapExceededError, GraphValidationError, InvariantViolation, NumericalError
from .exact import DEFAULT_CAPS, EXACT_MAX_CUT, EnumerationCaps, OracleHandle
from .graph import Cut, FaultSet, WeightedGraph, cut_value, fault_sets
from .lp import EllipsoidConfig, Halfspace, ellipsoid_feasibility, simplex_solve

CLAMP_TOL = 1e-7


@dataclass(frozen=True)
class DualAssignment:
    """Adversary weights ``X_F`` over the fault sets listed in ``faults``."""

    faults: tuple[FaultSet, ...]
    X: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=float)
        if X.shape != (len(self.faults),):
            raise GraphValidationError(f"expected {len(self.faults)} dual values, got shape {X.shape}")
        object.__setattr__(self, "X", X)

    @classmethod
    def zeros(cls, n: int, k: int) -> "DualAssignment":
        faults = tuple(fault_sets(n, k))
        return cls(faults, np.zeros(len(faults)))

    @classmethod
    def from_vertices(cls, values: Sequence[float]) -> "DualAssignment":
        """Single-fault assignment: ``values[u]`` is the weight of ``{u}``."""
        return cls(tuple((u,) for u in range(len(values))), np.asarray(values, dtype=float))

    @property
    def mass(self) -> float:
        return float(self.X.sum())


def touch_matrix(G: WeightedGraph, faults: Sequence[FaultSet]) -> np.ndarray:
    """``(m, |faults|)`` 0/1 array: edge ``e`` has an endpoint in ``F``."""
    us, vs, _ = G.edge_arrays()
    T = np.zeros((G.m, len(faults)))
    for j, F in enumerate(faults):
        inF = np.zeros(G.n, dtype=bool)
        inF[list(F)] = True
        T[:, j] = inF[us] | inF[vs]
    return T


def _reweight(G: WeightedGraph, T: np.ndarray, X: np.ndarray, tol: float) -> WeightedGraph:
    _, _, ws = G.edge_arrays()
    w = (1.0 - T @ X) * ws.astype(float)
    low = float(w.min(initial=0.0))
    if low < -tol:
        raise InvariantViolation(f"reweighted edge has weight {low} < 0; dual mass exceeds 1")
    return G.with_weights(np.maximum(w, 0.0))


def dual_weights(G: WeightedGraph, X: DualAssignment, k: int, tol: float = CLAMP_TOL) -> WeightedGraph:
    """Each edge scaled by one minus the weight of the fault sets it touches.

    Values within ``tol`` below zero are clamped to zero.
    """
    if any(len(F) != k for F in X.faults):
        raise GraphValidationError(f"dual assignment has fault sets of size other than {k}")
    return _reweight(G, touch_matrix(G, X.faults), X.X, tol)


@dataclass(frozen=True)
class SeparationResult:
    status: str  # "feasible" | "violated-mass" | "violated-cut"
    cut: Optional[Cut] = None
    value: Optional[float] = None

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


class _Separator:
    """Separation oracle bound to one graph, fault budget and max-cut oracle."""

    def __init__(self, G: WeightedGraph, k: int, oracle: OracleHandle, tol: float = CLAMP_TOL):
        if oracle.kind != "max-cut":
            raise GraphValidationError(f"separation needs a max-cut oracle, got kind {oracle.kind!r}")
        self.G, self.k, self.oracle, self.tol = G, k, oracle, tol
        self.faults = tuple(fault_sets(G.n, k))
        self.T = touch_matrix(G, self.faults)
        _, _, ws = G.edge_arrays()
        self.ws = ws.astype(float)

    def __call__(self, X: np.ndarray, Y: float) -> SeparationResult:
        if float(np.sum(X)) > 1.0 + self.tol:
            return SeparationResult("violated-mass")
        return self.evaluate(X, Y)

    def evaluate(self, X: np.ndarray, Y: float, tol: Optional[float] = None) -> SeparationResult:
        """Max-cut step only; the caller has already dealt with the mass."""
        H = _reweight(self.G, self.T, X, self.tol if tol is None else tol)
        S = self.oracle(H)
        value = cut_value(H, S)
        if value > Y:
            return SeparationResult("violated-cut", S, value)
        return SeparationResult("feasible", S, value)

    def cut_row(self, S: Cut) -> tuple[np.ndarray, float]:
        """``(d_S(F))_F`` and ``C_S`` for the halfspace of a violated cut."""
        cross = np.array(
            [((S.bits >> u) & 1) != ((S.bits >> v) & 1) for u, v, _ in self.G.edges], dtype=float
        )
        weighted = cross * self.ws
        return weighted @ self.T, float(weighted.sum())


def separation_oracle(
    G: WeightedGraph, X: DualAssignment, Y: float, k: int, maxcut_oracle: OracleHandle = EXACT_MAX_CUT
) -> SeparationResult:
    """Decide whether ``(X, Y)`` looks dual-feasible to the max-cut oracle.

    Feasible inputs always get ``feasible``; a ``feasible`` answer certifies
    that ``(X, Y / ratio)`` is feasible.
    """
    sep = _Separator(G, k, maxcut_oracle)
    if tuple(X.faults) != sep.faults:
        raise GraphValidationError("dual assignment must list every size-k fault set in lexicographic order")
    return sep(X.X, Y)


@dataclass
class OftcutReport:
    distribution: CutDistribution
    value: float
    lower_bound: float
    upper_bound: float
    primal_value: float
    adversary_best_F: FaultSet
    queried_cuts: list[Cut]
    probes: list[tuple[float, bool]]

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "primal_value": self.primal_value,
            "mass": float(self.distribution.mass),
            "support": [{"cut": S.members(), "p": float(p)} for S, p in self.distribution.support],
            "adversary_best_F": list(self.adversary_best_F),
        }


def solve_oftcut(
    G: WeightedGraph,
    k: int,
    eps_y: float = 1e-4,
    maxcut_oracle: OracleHandle = EXACT_MAX_CUT,
    cfg: EllipsoidConfig = EllipsoidConfig(),
    caps: EnumerationCaps = DEFAULT_CAPS,
) -> OftcutReport:
    """Approximate the best distribution against an oblivious adversary.

    Binary search over ``Y`` in ``[0, W]``; each probe runs the ellipsoid
    method over the fault-set weights, starting from the barycenter of the
    simplex.  A feasible probe also lowers the upper end to the cut value the
    oracle actually saw.  Every cut the oracle returns (across all probes,
    plus the max-cut of ``G`` itself) becomes a column of the reduced LP.
    """
    if eps_y <= 0:
        raise GraphValidationError(f"binary-search precision must be positive, got {eps_y}")
    caps.check_faults(G.n, k, "solve_oftcut")
    if G.m == 0:
        D = CutDistribution.point_mass(Cut(G.n, 0))
        return OftcutReport(D, 0.0, 0.0, 0.0, 0.0, tuple(range(k)), [], [])

    sep = _Separator(G, k, maxcut_oracle)
    d = len(sep.faults)
    alpha = maxcut_oracle.ratio
    queried: dict[int, Cut] = {}

    def remember(S: Cut) -> None:
        queried.setdefault(S.bits, S)

    start = sep(np.zeros(d), math.inf)
    remember(start.cut)
    lo, hi = 0.0, min(float(G.total_weight), start.value)
    probes: list[tuple[float, bool]] = []
    center = np.full(d, 1.0 / (d + 1))
    # raw ellipsoid points may sit up to ``slack`` outside the simplex in
    # every coordinate, so an edge multiplier can dip to about -(d + 1) slack;
    # the reweighted edge then sits that far below zero times its weight
    loose = (d + 2) * cfg.slack * float(max(w for *_, w in G.edges))

    while hi - lo > eps_y:
        Y = 0.5 * (lo + hi)

        def callback(x: np.ndarray, Y=Y) -> Optional[Halfspace]:
            # every check is made on x itself, so a halfspace is only returned
            # when x violates it by more than the ellipsoid's slack
            neg = np.flatnonzero(x < -cfg.slack)
            if neg.size:
                a = np.zeros(d)
                a[neg[0]] = -1.0
                return Halfspace(a, 0.0, "nonnegative")
            if float(x.sum()) > 1.0 + cfg.slack:
                return Halfspace(np.ones(d), 1.0, "mass")
            res = sep.evaluate(x, Y, tol=loose)
            remember(res.cut)
            if res.status == "violated-cut":
                row, C = sep.cut_row(res.cut)
                return Halfspace(-row, Y - C, res.cut)
            return None

        result = ellipsoid_feasibility(d, callback, cfg, center=center)
        probes.append((Y, result.feasible))
        old = (lo, hi)
        if result.feasible:
            # certify on the projection onto the simplex; its max-cut value is
            # a valid upper end whatever slack the acceptance used
            x = np.clip(result.point, 0.0, None)
            if x.sum() > 1.0:
                x = x / x.sum()
            res = sep(x, math.inf)
            remember(res.cut)
            hi = min(hi, res.value)
            lo = min(lo, hi)
        else:
            lo = Y
        if (lo, hi) == old:
            # accepted only within slack and the certified value did not improve
            lo = Y

    cuts = sorted(queried.values(), key=lambda S: S.bits)
    lp, _ = configuration_lp(G, k, cuts)
    sol = simplex_solve(lp)
    if not sol.optimal:
        raise NumericalError(f"reduced configuration LP returned status {sol.status}")
    D = distribution_from_solution(cuts, sol.x[:-1])
    if not D.support:
        D = CutDistribution.point_mass(cuts[0])
    _, worst = distribution_ft_value(G, D, k, witness=True)
    return OftcutReport(
        distribution=D,
        value=hi,
        lower_bound=max(hi - eps_y, 0.0),
        upper_bound=hi / alpha,
        primal_value=float(sol.objective),
        adversary_best_F=worst,
        queried_cuts=cuts,
        probes=probes,
    )


def uniform_distribution_value(G: WeightedGraph, k: int):
    """``(W - Delta_k) / 2``: every edge crosses a uniform random cut with probability 1/2."""
    from .graph import max_fault_degree
    from fractions import Fraction

    return Fraction(G.total_weight - max_fault_degree(G, k), 2)
