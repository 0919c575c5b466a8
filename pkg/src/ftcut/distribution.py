"""Distributions over cuts and the configuration LP that optimises them.

The configuration LP has one probability variable per cut, a variable ``Z``
for the expected weight the adversary removes, and one row per fault set::

    max  sum_S P_S C_S - Z
    s.t. sum_S P_S d_S(F) <= Z      for every |F| = k
         sum_S P_S <= 1,  P >= 0

Restricting the column set to a family of cuts gives the reduced primal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import GraphValidationError
from .graph import Cut, FaultSet, WeightedGraph, cut_table, fault_sets
from .lp import LE, LinearProgram

SUPPORT_TOL = 1e-9


@dataclass(frozen=True)
class CutDistribution:
    support: tuple[tuple[Cut, float | Fraction], ...]

    def __post_init__(self) -> None:
        total = 0
        for S, p in self.support:
            if p < 0:
                raise GraphValidationError(f"negative probability {p} on cut {S}")
            total += p
        if total > 1 + 1e-9:
            raise GraphValidationError(f"probabilities sum to {float(total)} > 1")

    @classmethod
    def point_mass(cls, S: Cut) -> "CutDistribution":
        return cls(((S, 1),))

    @classmethod
    def uniform(cls, n: int) -> "CutDistribution":
        """Every one of the ``2^n`` cuts with probability ``2^-n`` (exact)."""
        p = Fraction(1, 1 << n)
        return cls(tuple((Cut(n, b), p) for b in range(1 << n)))

    @property
    def mass(self):
        return sum(p for _, p in self.support)

    def __len__(self) -> int:
        return len(self.support)

    def to_json(self) -> list[dict]:
        return [{"cut": S.members(), "probability": float(p)} for S, p in self.support]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def distribution_ft_value(G: WeightedGraph, D: CutDistribution, k: int, witness: bool = False):
    """``min_F E_{S~D}[C_S - d_S(F)]`` over every size-``k`` fault set.

    Exact when the probabilities are Fractions.  With ``witness=True``
    returns ``(value, F)`` for the lexicographically first minimising ``F``.
    """
    if k < 0 or k > G.n:
        raise GraphValidationError(f"fault budget k={k} must lie in 0..{G.n}")
    cuts = [S for S, _ in D.support]
    probs = [p for _, p in D.support]
    if not cuts:
        return (0, tuple(range(k))) if witness else 0
    C, Dmat, faults = cut_table(G, cuts, k)
    C = C.tolist()
    Dmat = Dmat.tolist()
    expected_C = sum(p * c for p, c in zip(probs, C))
    best, best_F = None, faults[0]
    for j, F in enumerate(faults):
        removed = sum(p * row[j] for p, row in zip(probs, Dmat))
        if best is None or removed > best:
            best, best_F = removed, F
    value = expected_C - best
    return (value, best_F) if witness else value


def configuration_lp(G: WeightedGraph, k: int, cuts: Sequence[Cut]) -> tuple[LinearProgram, list[FaultSet]]:
    """Build the configuration LP restricted to ``cuts``.

    Variables are ``P_S`` in the order of ``cuts`` followed by ``Z``.
    Rows: one per fault set (lexicographic), then the mass row.
    """
    C, Dmat, faults = cut_table(G, cuts, k)
    nc = len(cuts)
    objective = np.concatenate([C.astype(float), [-1.0]])
    lp = LinearProgram(objective, maximize=True, lower=[0.0] * nc + [None])
    for j in range(len(faults)):
        lp.add_row(np.concatenate([Dmat[:, j].astype(float), [-1.0]]), LE, 0.0)
    lp.add_row(np.concatenate([np.ones(nc), [0.0]]), LE, 1.0)
    return lp, faults


def distribution_from_solution(cuts: Iterable[Cut], x: np.ndarray, tol: float = SUPPORT_TOL) -> CutDistribution:
    """Keep the cuts with probability above ``tol``."""
    support = []
    for S, p in zip(cuts, x):
        if p > tol:
            support.append((S, float(p)))
    total = sum(p for _, p in support)
    if total > 1:
        # simplex round-off only; the mass row caps the true total at 1
        support = [(S, p / total) for S, p in support]
    return CutDistribution(tuple(support))


__all__ = [
    "CutDistribution",
    "configuration_lp",
    "distribution_ft_value",
    "distribution_from_solution",
    "fault_sets",
]
