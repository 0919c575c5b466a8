"""Weighted graphs, cuts and the fault tolerant cut value.

A cut is stored as a Python int used as a bit-vector (bit ``v`` set iff
``v`` is in ``S``).  Fault sets are sorted tuples of vertex ids.

Removing the vertices of ``F`` from the graph never has to be done
explicitly: the cut that survives has value ``C_S - d_S(F)``, where
``d_S(F)`` is the weight of crossing edges touching ``F``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import GraphParseError, GraphValidationError

FaultSet = tuple[int, ...]


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph on vertices ``0..n-1``.

    Edges are normalised to ``u < v``.  Input graphs carry integer weights
    ``>= 1``; graphs built with ``integral=False`` (reweighted duals) may
    carry nonnegative reals.
    """

    n: int
    edges: tuple[tuple[int, int, int | float], ...]
    integral: bool = True
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    degrees: tuple[int | float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise GraphValidationError(f"vertex count must be nonnegative, got {self.n}")
        seen = set()
        normalised = []
        incident: list[list[int]] = [[] for _ in range(self.n)]
        degrees: list[int | float] = [0] * self.n
        for idx, (u, v, w) in enumerate(self.edges):
            if u == v:
                raise GraphValidationError(f"self-loop on vertex {u}")
            if u > v:
                u, v = v, u
            if u < 0 or v >= self.n:
                raise GraphValidationError(f"edge ({u},{v}) has a vertex id outside 0..{self.n - 1}")
            if (u, v) in seen:
                raise GraphValidationError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            if self.integral:
                if int(w) != w or w < 1:
                    raise GraphValidationError(f"edge ({u},{v}) has weight {w}; weights must be integers >= 1")
                w = int(w)
            elif not w >= 0:
                raise GraphValidationError(f"edge ({u},{v}) has negative weight {w}")
            normalised.append((u, v, w))
            incident[u].append(idx)
            incident[v].append(idx)
            degrees[u] += w
            degrees[v] += w
        object.__setattr__(self, "edges", tuple(normalised))
        object.__setattr__(self, "adjacency", tuple(tuple(lst) for lst in incident))
        object.__setattr__(self, "degrees", tuple(degrees))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], integral: bool = True) -> "WeightedGraph":
        """Build from ``(u, v)`` or ``(u, v, w)`` tuples; ``w`` defaults to 1."""
        full = []
        for e in edges:
            if len(e) == 2:
                full.append((int(e[0]), int(e[1]), 1))
            else:
                full.append((int(e[0]), int(e[1]), e[2]))
        return cls(n, tuple(full), integral=integral)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def total_weight(self) -> int | float:
        return sum(w for _, _, w in self.edges)

    @property
    def max_degree(self) -> int | float:
        return max(self.degrees, default=0)

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1 for _, _, w in self.edges)

    def degree(self, v: int) -> int | float:
        return self.degrees[v]

    def neighbors(self, v: int) -> list[int]:
        out = []
        for idx in self.adjacency[v]:
            a, b, _ = self.edges[idx]
            out.append(b if a == v else a)
        return out

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Endpoint and weight arrays, in edge order."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty, np.zeros(0, dtype=np.int64 if self.integral else float)
        us, vs, ws = zip(*self.edges)
        dtype = np.int64 if self.integral else float
        return np.array(us, dtype=np.int64), np.array(vs, dtype=np.int64), np.array(ws, dtype=dtype)

    def with_weights(self, weights: Sequence[float]) -> "WeightedGraph":
        """Same edge structure, new (real, nonnegative) weights."""
        return WeightedGraph(
            self.n,
            tuple((u, v, float(w)) for (u, v, _), w in zip(self.edges, weights)),
            integral=False,
        )


@dataclass(frozen=True)
class Cut:
    """Vertex subset of a graph on ``n`` vertices, as a bit-vector."""

    n: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> self.n:
            raise GraphValidationError(f"cut bits {self.bits:#x} do not fit in {self.n} vertices")

    @classmethod
    def from_members(cls, n: int, members: Iterable[int]) -> "Cut":
        bits = 0
        for v in members:
            if not 0 <= v < n:
                raise GraphValidationError(f"cut member {v} outside 0..{n - 1}")
            bits |= 1 << v
        return cls(n, bits)

    def __contains__(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def members(self) -> list[int]:
        return [v for v in range(self.n) if self.bits >> v & 1]

    def complement(self) -> "Cut":
        return Cut(self.n, ~self.bits & ((1 << self.n) - 1))

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.members())) + "]"


def parse_cut(text: str, n: int) -> Cut:
    """Inverse of ``str(cut)``: ``"[0,2,3]"`` -> Cut."""
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise GraphParseError(f"cut must look like [0,2,3], got {text!r}")
    body = body[1:-1].strip()
    members = [int(tok) for tok in body.split(",")] if body else []
    return Cut.from_members(n, members)


# --------------------------------------------------------------------- I/O


def load_graph(text: str) -> WeightedGraph:
    """Parse the edge-list format.

    ``# comment`` lines and blank lines are skipped.  An optional header
    ``p <n> <m>`` fixes the vertex count; without it ``n`` is one more than
    the largest id seen.  Each edge line is ``u v [w]`` with ``w`` defaulting
    to 1.
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if header is not None or edges:
                raise GraphParseError(f"line {lineno}: header must come first and only once")
            if len(parts) != 3:
                raise GraphParseError(f"line {lineno}: expected 'p <n> <m>', got {line!r}")
            try:
                header = (int(parts[1]), int(parts[2]))
            except ValueError as exc:
                raise GraphParseError(f"line {lineno}: non-integer header field in {line!r}") from exc
            continue
        if len(parts) not in (2, 3):
            raise GraphParseError(f"line {lineno}: expected 'u v [w]', got {line!r}")
        try:
            nums = [int(tok) for tok in parts]
        except ValueError as exc:
            raise GraphParseError(f"line {lineno}: non-integer field in {line!r}") from exc
        u, v = nums[0], nums[1]
        w = nums[2] if len(nums) == 3 else 1
        edges.append((u, v, w))

    if header is not None:
        n, m = header
        if m != len(edges):
            raise GraphValidationError(f"header declares {m} edges but {len(edges)} were given")
    else:
        n = 1 + max((max(u, v) for u, v, _ in edges), default=-1)
    for u, v, _ in edges:
        if u < 0 or v < 0 or u >= n or v >= n:
            raise GraphValidationError(f"edge ({u},{v}) has a vertex id outside 0..{n - 1}")
    return WeightedGraph(n, tuple(edges))


def read_graph(path) -> WeightedGraph:
    with open(path, encoding="utf-8") as fh:
        return load_graph(fh.read())


def dump_graph(G: WeightedGraph) -> str:
    """Serialise ``G``; ``load_graph(dump_graph(G)) == G``."""
    lines = [f"p {G.n} {G.m}"]
    for u, v, w in G.edges:
        lines.append(f"{u} {v} {w}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ cut arithmetic


def _check_cut(G: WeightedGraph, S: Cut) -> None:
    if S.n != G.n:
        raise GraphValidationError(f"cut has length {S.n} but graph has {G.n} vertices")


def make_fault_set(G: WeightedGraph, members: Iterable[int]) -> FaultSet:
    F = tuple(sorted(members))
    if len(set(F)) != len(F):
        raise GraphValidationError(f"fault set {F} has repeated vertices")
    if F and (F[0] < 0 or F[-1] >= G.n):
        raise GraphValidationError(f"fault set {F} has ids outside 0..{G.n - 1}")
    return F


def fault_sets(n: int, k: int) -> list[FaultSet]:
    """All size-``k`` subsets of ``range(n)`` in lexicographic order."""
    return list(itertools.combinations(range(n), k))


def crosses(S: Cut, u: int, v: int) -> bool:
    return (S.bits >> u & 1) != (S.bits >> v & 1)


def cut_value(G: WeightedGraph, S: Cut):
    _check_cut(G, S)
    b = S.bits
    return sum(w for u, v, w in G.edges if (b >> u & 1) != (b >> v & 1))


def crossing_degrees(G: WeightedGraph, S: Cut) -> list:
    """``d_S(v)`` for every vertex."""
    _check_cut(G, S)
    b = S.bits
    d = [0] * G.n
    for u, v, w in G.edges:
        if (b >> u & 1) != (b >> v & 1):
            d[u] += w
            d[v] += w
    return d


def crossing_degree(G: WeightedGraph, S: Cut, F: Iterable[int]):
    """Weight of crossing edges with at least one endpoint in ``F``.

    An edge with both endpoints in ``F`` is counted once.
    """
    _check_cut(G, S)
    Fs = set(make_fault_set(G, F))
    b = S.bits
    return sum(
        w for u, v, w in G.edges if (u in Fs or v in Fs) and (b >> u & 1) != (b >> v & 1)
    )


def fault_degree(G: WeightedGraph, F: Iterable[int]):
    """``d(F)``: total weight of edges touching ``F``."""
    Fs = set(F)
    return sum(w for u, v, w in G.edges if u in Fs or v in Fs)


def max_fault_degree(G: WeightedGraph, k: int):
    """``Delta_k = max_{|F| = k} d(F)``."""
    if k > G.n:
        raise GraphValidationError(f"k={k} exceeds vertex count {G.n}")
    return max((fault_degree(G, F) for F in itertools.combinations(range(G.n), k)), default=0)


def ft_value(G: WeightedGraph, S: Cut, k: int, witness: bool = False):
    """Worst cut value left after an adversary deletes ``k`` vertices.

    Enumerates every size-``k`` fault set.  With ``witness=True`` returns
    ``(value, F)`` where ``F`` is the lexicographically smallest worst set.
    """
    _check_cut(G, S)
    if k < 0 or k > G.n:
        raise GraphValidationError(f"fault budget k={k} must lie in 0..{G.n}")
    C = cut_value(G, S)
    if k == 1:
        d = crossing_degrees(G, S)
        best = max(d, default=0)
        if witness:
            return C - best, (d.index(best),) if G.n else ()
        return C - best
    b = S.bits
    crossing = [(u, v, w) for u, v, w in G.edges if (b >> u & 1) != (b >> v & 1)]
    best_F: FaultSet = tuple(range(k))
    best = None
    for F in itertools.combinations(range(G.n), k):
        Fs = set(F)
        removed = sum(w for u, v, w in crossing if u in Fs or v in Fs)
        if best is None or removed > best:
            best, best_F = removed, F
    best = best or 0
    if witness:
        return C - best, best_F
    return C - best


def flip(S: Cut, v: int) -> Cut:
    """``S (+) v``: move ``v`` to the other side."""
    if not 0 <= v < S.n:
        raise GraphValidationError(f"vertex {v} outside 0..{S.n - 1}")
    return Cut(S.n, S.bits ^ (1 << v))


def delete_vertices(G: WeightedGraph, F: Iterable[int]) -> tuple[WeightedGraph, list[int]]:
    """``G - F`` with surviving vertices relabelled ``0..n-|F|-1``.

    Returns the graph and the list mapping new ids to old ids.
    """
    Fs = set(F)
    keep = [v for v in range(G.n) if v not in Fs]
    new_id = {v: i for i, v in enumerate(keep)}
    edges = tuple(
        (new_id[u], new_id[v], w) for u, v, w in G.edges if u not in Fs and v not in Fs
    )
    return WeightedGraph(len(keep), edges, integral=G.integral), keep


def restrict_cut(S: Cut, keep: Sequence[int]) -> Cut:
    """Project ``S`` onto the vertices in ``keep`` (relabelled in order)."""
    return Cut.from_members(len(keep), [i for i, v in enumerate(keep) if v in S])


def masked_graph(G: WeightedGraph, F: Iterable[int]) -> WeightedGraph:
    """``G_{not F}``: same vertex set, every edge touching ``F`` dropped."""
    Fs = set(F)
    edges = tuple((u, v, w) for u, v, w in G.edges if u not in Fs and v not in Fs)
    return WeightedGraph(G.n, edges, integral=G.integral)


# ---------------------------------------------------------- batch helpers


def crossing_matrix(G: WeightedGraph, masks: np.ndarray) -> np.ndarray:
    """Boolean ``(len(masks), m)`` array: edge ``e`` crosses cut ``masks[i]``."""
    us, vs, _ = G.edge_arrays()
    masks = np.asarray(masks, dtype=np.int64)
    return ((masks[:, None] >> us) & 1) != ((masks[:, None] >> vs) & 1)


def fault_incidence(G: WeightedGraph, faults: Sequence[FaultSet]) -> np.ndarray:
    """``(m, len(faults))`` array with ``w_e`` where edge ``e`` touches ``F``."""
    us, vs, ws = G.edge_arrays()
    T = np.zeros((G.m, len(faults)), dtype=ws.dtype)
    for j, F in enumerate(faults):
        inF = np.zeros(G.n, dtype=bool)
        inF[list(F)] = True
        T[:, j] = np.where(inF[us] | inF[vs], ws, 0)
    return T


def cut_table(G: WeightedGraph, cuts: Sequence[Cut], k: int) -> tuple[np.ndarray, np.ndarray, list[FaultSet]]:
    """Cut values and crossing degrees of every size-``k`` fault set.

    Returns ``(C, D, faults)`` with ``C[s] = C_S`` and ``D[s, j] = d_S(F_j)``.
    """
    faults = fault_sets(G.n, k)
    masks = np.array([S.bits for S in cuts], dtype=np.int64)
    _, _, ws = G.edge_arrays()
    cross = crossing_matrix(G, masks).astype(ws.dtype)
    return cross @ ws, cross @ fault_incidence(G, faults), faults
