"""Dense LP machinery: a two-phase tableau simplex and a central-cut ellipsoid.

Both are desk-scale tools.  The simplex uses Bland's rule throughout, so it
cannot cycle; the ellipsoid works against a separation callback and keeps a
log of every violated halfspace it was handed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import NumericalError

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7

LE, EQ, GE = "<=", "==", ">="


@dataclass
class LinearProgram:
    """``max`` (or ``min``) ``c.x`` subject to rows ``a.x (<=|==|>=) b``.

    ``lower[j] = None`` means unbounded below, ``upper[j] = None`` unbounded
    above.  Defaults: ``x >= 0``.
    """

    objective: Sequence[float]
    rows: list[tuple[Sequence[float], str, float]] = field(default_factory=list)
    maximize: bool = True
    lower: Optional[Sequence[Optional[float]]] = None
    upper: Optional[Sequence[Optional[float]]] = None

    def __post_init__(self) -> None:
        nvar = len(self.objective)
        if self.lower is None:
            self.lower = [0.0] * nvar
        if self.upper is None:
            self.upper = [None] * nvar
        if len(self.lower) != nvar or len(self.upper) != nvar:
            raise ValueError("bounds must have one entry per variable")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"variable {j}: lower bound {lo} > upper bound {hi}")
        for i, (coeffs, sense, _) in enumerate(self.rows):
            if len(coeffs) != nvar:
                raise ValueError(f"row {i} has {len(coeffs)} coefficients, expected {nvar}")
            if sense not in (LE, EQ, GE):
                raise ValueError(f"row {i}: unknown sense {sense!r}")

    @property
    def num_vars(self) -> int:
        return len(self.objective)

    def add_row(self, coeffs: Sequence[float], sense: str, rhs: float) -> None:
        self.rows.append((coeffs, sense, rhs))


@dataclass
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    x: Optional[np.ndarray] = None
    objective: Optional[float] = None
    duals: Optional[np.ndarray] = None
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class _Tableau:
    """Tableau for ``min c.x, A x = b, x >= 0`` with ``b >= 0``."""

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: list[int]):
        m, n = A.shape
        self.T = np.zeros((m + 1, n + 1))
        self.T[:m, :n] = A
        self.T[:m, n] = b
        self.basis = list(basis)
        self.pivots = 0

    def set_objective(self, c: np.ndarray) -> None:
        m = len(self.basis)
        n = self.T.shape[1] - 1
        self.T[m, :] = 0.0
        self.T[m, :n] = c
        for i, j in enumerate(self.basis):
            if self.T[m, j] != 0.0:
                self.T[m, :] -= self.T[m, j] * self.T[i, :]

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        T[r, :] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r, :])
        T[:, c] = 0.0
        T[r, c] = 1.0
        self.basis[r] = c
        self.pivots += 1

    def run(self, allowed: np.ndarray, max_pivots: int) -> str:
        """Bland's rule until optimal or unbounded."""
        T = self.T
        m = len(self.basis)
        while True:
            reduced = T[m, :-1]
            candidates = np.flatnonzero((reduced < -PIVOT_TOL) & allowed)
            if candidates.size == 0:
                return "optimal"
            c = int(candidates[0])
            col = T[:m, c]
            pos = np.flatnonzero(col > PIVOT_TOL)
            if pos.size == 0:
                return "unbounded"
            ratios = T[pos, -1] / col[pos]
            best = ratios.min()
            ties = pos[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.pivot(r, c)
            if self.pivots > max_pivots:
                raise NumericalError(f"simplex exceeded {max_pivots} pivots")
            if not np.isfinite(T[:, -1]).all():
                raise NumericalError("simplex tableau lost finiteness")


def simplex_solve(lp: LinearProgram, max_pivots: int = 200_000) -> LPResult:
    """Solve ``lp`` by the two-phase tableau method with Bland's rule.

    ``duals`` holds one multiplier per original row, signed so that for a
    maximisation with ``<=`` rows they are nonnegative and
    ``duals @ b == objective`` (bounds other than ``x >= 0`` aside).
    """
    nvar = lp.num_vars
    c = np.asarray(lp.objective, dtype=float)
    A_rows = np.array([r[0] for r in lp.rows], dtype=float).reshape(len(lp.rows), nvar)
    b_rows = np.array([r[2] for r in lp.rows], dtype=float)
    senses = [r[1] for r in lp.rows]
    if not (np.isfinite(c).all() and np.isfinite(A_rows).all() and np.isfinite(b_rows).all()):
        raise NumericalError("LP has non-finite coefficients")
    sign_obj = -1.0 if lp.maximize else 1.0

    # --- variable substitution to x' >= 0
    cols = []  # (original j, multiplier) per standard column
    shift = np.zeros(nvar)
    extra_rows = []  # upper-bound rows in x' space: (col index, bound)
    for j in range(nvar):
        lo, hi = lp.lower[j], lp.upper[j]
        if lo is not None:
            shift[j] = lo
            cols.append((j, 1.0))
            if hi is not None:
                extra_rows.append((len(cols) - 1, hi - lo))
        elif hi is not None:
            shift[j] = hi
            cols.append((j, -1.0))
        else:
            cols.append((j, 1.0))
            cols.append((j, -1.0))
    nstd = len(cols)
    M = np.zeros((nvar, nstd))
    for k, (j, s) in enumerate(cols):
        M[j, k] = s
    A = A_rows @ M
    b = b_rows - A_rows @ shift
    c_std = sign_obj * (c @ M)

    nrow_orig = len(lp.rows)
    if extra_rows:
        A_ub = np.zeros((len(extra_rows), nstd))
        for i, (k, bound) in enumerate(extra_rows):
            A_ub[i, k] = 1.0
        A = np.vstack([A, A_ub])
        b = np.concatenate([b, [bd for _, bd in extra_rows]])
        senses = senses + [LE] * len(extra_rows)
    nrow = A.shape[0]

    # --- slacks, sign normalisation
    nslack = sum(1 for s in senses if s != EQ)
    A_full = np.zeros((nrow, nstd + nslack))
    A_full[:, :nstd] = A
    row_sign = np.ones(nrow)
    slack_of_row: dict[int, int] = {}
    k = nstd
    for i, s in enumerate(senses):
        if s == LE:
            A_full[i, k] = 1.0
        elif s == GE:
            A_full[i, k] = -1.0
        if s != EQ:
            slack_of_row[i] = k
            k += 1
    b_full = b.copy()
    for i in range(nrow):
        if b_full[i] < 0:
            A_full[i, :] *= -1
            b_full[i] *= -1
            row_sign[i] = -1.0
    c_full = np.concatenate([c_std, np.zeros(nslack)])
    ntot = nstd + nslack

    # --- phase 1 with artificials only where no slack can start basic
    basis = []
    art_rows = []
    for i in range(nrow):
        j = slack_of_row.get(i)
        if j is not None and A_full[i, j] > 0:
            basis.append(j)
        else:
            basis.append(-1)
            art_rows.append(i)
    nart = len(art_rows)
    A_ph = np.zeros((nrow, ntot + nart))
    A_ph[:, :ntot] = A_full
    for a, i in enumerate(art_rows):
        A_ph[i, ntot + a] = 1.0
        basis[i] = ntot + a
    tab = _Tableau(A_ph, b_full, basis)
    scale = max(1.0, float(np.abs(b_full).max(initial=0.0)))
    if nart:
        c_ph = np.zeros(ntot + nart)
        c_ph[ntot:] = 1.0
        tab.set_objective(c_ph)
        tab.run(np.ones(ntot + nart, dtype=bool), max_pivots)
        if -tab.T[-1, -1] > FEAS_TOL * scale:
            return LPResult("infeasible", iterations=tab.pivots)
        # drive remaining artificials out of the basis
        keep_rows = []
        for i in range(nrow):
            if tab.basis[i] >= ntot:
                row = tab.T[i, :ntot]
                nz = np.flatnonzero(np.abs(row) > PIVOT_TOL)
                if nz.size:
                    tab.pivot(i, int(nz[0]))
                    keep_rows.append(i)
            else:
                keep_rows.append(i)
        T = tab.T
        new_T = np.zeros((len(keep_rows) + 1, ntot + 1))
        new_T[:-1, :ntot] = T[keep_rows, :ntot]
        new_T[:-1, -1] = T[keep_rows, -1]
        tab.T = new_T
        tab.basis = [tab.basis[i] for i in keep_rows]
        rows_kept = keep_rows
    else:
        rows_kept = list(range(nrow))

    tab.set_objective(c_full)
    status = tab.run(np.ones(ntot, dtype=bool), max_pivots)
    if status == "unbounded":
        return LPResult("unbounded", iterations=tab.pivots)

    x_full = np.zeros(ntot)
    for i, j in enumerate(tab.basis):
        x_full[j] = tab.T[i, -1]
    x_std = x_full[:nstd]
    x = M @ x_std + shift
    obj = float(c @ x)

    # duals of the min-form equality system: y = c_B B^{-1}
    B = A_full[rows_kept][:, tab.basis]
    cB = c_full[tab.basis]
    try:
        y_kept = np.linalg.solve(B.T, cB)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("singular final basis") from exc
    y = np.zeros(nrow)
    y[rows_kept] = y_kept
    y *= row_sign
    # min-form multipliers; a maximisation was negated on the way in
    duals = -y[:nrow_orig] if lp.maximize else y[:nrow_orig]
    return LPResult("optimal", x=x, objective=obj, duals=duals, iterations=tab.pivots)


# ------------------------------------------------------------------ ellipsoid


class Halfspace(NamedTuple):
    """Constraint ``a . x <= b``; ``tag`` carries caller data (e.g. a cut)."""

    a: np.ndarray
    b: float
    tag: Any = None


Separation = Callable[[np.ndarray], Optional[Halfspace]]


@dataclass(frozen=True)
class EllipsoidConfig:
    radius: float = 1.0
    eps_vol: float = 1e-8
    max_iter: Optional[int] = None
    slack: float = 1e-7

    def __post_init__(self) -> None:
        if not self.radius > self.eps_vol > 0:
            raise ValueError(f"need radius > eps_vol > 0, got {self.radius}, {self.eps_vol}")

    def iterations(self, dim: int) -> int:
        if self.max_iter is not None:
            return self.max_iter
        return math.ceil(2 * dim * (dim + 1) * math.log(self.radius / self.eps_vol))


@dataclass
class EllipsoidResult:
    feasible: bool
    point: Optional[np.ndarray]
    queries: list[Halfspace]
    iterations: int


class _Ellipsoid:
    """Ellipsoid ``{x : (x - c)' (B B')^-1 (x - c) <= 1}`` kept in factored form.

    Updating the factor ``B`` instead of ``P = B B'`` keeps the shape matrix
    positive semidefinite regardless of round-off.
    """

    def __init__(self, center: np.ndarray, radius: float):
        self.x = center
        self.B = np.eye(center.size) * radius

    def width(self, a: np.ndarray) -> tuple[np.ndarray, float]:
        """``(B' a, sqrt(a' P a))``: the support half-width along ``a``."""
        Ba = self.B.T @ a
        s = float(np.linalg.norm(Ba))
        if not math.isfinite(s):
            raise NumericalError(f"ellipsoid matrix is no longer finite (|B'a| = {s})")
        return Ba, s

    def cut(self, Ba: np.ndarray, s: float) -> None:
        """Central cut keeping the half ``a . (y - x) <= 0``."""
        d = self.x.size
        p = Ba / s
        Bp = self.B @ p
        self.x = self.x - Bp / (d + 1)
        if d == 1:
            self.B = self.B / 2.0
        else:
            shrink = math.sqrt((d - 1.0) / (d + 1.0)) - 1.0
            self.B = (d / math.sqrt(d * d - 1.0)) * (self.B + shrink * np.outer(Bp, p))


def _normal(h_a, dim: int) -> np.ndarray:
    a = np.asarray(h_a, dtype=float)
    norm = float(np.linalg.norm(a))
    if a.shape != (dim,) or not (norm > 0.0 and math.isfinite(norm)):
        raise NumericalError(f"separation returned a degenerate normal vector (|a| = {norm})")
    return a


def ellipsoid_feasibility(
    dim: int,
    separation: Separation,
    cfg: EllipsoidConfig = EllipsoidConfig(),
    center: Optional[Sequence[float]] = None,
) -> EllipsoidResult:
    """Search the ball of radius ``cfg.radius`` around ``center`` for a point
    the callback accepts.

    The callback returns ``None`` for an accepted point or a violated
    :class:`Halfspace`.  A returned halfspace satisfied up to ``cfg.slack``
    counts as acceptance.  The search also stops early, reporting
    infeasibility, once the whole ellipsoid sits strictly on the violated side
    of a returned halfspace.
    """
    x = np.zeros(dim) if center is None else np.array(center, dtype=float)
    if x.shape != (dim,):
        raise ValueError(f"center has shape {x.shape}, expected ({dim},)")
    E = _Ellipsoid(x, cfg.radius)
    log: list[Halfspace] = []
    cap = cfg.iterations(dim)
    for it in range(cap):
        h = separation(E.x)
        if h is None:
            return EllipsoidResult(True, E.x, log, it)
        log.append(h)
        a = _normal(h.a, dim)
        ax = float(a @ E.x)
        if ax <= h.b + cfg.slack:
            return EllipsoidResult(True, E.x, log, it)
        Ba, s = E.width(a)
        # narrower than eps_vol along a: no eps_vol-ball fits, which is the
        # stopping rule behind the iteration bound
        if s <= cfg.eps_vol * float(np.linalg.norm(a)):
            return EllipsoidResult(False, None, log, it + 1)
        if ax - s > h.b + cfg.slack:
            return EllipsoidResult(False, None, log, it + 1)
        E.cut(Ba, s)
    return EllipsoidResult(False, None, log, cap)


def ellipsoid_maximize(
    objective: Sequence[float],
    separation: Separation,
    cfg: EllipsoidConfig = EllipsoidConfig(),
    center: Optional[Sequence[float]] = None,
) -> tuple[Optional[np.ndarray], float]:
    """Sliding-objective ellipsoid: maximise ``objective . x`` over the set
    described by ``separation``.  Returns ``(best point, best value)``; the
    point is ``None`` when no feasible point was met.
    """
    c = np.asarray(objective, dtype=float)
    dim = c.size
    x = np.zeros(dim) if center is None else np.array(center, dtype=float)
    E = _Ellipsoid(x, cfg.radius)
    best_x, best = None, -math.inf
    for _ in range(cfg.iterations(dim)):
        h = separation(E.x)
        if h is not None and float(np.asarray(h.a) @ E.x) > h.b + cfg.slack:
            a = _normal(h.a, dim)
        else:
            val = float(c @ E.x)
            if val > best:
                best, best_x = val, E.x.copy()
            a = -c
        Ba, s = E.width(a)
        if s <= cfg.eps_vol * float(np.linalg.norm(a)):
            break
        E.cut(Ba, s)
    return best_x, best
