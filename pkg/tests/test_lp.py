import math

import numpy as np
import pytest
from scipy.optimize import linprog

from ftcut.distribution import configuration_lp
from ftcut.errors import NumericalError
from ftcut.graph import Cut
from ftcut.lp import (
    EllipsoidConfig,
    Halfspace,
    LinearProgram,
    ellipsoid_feasibility,
    ellipsoid_maximize,
    simplex_solve,
)

from conftest import triangle


def random_packing_lp(rng, nvar=10, nrow=10):
    A = rng.uniform(0, 1, size=(nrow, nvar))
    b = rng.uniform(1, 3, size=nrow)
    c = rng.uniform(-0.5, 1, size=nvar)
    return A, b, c


# ------------------------------------------------------------------ simplex


def test_simplex_unit_box():
    res = simplex_solve(LinearProgram([1, 1], [([1, 0], "<=", 1), ([0, 1], "<=", 1)]))
    assert res.optimal and res.objective == pytest.approx(2)
    assert res.x == pytest.approx([1, 1])


def test_simplex_infeasible():
    assert simplex_solve(LinearProgram([1], [([1], "<=", -1)])).status == "infeasible"


def test_simplex_unbounded():
    assert simplex_solve(LinearProgram([1, 0], [([0, 1], "<=", 1)])).status == "unbounded"


def test_simplex_minimisation_with_mixed_rows_and_free_variable():
    # min x - y  s.t.  x + y == 2, x >= 0.5, y free but y <= 1.25
    lp = LinearProgram(
        [1, -1],
        [([1, 1], "==", 2), ([1, 0], ">=", 0.5)],
        maximize=False,
        lower=[0, None],
        upper=[None, 1.25],
    )
    res = simplex_solve(lp)
    assert res.optimal
    assert res.x == pytest.approx([0.75, 1.25])
    assert res.objective == pytest.approx(-0.5)


def test_simplex_triangle_configuration_lp():
    G = triangle()
    cuts = [Cut(3, b) for b in range(1, 7)]
    lp, faults = configuration_lp(G, 1, cuts)
    res = simplex_solve(lp)
    assert res.objective == pytest.approx(2 / 3, abs=1e-9)
    # the adversary rows carry the dual weights (1/3, 1/3, 1/3)
    assert res.duals[: len(faults)] == pytest.approx([1 / 3] * 3, abs=1e-9)


def test_simplex_rejects_non_finite():
    with pytest.raises(NumericalError):
        simplex_solve(LinearProgram([math.nan], [([1], "<=", 1)]))


def test_linear_program_validates_shapes():
    with pytest.raises(ValueError):
        LinearProgram([1, 1], [([1], "<=", 1)])
    with pytest.raises(ValueError):
        LinearProgram([1], lower=[2], upper=[1])


@pytest.mark.parametrize("seed", range(25))
def test_simplex_matches_scipy_and_certifies_duals(seed):
    rng = np.random.default_rng(seed)
    A, b, c = random_packing_lp(rng, nvar=rng.integers(2, 9), nrow=rng.integers(2, 9))
    res = simplex_solve(LinearProgram(c, [(row, "<=", bi) for row, bi in zip(A, b)]))
    ref = linprog(-c, A_ub=A, b_ub=b, bounds=(0, None), method="highs")
    assert res.optimal and ref.status == 0
    assert res.objective == pytest.approx(-ref.fun, abs=1e-7)
    y, x = res.duals, res.x
    assert (y >= -1e-9).all()
    assert y @ b == pytest.approx(res.objective, abs=1e-7)
    # complementary slackness on rows and on the nonnegativity of x
    assert np.abs(y * (b - A @ x)).max() < 1e-6
    assert np.abs(x * (A.T @ y - c)).max() < 1e-6
    assert (A.T @ y - c >= -1e-7).all()


# ---------------------------------------------------------------- ellipsoid


def interval_oracle(lo, hi):
    def sep(x):
        if x[0] < lo:
            return Halfspace(np.array([-1.0]), -lo)
        if x[0] > hi:
            return Halfspace(np.array([1.0]), hi)
        return None

    return sep


def test_ellipsoid_finds_point_in_interval():
    res = ellipsoid_feasibility(1, interval_oracle(0.0, 1.0), EllipsoidConfig(radius=2.0), center=[1.7])
    assert res.feasible and 0.0 <= res.point[0] <= 1.0


def test_ellipsoid_reports_empty_region():
    def sep(x):
        return Halfspace(np.array([1.0]), -1.0) if x[0] > -1 else Halfspace(np.array([-1.0]), -1.0)

    res = ellipsoid_feasibility(1, sep, EllipsoidConfig(radius=2.0))
    assert not res.feasible and res.point is None
    assert len(res.queries) == res.iterations


def test_ellipsoid_config_validation_and_iteration_cap():
    with pytest.raises(ValueError):
        EllipsoidConfig(radius=1e-9, eps_vol=1e-8)
    cfg = EllipsoidConfig(radius=2.0, eps_vol=1e-8)
    assert cfg.iterations(3) == math.ceil(24 * math.log(2e8))
    assert EllipsoidConfig(max_iter=7).iterations(50) == 7


@pytest.mark.parametrize("seed", range(20))
def test_ellipsoid_finds_every_small_ball(seed):
    # a ball of radius 1e-3 anywhere in the unit box must be found
    rng = np.random.default_rng(seed)
    dim = int(rng.integers(1, 6))
    target, r = rng.uniform(0.2, 0.8, size=dim), 1e-3

    def sep(x):
        gap = x - target
        dist = float(np.linalg.norm(gap))
        if dist <= r:
            return None
        a = gap / dist
        return Halfspace(a, float(a @ target) + r)

    res = ellipsoid_feasibility(dim, sep, EllipsoidConfig(radius=2.0, eps_vol=1e-6))
    assert res.feasible
    assert np.linalg.norm(res.point - target) <= r + 1e-6


def test_ellipsoid_propagates_callback_errors():
    def sep(x):
        raise RuntimeError("oracle down")

    with pytest.raises(RuntimeError):
        ellipsoid_feasibility(2, sep)


def test_ellipsoid_rejects_degenerate_normal():
    with pytest.raises(NumericalError):
        ellipsoid_feasibility(2, lambda x: Halfspace(np.zeros(2), -1.0))


@pytest.mark.parametrize("seed", range(6))
def test_simplex_and_ellipsoid_agree_on_random_lps(seed):
    rng = np.random.default_rng(100 + seed)
    A, b, c = random_packing_lp(rng)
    A = np.vstack([A, np.eye(10)])  # x <= 1 keeps the region inside the ball
    b = np.concatenate([b, np.ones(10)])
    exact = simplex_solve(LinearProgram(c, [(row, "<=", bi) for row, bi in zip(A, b)]))

    def sep(x):
        if (x < 0).any():
            j = int(np.argmin(x))
            a = np.zeros(10)
            a[j] = -1.0
            return Halfspace(a, 0.0)
        viol = A @ x - b
        i = int(np.argmax(viol))
        return Halfspace(A[i], float(b[i])) if viol[i] > 0 else None

    cfg = EllipsoidConfig(radius=2.0, eps_vol=1e-10, slack=1e-9)
    x, val = ellipsoid_maximize(c, sep, cfg, center=np.full(10, 0.5))
    assert x is not None
    assert val == pytest.approx(exact.objective, abs=1e-5)
