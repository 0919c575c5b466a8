"""Fault tolerant max-cut: exact baselines, adaptive and oblivious approximations."""

__version__ = "0.1.0"

from .distribution import CutDistribution, distribution_ft_value
from .errors import (
    CapExceededError,
    FtcutError,
    GraphParseError,
    GraphValidationError,
    InvariantViolation,
    NumericalError,
)
from .exact import (
    EXACT_MAX_CUT,
    EXACT_SMC,
    EXACT_THRESHOLD_SMC,
    STABLE_HALF_MAX_CUT,
    EnumerationCaps,
    OracleHandle,
    exact_aftcut,
    exact_max_cut,
    exact_oftcut_value,
    exact_simultaneous_max_cut,
)
from .graph import (
    Cut,
    WeightedGraph,
    crossing_degree,
    cut_value,
    flip,
    ft_value,
    load_graph,
    masked_graph,
)
from .instances import FamilySpec, generate, star_reduction, uniform_random_cut_ft
from .kfault import aftcut_k_approx, aftcut_k_pipeline, cut_minus_heavy, heavy_vertices, shallow_ft_cut, simultaneous_mc
from .local import local_search_single_fault, stabilize_cut
from .lp import EllipsoidConfig, LinearProgram, ellipsoid_feasibility, simplex_solve
from .oblivious import DualAssignment, dual_weights, separation_oracle, solve_oftcut

import types as _types

__all__ = [
    _name for _name, _value in dict(globals()).items()
    if not _name.startswith("_") and not isinstance(_value, _types.ModuleType)
]
