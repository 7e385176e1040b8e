"""2D sampling-based path planning, path optimization, and benchmarking."""

from .bench import ConvergenceRecord, ConvergenceTable, cost_at, percentile_curves, run_benchmark
from .clocks import MeteredWorld, VirtualClock, WallClock
from .composition import BestSolutionStore, RsTimeLimitModel, run_optimised_informed
from .geometry import Circle, Config, ConvexPolygon, World, dist, path_length
from .optimizers import (
    GBParams,
    OptimizerBudget,
    gb_optimize,
    optimize,
    prune_path,
    random_shortcut,
    wrap_path,
)
from .planners import (
    PlannerParams,
    Solution,
    run_informed_rrt,
    run_informed_rrt_star,
    run_rrt,
    run_rrt_star,
)
from .sampling import InformedRegion, RngStream, informed_sample, uniform_sample
from .scenarios import Scenario, load_scenario, write_scenario
from .tree import Tree

__all__ = [
    "BestSolutionStore",
    "Circle",
    "Config",
    "ConvergenceRecord",
    "ConvergenceTable",
    "ConvexPolygon",
    "GBParams",
    "InformedRegion",
    "MeteredWorld",
    "OptimizerBudget",
    "PlannerParams",
    "RngStream",
    "RsTimeLimitModel",
    "Scenario",
    "Solution",
    "Tree",
    "VirtualClock",
    "WallClock",
    "World",
    "cost_at",
    "dist",
    "gb_optimize",
    "informed_sample",
    "load_scenario",
    "optimize",
    "path_length",
    "percentile_curves",
    "prune_path",
    "random_shortcut",
    "run_benchmark",
    "run_informed_rrt",
    "run_informed_rrt_star",
    "run_optimised_informed",
    "run_rrt",
    "run_rrt_star",
    "uniform_sample",
    "wrap_path",
    "write_scenario",
]
