"""Optimised informed RRTs: optimize each new solution before it gates sampling.

A benchmark planner runs normally, but whenever it finds a solution whose
raw cost beats its previous raw best, the selected optimizer is applied and
the optimized cost (never worse) becomes the planner's c_best, tightening
the informed sampling region.  Optimized paths live in the result store;
they are never grafted back into the planning tree.

The random-shortcut optimizer has no natural convergence point, so its
per-call time limit comes from a linear regression over node count, trained
online on the measured convergence times of the other optimizers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .bench import ConvergenceRecord
from .clocks import WallClock
from .geometry import path_length
from .optimizers import OPTIMIZER_KINDS, OptimizerBudget, discretize, optimize
from .planners import PlannerParams, run_informed_rrt, run_informed_rrt_star
from .sampling import RngStream

COMPOSABLE_PLANNERS = ("ib-rrt", "ikn-rrt", "i-rrt-star")

# Optimizers whose convergence times train the random-shortcut limit model.
_TRAINER_KINDS = ("prune", "wrap", "gb")


@dataclass
class RsTimeLimitModel:
    """Least-squares line from path node count to optimizer convergence time."""

    default_limit: float = 0.05
    min_limit: float = 1e-3
    samples: list[tuple[int, float]] = field(default_factory=list)
    slope: float = 0.0
    intercept: float = 0.0

    def record(self, node_count: int, elapsed: float) -> None:
        """Add one (node count, convergence seconds) sample and refit."""
        self.samples.append((node_count, elapsed))
        if len(self.samples) < 2:
            return
        n = len(self.samples)
        mean_x = sum(s[0] for s in self.samples) / n
        mean_y = sum(s[1] for s in self.samples) / n
        sxx = sum((s[0] - mean_x) ** 2 for s in self.samples)
        if sxx == 0.0:
            self.slope = 0.0
            self.intercept = mean_y
        else:
            sxy = sum((s[0] - mean_x) * (s[1] - mean_y) for s in self.samples)
            self.slope = sxy / sxx
            self.intercept = mean_y - self.slope * mean_x

    def predict(self, node_count: int) -> float:
        """Time limit for a path of the given node count."""
        if len(self.samples) < 2:
            return self.default_limit
        return max(self.slope * node_count + self.intercept, self.min_limit)


def record_optimizer_run(model: RsTimeLimitModel, node_count: int, elapsed: float) -> None:
    model.record(node_count, elapsed)


@dataclass
class BestSolutionStore:
    """Best (optimized) solution of a composed run plus its convergence trace."""

    best_path: tuple | None = None
    best_cost: float = math.inf
    history: ConvergenceRecord = field(default_factory=ConvergenceRecord)
    tree: object = None
    raw_solution: object = None

    @property
    def found(self) -> bool:
        return self.best_path is not None

    @property
    def first_solution_at(self) -> float | None:
        return self.history.events[0][0] if self.history.events else None


def run_optimised_informed(planner_kind: str, optimizer_kind: str, world,
                           q_start, q_goal, params: PlannerParams,
                           rng: RngStream, clock=None) -> BestSolutionStore:
    """One composed run; returns the store (best_path None if no solution).

    With optimizer_kind "none" this is exactly the bare benchmark planner.
    Start and goal are assumed to be in free space (scenario loading
    validates them); an in-collision start raises from tree initialisation.
    """
    if planner_kind not in COMPOSABLE_PLANNERS:
        raise ValueError(f"unknown composable planner {planner_kind!r}")
    if optimizer_kind not in OPTIMIZER_KINDS:
        raise ValueError(f"unknown optimizer kind {optimizer_kind!r}")
    clock = clock if clock is not None else WallClock()
    run_params = replace(params, k=1) if planner_kind == "ib-rrt" else params
    delta = params.step / 2.0
    model = RsTimeLimitModel()
    store = BestSolutionStore()

    on_solution = None
    if optimizer_kind != "none":

        def on_solution(path, raw_cost, found_at):
            # the raw path is the best-so-far until the optimizer finishes
            if raw_cost < store.best_cost:
                store.best_cost = raw_cost
                store.best_path = path
            opt_path, effective = _optimize_solution(
                optimizer_kind, world, path, params, model, delta, rng, clock)
            if effective < store.best_cost:
                store.best_cost = effective
                store.best_path = opt_path
            return effective

    if planner_kind == "i-rrt-star":
        tree, solution, record = run_informed_rrt_star(
            world, q_start, q_goal, run_params, rng, clock, on_solution=on_solution)
    else:
        tree, solution, record = run_informed_rrt(
            world, q_start, q_goal, run_params, rng, clock, on_solution=on_solution)

    store.history = record
    store.tree = tree
    store.raw_solution = solution
    if optimizer_kind == "none" and solution is not None:
        store.best_path = solution.path
        store.best_cost = solution.cost
    return store


def _optimize_solution(kind, world, path, params, model, delta, rng, clock):
    """Apply one optimizer to a fresh raw solution, capped by the remaining budget."""
    remaining = params.time_budget - clock.now()
    if remaining <= 0.0:
        return path, path_length(path)
    if kind == "rs":
        needs_seeding = len(model.samples) < 2
        budget = OptimizerBudget(
            clock,
            time_limit=model.predict(len(discretize(path, delta))),
            deadline=params.time_budget,
        )
        opt_path = optimize("rs", world, path, budget, rng, delta=delta)
        # seed the limit model after the first call (which used the default
        # limit anyway), so the first optimized path is not delayed by the
        # calibration runs
        if needs_seeding:
            _seed_model(model, world, path, params, delta, clock)
    else:
        budget = OptimizerBudget(clock, deadline=params.time_budget)
        started = clock.now()
        opt_path = optimize(kind, world, path, budget)
        model.record(len(discretize(path, delta)), clock.now() - started)
    return opt_path, path_length(opt_path)


def _seed_model(model, world, path, params, delta, clock):
    """Calibration pass for single-optimizer sessions: time the other optimizers once.

    Runs each on the first raw path purely to train the limit model; their
    outputs are discarded so a random-shortcut session stays pure.
    """
    feature = len(discretize(path, delta))
    for kind in _TRAINER_KINDS:
        if clock.now() >= params.time_budget:
            break
        budget = OptimizerBudget(clock, deadline=params.time_budget)
        started = clock.now()
        optimize(kind, world, path, budget)
        model.record(feature, clock.now() - started)
