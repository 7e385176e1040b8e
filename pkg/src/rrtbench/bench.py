"""Repeated independent planner runs and convergence-pattern statistics.

Each run produces a time-stamped trace of the best solution cost; the cost
before the first event is infinite, meaning no path has been found yet.
Runs are independent (own RNG stream derived from the master seed by run
index, own clock) and execute in a process pool; results are ordered by run
index so the output never depends on scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field


@dataclass
class ConvergenceRecord:
    """Best-cost trace of one run: (t, cost) events, strictly improving."""

    events: list[tuple[float, float]] = field(default_factory=list)
    budget: float = 0.0


def cost_at(record: ConvergenceRecord, t: float) -> float:
    """Cost of the last event at or before t; infinite if none."""
    cost = math.inf
    for event_t, event_cost in record.events:
        if event_t > t:
            break
        cost = event_cost
    return cost


@dataclass
class ConvergenceTable:
    """Per-seed convergence records for one (scenario, planner, optimizer)."""

    runs: list[ConvergenceRecord]
    sample_times: tuple[float, ...]
    budget: float


@dataclass
class PercentileCurves:
    """Cost order statistics over time, plus the finite-cost success rate."""

    grid: tuple[float, ...]
    percentiles: tuple[float, ...]
    costs: list[list[float]]  # costs[i][j]: percentile i at grid time j
    min_costs: list[float]
    max_costs: list[float]
    success_rate: list[float]


def default_grid(budget: float, points: int = 50) -> tuple[float, ...]:
    """Evenly spaced sample times over (0, budget]."""
    return tuple(budget * (i + 1) / points for i in range(points))


def percentile_curves(table: ConvergenceTable, percentiles, grid=None) -> PercentileCurves:
    """Requested percentiles plus min/max and success rate on a time grid.

    Costs are sorted with infinities last (nearest-rank percentiles), so a
    percentile is infinite exactly when not enough runs have a solution yet;
    the success rate channel reports the finite fraction separately.
    """
    for p in percentiles:
        if not 0.0 <= p <= 100.0:
            raise ValueError(f"percentile {p} outside [0, 100]")
    if grid is None:
        grid = table.sample_times
    grid = tuple(grid)
    n = len(table.runs)
    if n == 0:
        raise ValueError("table has no runs")
    costs = [[math.inf] * len(grid) for _ in percentiles]
    min_costs = []
    max_costs = []
    success = []
    for j, t in enumerate(grid):
        values = sorted(cost_at(record, t) for record in table.runs)
        for i, p in enumerate(percentiles):
            idx = max(0, math.ceil(p / 100.0 * n) - 1)
            costs[i][j] = values[idx]
        min_costs.append(values[0])
        max_costs.append(values[-1])
        success.append(sum(1 for v in values if math.isfinite(v)) / n)
    return PercentileCurves(
        grid=grid,
        percentiles=tuple(percentiles),
        costs=costs,
        min_costs=min_costs,
        max_costs=max_costs,
        success_rate=success,
    )


def saturation_time(table: ConvergenceTable, grid=None) -> float:
    """First grid time at which every run has a solution; inf if never."""
    if grid is None:
        grid = table.sample_times
    for t in grid:
        if all(math.isfinite(cost_at(record, t)) for record in table.runs):
            return t
    return math.inf


def _execute_run(scenario, planner_kind: str, optimizer_kind: str, params,
                 master_seed: int, run_index: int, virtual_clock: bool) -> ConvergenceRecord:
    """One independent run; returns its convergence record."""
    from .clocks import MeteredWorld, VirtualClock, WallClock
    from .composition import run_optimised_informed
    from .planners import run_rrt, run_rrt_star
    from .sampling import RngStream

    rng = RngStream.for_run(master_seed, run_index)
    clock = VirtualClock() if virtual_clock else WallClock()
    world = MeteredWorld(scenario.world, clock) if virtual_clock else scenario.world
    if planner_kind in ("ib-rrt", "ikn-rrt", "i-rrt-star"):
        store = run_optimised_informed(
            planner_kind, optimizer_kind, world,
            scenario.q_start, scenario.q_goal, params, rng, clock,
        )
        return store.history
    if optimizer_kind != "none":
        raise ValueError(f"planner {planner_kind!r} does not take an optimizer")
    if planner_kind == "rrt":
        _, solution = run_rrt(world, scenario.q_start, scenario.q_goal, params, rng, clock)
        events = [(solution.found_at, solution.cost)] if solution else []
        return ConvergenceRecord(events=events, budget=params.time_budget)
    if planner_kind == "rrt-star":
        events: list[tuple[float, float]] = []

        def on_solution(path, raw_cost, found_at):
            events.append((found_at, raw_cost))
            return None

        run_rrt_star(world, scenario.q_start, scenario.q_goal, params, rng, clock,
                     on_solution=on_solution)
        return ConvergenceRecord(events=events, budget=params.time_budget)
    raise ValueError(f"unknown planner kind {planner_kind!r}")


def _worker(payload):
    scenario, planner_kind, optimizer_kind, params, master_seed, run_index, virtual = payload
    record = _execute_run(scenario, planner_kind, optimizer_kind, params,
                          master_seed, run_index, virtual)
    return run_index, record


def run_benchmark(scenario, planner_kind: str, optimizer_kind: str, params,
                  runs: int, master_seed: int, *, virtual_clock: bool = True,
                  workers: int | None = None, grid=None) -> ConvergenceTable:
    """`runs` independent runs of one planner/optimizer pair on a scenario.

    RNG streams are derived from (master_seed, run index), so with the
    virtual clock the whole table is a pure function of its arguments.
    Records come back ordered by run index regardless of pool scheduling.
    """
    if runs < 1:
        raise ValueError("runs must be at least 1")
    if grid is None:
        grid = default_grid(params.time_budget)
    payloads = [
        (scenario, planner_kind, optimizer_kind, params, master_seed, i, virtual_clock)
        for i in range(runs)
    ]
    if workers is None:
        workers = min(os.cpu_count() or 1, runs)
    records: list[ConvergenceRecord | None] = [None] * runs
    if workers <= 1 or runs == 1:
        for payload in payloads:
            idx, record = _worker(payload)
            records[idx] = record
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for idx, record in pool.map(_worker, payloads, chunksize=max(1, runs // (4 * workers))):
                records[idx] = record
    return ConvergenceTable(runs=records, sample_times=tuple(grid), budget=params.time_budget)
