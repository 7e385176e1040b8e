"""The benchmark planners: basic RRT, RRT*, informed RRT*, and informed RRT.

All planners share the same primitives (steer, collision-checked extension,
goal attachment) and the same clock/rng injection, so runs are reproducible
and their time accounting is comparable.  The informed RRT comes in two
modes: k=1 extends exactly like the basic RRT (IB), k>1 extends from the
cheapest of the k nearest nodes (IKN); both grow each tree from scratch and
carry the best cost across trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .bench import ConvergenceRecord
from .clocks import ITERATION_COST, WallClock
from .geometry import Config, dist
from .sampling import EmptyRegionError, InformedRegion, RngStream, informed_sample, uniform_sample
from .tree import Tree

PLANNER_KINDS = ("rrt", "rrt-star", "ib-rrt", "ikn-rrt", "i-rrt-star")


class NoParentError(RuntimeError):
    """No candidate parent has a collision-free edge to the new node."""


@dataclass
class PlannerParams:
    """Shared planner knobs.

    step is the maximum extension length per iteration; goal_bias is the
    probability of sampling the goal configuration itself.  k only matters
    for the informed RRT (1 = IB mode, >1 = IKN mode).  rrt_star_gamma
    defaults to twice the world diameter; max_time_per_tree defaults to
    time_budget / 15.
    """

    step: float = 1.0
    goal_radius: float = 0.5
    goal_bias: float = 0.05
    k: int = 10
    rrt_star_gamma: float | None = None
    max_time_per_tree: float | None = None
    time_budget: float = 5.0
    max_iterations: int | None = None

    def __post_init__(self):
        if not self.step > 0.0:
            raise ValueError("step must be positive")
        if self.goal_radius < 0.0:
            raise ValueError("goal_radius must be non-negative")
        if not 0.0 <= self.goal_bias < 1.0:
            raise ValueError("goal_bias must be in [0, 1)")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.rrt_star_gamma is not None and not self.rrt_star_gamma > 0.0:
            raise ValueError("rrt_star_gamma must be positive")
        if self.max_time_per_tree is not None and not self.max_time_per_tree > 0.0:
            raise ValueError("max_time_per_tree must be positive")

    def resolved_gamma(self, world) -> float:
        return self.rrt_star_gamma if self.rrt_star_gamma is not None else 2.0 * world.diameter()

    def resolved_time_per_tree(self) -> float:
        return self.max_time_per_tree if self.max_time_per_tree is not None else self.time_budget / 15.0


@dataclass
class Solution:
    """A solution path with its raw (unoptimized) cost and discovery time."""

    path: tuple[Config, ...]
    cost: float
    found_at: float


def steer(q_from: Config, q_toward: Config, step: float) -> Config:
    """Point at distance min(step, ||q_toward - q_from||) from q_from toward q_toward."""
    dx = q_toward[0] - q_from[0]
    dy = q_toward[1] - q_from[1]
    d = math.sqrt(dx * dx + dy * dy)
    if d <= step:
        return Config(q_toward[0], q_toward[1])
    s = step / d
    return Config(q_from[0] + s * dx, q_from[1] + s * dy)


def new_config(world, q_near: Config, q_samp: Config, step: float) -> Config | None:
    """Steer from q_near toward q_samp; None if the edge collides or is zero-length."""
    if q_samp[0] == q_near[0] and q_samp[1] == q_near[1]:
        return None
    q_new = steer(q_near, q_samp, step)
    if not world.segment_free(q_near, q_new):
        return None
    return q_new


def extend_rrt(tree: Tree, world, q_samp: Config, params: PlannerParams) -> int | None:
    """Basic RRT extension: one node under the nearest neighbor, or nothing."""
    nearest = tree.nearest(q_samp)
    q_new = new_config(world, tree.config(nearest), q_samp, params.step)
    if q_new is None:
        return None
    return tree.insert(nearest, q_new)


def choose_parent(tree: Tree, world, near_ids, nearest_id: int, q_new: Config,
                  known_free: int | None = None) -> int:
    """Cheapest feasible parent for q_new among {nearest_id} and near_ids.

    Candidates are ranked by cost-from-root plus edge length (ties by id);
    the first one with a collision-free edge wins.  known_free marks a
    candidate whose edge was already collision-checked by the caller.
    """
    candidates = set(near_ids)
    candidates.add(nearest_id)
    xs = tree._xs
    ys = tree._ys
    costs = tree.costs
    qx, qy = q_new[0], q_new[1]
    ranked = []
    for i in candidates:
        dx = xs[i] - qx
        dy = ys[i] - qy
        ranked.append((costs[i] + math.sqrt(dx * dx + dy * dy), i))
    ranked.sort()
    for _, i in ranked:
        if i == known_free or world.segment_free(Config(xs[i], ys[i]), q_new):
            return i
    raise NoParentError(f"no collision-free edge to {q_new}")


def rewire(tree: Tree, world, near_ids, new_id: int) -> None:
    """Reparent any neighbor that becomes cheaper when reached via new_id."""
    xs = tree._xs
    ys = tree._ys
    costs = tree.costs
    c_new = costs[new_id]
    qx = xs[new_id]
    qy = ys[new_id]
    q_new = Config(qx, qy)
    for n_id in near_ids:
        if n_id == new_id:
            continue
        gain_bound = costs[n_id] - c_new
        if gain_bound <= 0.0:
            continue
        dx = xs[n_id] - qx
        dy = ys[n_id] - qy
        via = c_new + math.sqrt(dx * dx + dy * dy)
        if via < costs[n_id] and world.segment_free(q_new, Config(xs[n_id], ys[n_id])):
            tree.reparent(n_id, new_id)


def extend_rewire_rrt_star(tree: Tree, world, q_samp: Config, params: PlannerParams,
                           gamma: float) -> int | None:
    """RRT* extension: choose-parent over the near set, then rewire through it."""
    nearest = tree.nearest(q_samp)
    q_near = tree.config(nearest)
    if q_samp[0] == q_near[0] and q_samp[1] == q_near[1]:
        return None
    q_new = steer(q_near, q_samp, params.step)
    if not world.segment_free(q_near, q_new):
        return None
    n = len(tree)
    radius = min(gamma * math.sqrt(math.log(n) / n), params.step) if n > 1 else params.step
    entries = tree.near_entries(q_new, radius)
    parent = _choose_parent_entries(tree, world, entries, nearest, q_new)
    new_id = tree.insert(parent, q_new)
    _rewire_entries(tree, world, entries, new_id)
    return new_id


def _choose_parent_entries(tree: Tree, world, entries, nearest_id: int, q_new: Config) -> int:
    """choose_parent over (d2, id) pairs from near_entries; nearest edge is known free."""
    xs = tree._xs
    ys = tree._ys
    costs = tree.costs
    ranked = []
    seen_nearest = False
    for d2, i in entries:
        if i == nearest_id:
            seen_nearest = True
        ranked.append((costs[i] + math.sqrt(d2), i))
    if not seen_nearest:
        dx = xs[nearest_id] - q_new[0]
        dy = ys[nearest_id] - q_new[1]
        ranked.append((costs[nearest_id] + math.sqrt(dx * dx + dy * dy), nearest_id))
    ranked.sort()
    for _, i in ranked:
        if i == nearest_id or world.segment_free(Config(xs[i], ys[i]), q_new):
            return i
    raise NoParentError(f"no collision-free edge to {q_new}")


def _rewire_entries(tree: Tree, world, entries, new_id: int) -> None:
    """rewire over (d2, id) pairs; d2 prefilters candidates before the sqrt."""
    xs = tree._xs
    ys = tree._ys
    costs = tree.costs
    c_new = costs[new_id]
    qx = xs[new_id]
    qy = ys[new_id]
    q_new = Config(qx, qy)
    for d2, n_id in entries:
        gain_bound = costs[n_id] - c_new
        # conservative prefilter (tiny slack so rounding cannot skip a true improvement)
        if gain_bound <= 0.0 or d2 > gain_bound * gain_bound * 1.000000001:
            continue
        dx = xs[n_id] - qx
        dy = ys[n_id] - qy
        via = c_new + math.sqrt(dx * dx + dy * dy)
        if via < costs[n_id] and world.segment_free(q_new, Config(xs[n_id], ys[n_id])):
            tree.reparent(n_id, new_id)


def extend_informed_rrt(tree: Tree, world, q_samp: Config, params: PlannerParams) -> int | None:
    """Informed RRT extension: try the k nearest nodes, cheapest-first.

    Candidates are ranked by the cost-from-root the new node would get
    (parent cost plus edge length); the first collision-free extension is
    inserted.  With k=1 this is exactly the basic RRT extension.
    """
    near_ids = tree.k_nearest(q_samp, params.k)
    step = params.step
    xs = tree._xs
    ys = tree._ys
    costs = tree.costs
    ranked = []
    for i in near_ids:
        dx = q_samp[0] - xs[i]
        dy = q_samp[1] - ys[i]
        d = math.sqrt(dx * dx + dy * dy)
        if d == 0.0:
            continue
        ranked.append((costs[i] + min(step, d), i))
    ranked.sort()
    for _, i in ranked:
        q_i = Config(xs[i], ys[i])
        q_new = steer(q_i, q_samp, step)
        if world.segment_free(q_i, q_new):
            return tree.insert(i, q_new)
    return None


class _GoalTracker:
    """Goal-connected nodes of one tree and the cheapest root-to-goal cost.

    A node counts as goal-connected when it lies within goal_radius of the
    goal and its closing segment to the exact goal is collision-free; the
    solution cost always includes that closing segment.
    """

    def __init__(self, world, q_goal: Config, goal_radius: float):
        self.world = world
        self.q_goal = q_goal
        self.goal_radius = goal_radius
        self.nodes: list[tuple[int, float]] = []

    def try_attach(self, tree: Tree, node_id: int) -> bool:
        q = tree.config(node_id)
        d = dist(q, self.q_goal)
        if d > self.goal_radius:
            return False
        if d > 0.0 and not self.world.segment_free(q, self.q_goal):
            return False
        self.nodes.append((node_id, d))
        return True

    def current_best(self, tree: Tree) -> tuple[float, int | None]:
        best_cost = math.inf
        best_node = None
        for node_id, closing in self.nodes:
            c = tree.costs[node_id] + closing
            if c < best_cost:
                best_cost = c
                best_node = node_id
        return best_cost, best_node

    def extract_path(self, tree: Tree, node_id: int) -> tuple[Config, ...]:
        path = tree.root_path(node_id)
        if path[-1] != self.q_goal:
            path.append(self.q_goal)
        return tuple(path)


def _run_single_tree(world, q_start, q_goal, params, rng, clock, *, use_rewire: bool,
                     informed: bool, stop_at_first: bool, on_solution=None):
    """Shared main loop for RRT, RRT*, and informed RRT* (one persistent tree)."""
    q_start = Config(*q_start)
    q_goal = Config(*q_goal)
    tree = Tree(world, cell_size=params.step / 2.0, clock=clock)
    tree.initialise(q_start)
    gamma = params.resolved_gamma(world)
    tracker = _GoalTracker(world, q_goal, params.goal_radius)
    region = InformedRegion(q_start, q_goal)
    events: list[tuple[float, float]] = []
    best_raw = math.inf
    best_solution: Solution | None = None
    c_best = math.inf
    iterations = 0
    while True:
        if params.max_iterations is not None and iterations >= params.max_iterations:
            break
        if clock.now() >= params.time_budget:
            break
        clock.advance(ITERATION_COST)
        iterations += 1
        if rng.random() < params.goal_bias:
            q_samp = q_goal
        elif informed:
            region.c_best = c_best
            try:
                q_samp = informed_sample(region, world, rng)
            except EmptyRegionError:
                break
        else:
            q_samp = uniform_sample(world, rng)
        if use_rewire:
            new_id = extend_rewire_rrt_star(tree, world, q_samp, params, gamma)
        else:
            new_id = extend_rrt(tree, world, q_samp, params)
        if new_id is not None:
            tracker.try_attach(tree, new_id)
        if not tracker.nodes:
            continue
        raw_cost, raw_node = tracker.current_best(tree)
        if raw_cost < best_raw:
            best_raw = raw_cost
            found_at = clock.now()
            path = tracker.extract_path(tree, raw_node)
            best_solution = Solution(path, raw_cost, found_at)
            # the raw path is usable from the moment it exists; a later
            # optimized improvement gets its own event at its own time
            if raw_cost < c_best:
                c_best = raw_cost
                events.append((found_at, raw_cost))
            if on_solution is not None:
                effective = on_solution(path, raw_cost, found_at)
                if effective is not None and effective < c_best:
                    c_best = effective
                    events.append((clock.now(), c_best))
            if stop_at_first:
                break
    record = ConvergenceRecord(events=events, budget=params.time_budget)
    return tree, best_solution, record


def run_rrt(world, q_start, q_goal, params: PlannerParams, rng: RngStream, clock=None):
    """Basic RRT: grow until the first solution, the budget, or max_iterations.

    Returns (tree, solution or None).
    """
    clock = clock if clock is not None else WallClock()
    tree, solution, _ = _run_single_tree(
        world, q_start, q_goal, params, rng, clock,
        use_rewire=False, informed=False, stop_at_first=True,
    )
    return tree, solution


def run_rrt_star(world, q_start, q_goal, params: PlannerParams, rng: RngStream,
                 clock=None, on_solution=None):
    """RRT*: anytime choose-parent + rewiring for the whole budget.

    Returns (tree, best solution or None).  on_solution, if given, is called
    with (path, raw_cost, found_at) whenever the best raw cost improves.
    """
    clock = clock if clock is not None else WallClock()
    tree, solution, _ = _run_single_tree(
        world, q_start, q_goal, params, rng, clock,
        use_rewire=True, informed=False, stop_at_first=False, on_solution=on_solution,
    )
    return tree, solution


def run_informed_rrt_star(world, q_start, q_goal, params: PlannerParams, rng: RngStream,
                          clock=None, on_solution=None):
    """Informed RRT*: RRT* whose sampling is restricted by the best cost so far.

    Until the first solution the sampling is globally uniform; afterwards
    samples are drawn from the c_best ellipse.  Returns
    (tree, best solution or None, convergence record).
    """
    clock = clock if clock is not None else WallClock()
    return _run_single_tree(
        world, q_start, q_goal, params, rng, clock,
        use_rewire=True, informed=True, stop_at_first=False, on_solution=on_solution,
    )


def run_informed_rrt(world, q_start, q_goal, params: PlannerParams, rng: RngStream,
                     clock=None, on_solution=None):
    """Informed RRT: repeatedly grow fresh trees, carrying c_best across them.

    Every max_time_per_tree seconds the tree is re-initialised to the root
    and regrown with the current informed region; k=1 is IB-RRT, k>1 is
    IKN-RRT.  Returns (tree with the best solution, best solution or None,
    convergence record).
    """
    clock = clock if clock is not None else WallClock()
    q_start = Config(*q_start)
    q_goal = Config(*q_goal)
    tree = Tree(world, cell_size=params.step / 2.0, clock=clock)
    per_tree = params.resolved_time_per_tree()
    region = InformedRegion(q_start, q_goal)
    events: list[tuple[float, float]] = []
    best_raw = math.inf
    best_solution: Solution | None = None
    best_tree: Tree | None = None
    c_best = math.inf
    iterations = 0
    exhausted = False
    while not exhausted and clock.now() < params.time_budget:
        tree.reinitialise(q_start)
        tracker = _GoalTracker(world, q_goal, params.goal_radius)
        tree_started = clock.now()
        tree_best_raw = math.inf
        improved_here = False
        while clock.now() - tree_started < per_tree and clock.now() < params.time_budget:
            if params.max_iterations is not None and iterations >= params.max_iterations:
                exhausted = True
                break
            clock.advance(ITERATION_COST)
            iterations += 1
            if rng.random() < params.goal_bias:
                q_samp = q_goal
            else:
                region.c_best = c_best
                try:
                    q_samp = informed_sample(region, world, rng)
                except EmptyRegionError:
                    exhausted = True
                    break
            new_id = extend_informed_rrt(tree, world, q_samp, params)
            if new_id is None or not tracker.try_attach(tree, new_id):
                continue
            raw_cost, raw_node = tracker.current_best(tree)
            # every solution of a fresh tree is a new path: report it even
            # when it does not beat the best raw cost of earlier trees, so
            # the min() below (and any optimizer hook) sees all of them
            if raw_cost < tree_best_raw:
                tree_best_raw = raw_cost
                found_at = clock.now()
                path = tracker.extract_path(tree, raw_node)
                if raw_cost < best_raw:
                    best_raw = raw_cost
                    best_solution = Solution(path, raw_cost, found_at)
                    improved_here = True
                if raw_cost < c_best:
                    c_best = raw_cost
                    events.append((found_at, raw_cost))
                if on_solution is not None:
                    effective = on_solution(path, raw_cost, found_at)
                    if effective is not None and effective < c_best:
                        c_best = effective
                        events.append((clock.now(), c_best))
                        improved_here = True
        if improved_here:
            best_tree = tree.copy()
    record = ConvergenceRecord(events=events, budget=params.time_budget)
    return (best_tree if best_tree is not None else tree), best_solution, record
