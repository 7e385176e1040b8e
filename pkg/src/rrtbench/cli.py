"""Command-line driver: plan a single query, optimize a path file, or benchmark.

Subcommands:
    plan      one planner run; prints a summary line, optional SVG.
    optimize  run one optimizer on a path file (JSON list of [x, y]).
    bench     repeated independent runs; convergence CSV per (run, time).

Exit codes: 0 success, 1 no solution found, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bench import ConvergenceTable, cost_at, default_grid, run_benchmark
from .clocks import MeteredWorld, VirtualClock, WallClock
from .composition import COMPOSABLE_PLANNERS, run_optimised_informed
from .geometry import Circle, Config, path_length
from .maps import BUILTIN_SCENARIOS, builtin
from .optimizers import OPTIMIZER_KINDS, OptimizerBudget, optimize
from .planners import PLANNER_KINDS, PlannerParams, run_rrt, run_rrt_star
from .sampling import RngStream
from .scenarios import Scenario, ScenarioParseError, ScenarioValidationError, load_scenario


def write_csv(table: ConvergenceTable, grid=None) -> str:
    """Convergence table as CSV text: run_id,t,cost with 6-decimal fields.

    Infinite costs are emitted as the literal `inf`; rows are ordered by
    (run_id, t), so identical tables serialize to identical bytes.
    """
    if grid is None:
        grid = table.sample_times
    lines = ["run_id,t,cost"]
    for run_id, record in enumerate(table.runs):
        for t in grid:
            cost = cost_at(record, t)
            cost_text = "inf" if math.isinf(cost) else f"{cost:.6f}"
            lines.append(f"{run_id},{t:.6f},{cost_text}")
    return "\n".join(lines) + "\n"


def render_svg(scenario: Scenario, tree=None, path=None, size: int = 720) -> str:
    """SVG picture of the scenario with tree edges (thin) and a path (thick)."""
    world = scenario.world
    span_x = world.hi.x - world.lo.x
    span_y = world.hi.y - world.lo.y
    scale = size / max(span_x, span_y)
    width = span_x * scale
    height = span_y * scale

    def sx(x: float) -> str:
        return f"{(x - world.lo.x) * scale:.2f}"

    def sy(y: float) -> str:
        return f"{(world.hi.y - y) * scale:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.2f} {height:.2f}">',
        f'<rect x="0" y="0" width="{width:.2f}" height="{height:.2f}" '
        f'fill="white" stroke="black"/>',
    ]
    for obs in world.obstacles:
        if isinstance(obs, Circle):
            out.append(
                f'<circle class="obstacle" cx="{sx(obs.center.x)}" cy="{sy(obs.center.y)}" '
                f'r="{obs.radius * scale:.2f}" fill="#8899aa"/>'
            )
        else:
            points = " ".join(f"{sx(v.x)},{sy(v.y)}" for v in obs.vertices)
            out.append(f'<polygon class="obstacle" points="{points}" fill="#8899aa"/>')
    if tree is not None:
        for parent, child in tree.edges():
            out.append(
                f'<line class="tree-edge" x1="{sx(parent.x)}" y1="{sy(parent.y)}" '
                f'x2="{sx(child.x)}" y2="{sy(child.y)}" '
                f'stroke="#2a6fb0" stroke-width="0.7" stroke-opacity="0.6"/>'
            )
    if path is not None and len(path) >= 2:
        points = " ".join(f"{sx(q[0])},{sy(q[1])}" for q in path)
        out.append(
            f'<polyline class="best-path" points="{points}" fill="none" '
            f'stroke="#d62728" stroke-width="3"/>'
        )
    r_mark = max(3.0, 0.004 * size)
    out.append(
        f'<circle class="start" cx="{sx(scenario.q_start.x)}" cy="{sy(scenario.q_start.y)}" '
        f'r="{r_mark:.1f}" fill="#2ca02c"/>'
    )
    out.append(
        f'<circle class="goal" cx="{sx(scenario.q_goal.x)}" cy="{sy(scenario.q_goal.y)}" '
        f'r="{r_mark:.1f}" fill="#d62728"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _load_scenario_arg(spec_text: str) -> Scenario:
    if spec_text.startswith("builtin:"):
        name = spec_text.split(":", 1)[1]
        if name not in BUILTIN_SCENARIOS:
            raise ScenarioParseError(
                f"unknown built-in scenario {name!r}; choices: {sorted(BUILTIN_SCENARIOS)}"
            )
        return builtin(name)
    with open(spec_text, encoding="utf-8") as handle:
        return load_scenario(handle.read())


def _build_params(args, scenario: Scenario) -> PlannerParams:
    step = args.step if args.step is not None else scenario.world.diameter() / 25.0
    return PlannerParams(
        step=step,
        goal_radius=scenario.goal_radius,
        goal_bias=args.goal_bias,
        k=args.k,
        time_budget=args.time_budget,
    )


def _make_clock_and_world(args, world):
    if args.virtual_clock:
        clock = VirtualClock()
        return clock, MeteredWorld(world, clock)
    return WallClock(), world


def _add_shared_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", required=True,
                        help="scenario JSON file, or builtin:<name> "
                             f"({', '.join(sorted(BUILTIN_SCENARIOS))})")
    parser.add_argument("--time-budget", type=float, default=5.0,
                        help="planning budget in seconds (default 5)")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    parser.add_argument("--step", type=float, default=None,
                        help="max extension length; default world diameter / 25")
    parser.add_argument("--goal-bias", type=float, default=0.05,
                        help="probability of sampling the goal (default 0.05)")
    parser.add_argument("--k", type=int, default=10,
                        help="neighbor count for ikn-rrt (default 10)")
    parser.add_argument("--virtual-clock", action="store_true",
                        help="deterministic virtual time instead of wall time")
    parser.add_argument("--svg-out", default=None, help="write an SVG picture here")


def _cmd_plan(args) -> int:
    scenario = _load_scenario_arg(args.scenario)
    params = _build_params(args, scenario)
    rng = RngStream(args.seed)
    clock, world = _make_clock_and_world(args, scenario.world)
    if args.planner in COMPOSABLE_PLANNERS:
        store = run_optimised_informed(
            args.planner, args.optimizer, world,
            scenario.q_start, scenario.q_goal, params, rng, clock)
        tree = store.tree
        best_path = store.best_path
        best_cost = store.best_cost
        first_t = store.first_solution_at
    else:
        if args.optimizer != "none":
            print(f"planner {args.planner!r} does not take an optimizer", file=sys.stderr)
            return 2
        if args.planner == "rrt":
            tree, solution = run_rrt(world, scenario.q_start, scenario.q_goal,
                                     params, rng, clock)
        else:
            tree, solution = run_rrt_star(world, scenario.q_start, scenario.q_goal,
                                          params, rng, clock)
        best_path = solution.path if solution else None
        best_cost = solution.cost if solution else math.inf
        first_t = solution.found_at if solution else None
    if args.svg_out:
        with open(args.svg_out, "w", encoding="utf-8") as handle:
            handle.write(render_svg(scenario, tree=tree, path=best_path))
    cost_text = "inf" if math.isinf(best_cost) else f"{best_cost:.6f}"
    first_text = "never" if first_t is None else f"{first_t:.6f}"
    print(f"planner={args.planner} optimizer={args.optimizer} "
          f"c_best={cost_text} first_solution_t={first_text}")
    return 0 if best_path is not None else 1


def _cmd_optimize(args) -> int:
    scenario = _load_scenario_arg(args.scenario)
    with open(args.path_in, encoding="utf-8") as handle:
        raw = json.load(handle)
    if not isinstance(raw, list) or len(raw) < 2:
        print("path file must be a JSON list of at least two [x, y] pairs",
              file=sys.stderr)
        return 2
    path = tuple(Config(float(p[0]), float(p[1])) for p in raw)
    if not scenario.world.path_free(path):
        print("input path is not collision-free in this scenario", file=sys.stderr)
        return 2
    clock, world = _make_clock_and_world(args, scenario.world)
    budget = OptimizerBudget(clock, time_limit=args.time_budget)
    rng = RngStream(args.seed)
    step = args.step if args.step is not None else scenario.world.diameter() / 25.0
    result = optimize(args.optimizer, world, path, budget, rng, delta=step / 2.0)
    if args.path_out:
        with open(args.path_out, "w", encoding="utf-8") as handle:
            json.dump([list(q) for q in result], handle)
            handle.write("\n")
    if args.svg_out:
        with open(args.svg_out, "w", encoding="utf-8") as handle:
            handle.write(render_svg(scenario, path=result))
    print(f"optimizer={args.optimizer} cost_in={path_length(path):.6f} "
          f"cost_out={path_length(result):.6f} nodes={len(result)}")
    return 0


def _cmd_bench(args) -> int:
    scenario = _load_scenario_arg(args.scenario)
    params = _build_params(args, scenario)
    grid = default_grid(params.time_budget, args.grid_points)
    table = run_benchmark(
        scenario, args.planner, args.optimizer, params,
        runs=args.runs, master_seed=args.seed,
        virtual_clock=args.virtual_clock, workers=args.workers, grid=grid,
    )
    csv_text = write_csv(table)
    if args.csv_out:
        with open(args.csv_out, "w", encoding="utf-8", newline="") as handle:
            handle.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    finals = [cost_at(record, params.time_budget) for record in table.runs]
    solved = sum(1 for c in finals if math.isfinite(c))
    finite = sorted(c for c in finals if math.isfinite(c))
    median_text = f"{finite[len(finite) // 2]:.6f}" if finite else "inf"
    print(f"planner={args.planner} optimizer={args.optimizer} runs={args.runs} "
          f"solved={solved} median_final_cost={median_text}", file=sys.stderr)
    return 0 if solved > 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rrtbench",
        description="2D sampling-based path planning and convergence benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="single planner run")
    _add_shared_flags(plan)
    plan.add_argument("--planner", choices=PLANNER_KINDS, default="ib-rrt")
    plan.add_argument("--optimizer", choices=OPTIMIZER_KINDS, default="none")

    opt = sub.add_parser("optimize", help="standalone optimizer on a path file")
    _add_shared_flags(opt)
    opt.add_argument("--optimizer", choices=[k for k in OPTIMIZER_KINDS if k != "none"],
                     required=True)
    opt.add_argument("--path-in", required=True, help="JSON list of [x, y] pairs")
    opt.add_argument("--path-out", default=None, help="write the optimized path here")

    bench = sub.add_parser("bench", help="repeated runs, convergence CSV")
    _add_shared_flags(bench)
    bench.add_argument("--planner", choices=PLANNER_KINDS, default="ib-rrt")
    bench.add_argument("--optimizer", choices=OPTIMIZER_KINDS, default="none")
    bench.add_argument("--runs", type=int, default=50)
    bench.add_argument("--csv-out", default=None, help="CSV output path (default stdout)")
    bench.add_argument("--grid-points", type=int, default=50)
    bench.add_argument("--workers", type=int, default=None,
                       help="process pool size (default: CPU count)")

    args = parser.parse_args(argv)
    try:
        return {"plan": _cmd_plan, "optimize": _cmd_optimize, "bench": _cmd_bench}[args.command](args)
    except (ScenarioParseError, ScenarioValidationError) as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
