"""Built-in scenarios for demos, tests, and the benchmark harness."""

from __future__ import annotations

from .geometry import Circle, Config, ConvexPolygon, World
from .scenarios import Scenario


def empty20() -> Scenario:
    """Obstacle-free 20 m square; the optimum is the straight segment."""
    world = World(Config(0, 0), Config(20, 20))
    return Scenario("empty20", world, Config(2, 2), Config(18, 18), goal_radius=0.5)


def bar() -> Scenario:
    """A single rectangular bar across the direct route."""
    world = World(Config(0, 0), Config(20, 20), [
        ConvexPolygon([(8, 4), (12, 4), (12, 16), (8, 16)]),
    ])
    return Scenario("bar", world, Config(2, 10), Config(18, 10), goal_radius=0.5)


def two_blocks() -> Scenario:
    """Two staggered squares with a diagonal gap between them."""
    world = World(Config(0, 0), Config(20, 20), [
        ConvexPolygon([(5, 2), (9, 2), (9, 11), (5, 11)]),
        ConvexPolygon([(12, 9), (16, 9), (16, 18), (12, 18)]),
    ])
    return Scenario("two_blocks", world, Config(2, 3), Config(18, 17), goal_radius=0.5)


def spread() -> Scenario:
    """Four small convex polygons scattered over the square."""
    world = World(Config(0, 0), Config(20, 20), [
        ConvexPolygon([(4, 5), (8, 3), (7, 8)]),
        ConvexPolygon([(10, 6), (14, 6), (14, 10), (10, 10)]),
        ConvexPolygon([(9, 11), (8, 16), (5, 12)]),
        ConvexPolygon([(13, 13), (16, 11), (18, 14), (15, 17)]),
    ])
    return Scenario("spread", world, Config(1, 1), Config(19, 19), goal_radius=0.5)


def rings() -> Scenario:
    """Circle clutter on a 20 m square."""
    world = World(Config(0, 0), Config(20, 20), [
        Circle(Config(6, 6), 2.0),
        Circle(Config(10, 12), 2.5),
        Circle(Config(14, 5), 2.0),
        Circle(Config(15, 15), 1.5),
        Circle(Config(4, 14), 1.8),
    ])
    return Scenario("rings", world, Config(1, 1), Config(19, 19), goal_radius=0.5)


def cluttered() -> Scenario:
    """Cluttered 100 m map used by the convergence benchmarks.

    Two staggered walls with gaps on opposite sides split the map into
    three bands, so first solutions require real exploration; circle and
    polygon clutter inside the bands spreads path costs between planners.
    """
    world = World(Config(0, 0), Config(100, 100), [
        # two staggered walls whose gaps demand real exploration
        ConvexPolygon([(0, 38), (58, 38), (58, 44), (0, 44)]),
        ConvexPolygon([(66, 38), (100, 38), (100, 44), (66, 44)]),
        ConvexPolygon([(0, 64), (34, 64), (34, 70), (0, 70)]),
        ConvexPolygon([(42, 64), (100, 64), (100, 70), (42, 70)]),
        # blob pairs split each band into parallel passages far apart
        # relative to the step, so every fresh tree draws a route lottery
        # that rewiring cannot cross within the budget
        Circle(Config(32, 18), 8.0),
        Circle(Config(28, 54), 7.0),
        Circle(Config(58, 54), 7.0),
        Circle(Config(64, 84), 8.0),
        # small clutter off the main lanes
        ConvexPolygon([(70, 6), (78, 4), (82, 12), (74, 14)]),
        Circle(Config(9, 30), 4.0),
        ConvexPolygon([(86, 50), (93, 52), (91, 59), (84, 57)]),
        Circle(Config(24, 86), 5.0),
    ])
    return Scenario("cluttered", world, Config(8, 8), Config(92, 92), goal_radius=1.0)


BUILTIN_SCENARIOS = {
    "empty20": empty20,
    "bar": bar,
    "two_blocks": two_blocks,
    "spread": spread,
    "rings": rings,
    "cluttered": cluttered,
}

# Polygon-only maps with at most 4 convex obstacles; the visibility-graph
# shortest path is exact on these, which makes them usable as optimality
# references.
ORACLE_MAP_NAMES = ("bar", "two_blocks", "spread")

# Corpus used to exercise the optimizers on recorded planner paths.
OPTIMIZER_CORPUS_NAMES = ("empty20", "bar", "two_blocks", "rings", "cluttered")


def builtin(name: str) -> Scenario:
    try:
        factory = BUILTIN_SCENARIOS[name]
    except KeyError:
        raise KeyError(
            f"unknown built-in scenario {name!r}; choices: {sorted(BUILTIN_SCENARIOS)}"
        ) from None
    return factory()
