"""Injectable time sources for planners, optimizers, and benchmarks.

Planner loops read elapsed seconds from a clock instead of the wall, so a
run can be made fully deterministic: under a `VirtualClock`, time advances
only through explicit charges.  `MeteredWorld` wraps a world so collision
queries (the dominant cost in every planner and optimizer here) advance the
virtual clock in proportion to the work performed; the per-query charges
below are rough Python-scale costs, and their ratios are what make
virtual-time comparisons between planners meaningful.
"""

from __future__ import annotations

import time

# Virtual cost per metered operation, in seconds.
POINT_CHECK_COST = 4e-5
SEGMENT_CHECK_COST = 2e-4
ITERATION_COST = 4e-5
# Per candidate examined by a tree neighbor query; this is what makes
# rewiring planners pay for their dense neighborhoods, as they do in
# wall-clock runs.
NEIGHBOR_CANDIDATE_COST = 4e-6


class WallClock:
    """Real elapsed time since construction."""

    def __init__(self):
        self._start = time.perf_counter()

    def now(self) -> float:
        return time.perf_counter() - self._start

    def advance(self, seconds: float) -> None:
        """No-op; wall time advances by itself."""


class VirtualClock:
    """Deterministic clock advanced only by explicit charges."""

    def __init__(self):
        self._now = 0.0

    def now(self) -> float:
        return self._now

    def advance(self, seconds: float) -> None:
        self._now += seconds


class MeteredWorld:
    """World proxy that charges collision queries to a virtual clock.

    All planners and optimizers consume time through the same collision
    primitives, so metering here keeps their virtual-time accounting
    comparable without any planner-specific bookkeeping.
    """

    def __init__(self, world, clock):
        self._world = world
        self._clock = clock
        self.lo = world.lo
        self.hi = world.hi
        self.obstacles = world.obstacles

    def diameter(self):
        return self._world.diameter()

    def clamp(self, q):
        return self._world.clamp(q)

    def point_free(self, q):
        self._clock.advance(POINT_CHECK_COST)
        return self._world.point_free(q)

    def segment_free(self, a, b):
        self._clock.advance(SEGMENT_CHECK_COST)
        return self._world.segment_free(a, b)

    def path_free(self, path):
        self._clock.advance(SEGMENT_CHECK_COST * (len(path) - 1))
        return self._world.path_free(path)
