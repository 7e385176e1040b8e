"""Uniform and informed-subset sampling of the configuration space.

The informed subset for a current best solution cost c_best is the set of
configurations q with ||q - q_start|| + ||q - q_goal|| <= c_best: only those
can lie on a shorter solution.  In the plane this is an ellipse with the
start and goal as foci, and it is sampled directly (uniform in the unit
disk, stretched to the ellipse axes) rather than by rejecting global
samples, so tightening c_best never wastes draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Config, dist

# Candidates falling outside world bounds are redrawn up to this many times,
# then clamped, so a sliver ellipse on the bounds edge cannot livelock.
_MAX_BOUNDS_REJECTS = 10_000

# c_best this close to c_min collapses the ellipse onto the focal segment.
_DEGENERATE_EPS = 1e-9


class EmptyRegionError(ValueError):
    """No configuration can improve the current solution (c_best < c_min)."""


class RngStream:
    """Deterministic random stream; identical seeds yield identical draws."""

    def __init__(self, seed):
        self.seed = seed
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))

    @classmethod
    def for_run(cls, master_seed: int, run_index: int) -> "RngStream":
        """Independent stream for one run of a multi-run session."""
        return cls((master_seed, run_index))

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return float(self._gen.random())

    def integer(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        return int(self._gen.integers(low, high))


@dataclass
class InformedRegion:
    """Ellipse (focus1, focus2, c_best) gating the informed samples.

    c_best is the cost of the best solution found so far (infinite before
    the first one); c_min is the theoretical minimum, the straight-line
    distance between the foci.
    """

    focus1: Config
    focus2: Config
    c_best: float = math.inf
    c_min: float = field(init=False)

    def __post_init__(self):
        self.focus1 = Config(*self.focus1)
        self.focus2 = Config(*self.focus2)
        self.c_min = dist(self.focus1, self.focus2)


def uniform_sample(world, rng: RngStream) -> Config:
    """Configuration uniformly distributed over the world bounds."""
    x = world.lo.x + rng.random() * (world.hi.x - world.lo.x)
    y = world.lo.y + rng.random() * (world.hi.y - world.lo.y)
    return Config(x, y)


def informed_sample(region: InformedRegion, world, rng: RngStream) -> Config:
    """Configuration uniform over the informed ellipse, clipped to bounds.

    With c_best infinite this is exactly uniform_sample (same draws from the
    stream).  Raises EmptyRegionError when c_best < c_min: no configuration
    can improve the solution, so callers should treat the current one as
    final for this query.
    """
    c_best = region.c_best
    if math.isinf(c_best):
        return uniform_sample(world, rng)
    c_min = region.c_min
    if c_best < c_min - _DEGENERATE_EPS:
        raise EmptyRegionError(
            f"c_best={c_best} is below the focal distance c_min={c_min}"
        )
    f1, f2 = region.focus1, region.focus2
    if c_best - c_min <= _DEGENERATE_EPS:
        t = rng.random()
        return Config(f1.x + t * (f2.x - f1.x), f1.y + t * (f2.y - f1.y))

    a = 0.5 * c_best
    b = 0.5 * math.sqrt(c_best * c_best - c_min * c_min)
    cx = 0.5 * (f1.x + f2.x)
    cy = 0.5 * (f1.y + f2.y)
    if c_min > 0.0:
        cos_t = (f2.x - f1.x) / c_min
        sin_t = (f2.y - f1.y) / c_min
    else:
        cos_t, sin_t = 1.0, 0.0

    lox, loy, hix, hiy = world.lo.x, world.lo.y, world.hi.x, world.hi.y
    q = None
    for _ in range(_MAX_BOUNDS_REJECTS):
        r = math.sqrt(rng.random())
        phi = 2.0 * math.pi * rng.random()
        px = a * r * math.cos(phi)
        py = b * r * math.sin(phi)
        x = cx + cos_t * px - sin_t * py
        y = cy + sin_t * px + cos_t * py
        if lox <= x <= hix and loy <= y <= hiy:
            return Config(x, y)
        q = Config(x, y)
    return world.clamp(q)
