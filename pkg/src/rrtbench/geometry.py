"""2D configuration space: obstacles, collision queries, and path metrics.

The free space is a bounded axis-aligned rectangle minus a set of closed
obstacles (circles and convex polygons).  Obstacle boundaries count as
collision, so every query against an obstacle is a closed-set test.  All
segment tests are exact (no discretization).
"""

from __future__ import annotations

import math
from typing import NamedTuple


class Config(NamedTuple):
    """A point in the planar configuration space, in meters."""

    x: float
    y: float


def dist(a: Config, b: Config) -> float:
    """Euclidean distance between two configurations.

    Kept as sqrt of the squared form (not math.hypot) so every distance in
    the package rounds identically to the squared distances used by the
    spatial index and the rewiring filters.
    """
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    return math.sqrt(dx * dx + dy * dy)


def is_finite(q: Config) -> bool:
    return math.isfinite(q[0]) and math.isfinite(q[1])


class Circle:
    """Closed disk obstacle."""

    __slots__ = ("center", "radius")

    def __init__(self, center: Config, radius: float):
        if not radius > 0.0:
            raise ValueError(f"circle radius must be positive, got {radius}")
        self.center = Config(*center)
        self.radius = float(radius)

    def __repr__(self):
        return f"Circle(center={self.center}, radius={self.radius})"

    def __eq__(self, other):
        return (
            isinstance(other, Circle)
            and self.center == other.center
            and self.radius == other.radius
        )


class ConvexPolygon:
    """Closed convex polygon obstacle with counter-clockwise vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        verts = [Config(*v) for v in vertices]
        if len(verts) < 3:
            raise ValueError(f"polygon needs at least 3 vertices, got {len(verts)}")
        area2 = 0.0
        for i, (x0, y0) in enumerate(verts):
            x1, y1 = verts[(i + 1) % len(verts)]
            area2 += x0 * y1 - x1 * y0
        if not area2 > 0.0:
            raise ValueError("polygon must be counter-clockwise with positive area")
        n = len(verts)
        for i in range(n):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % n]
            cx, cy = verts[(i + 2) % n]
            cross = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
            if cross < 0.0:
                raise ValueError("polygon must be convex (CCW turn at every vertex)")
            if bx == ax and by == ay:
                raise ValueError("polygon has a zero-length edge")
        self.vertices = tuple(verts)

    def __repr__(self):
        return f"ConvexPolygon({list(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, ConvexPolygon) and self.vertices == other.vertices


Obstacle = Circle | ConvexPolygon


class World:
    """Bounded free space with obstacles; answers collision queries.

    Immutable after construction, so instances are safe to share between
    concurrent planner runs.  Per-obstacle data (edge normals, bounding
    boxes) is precomputed once because the collision queries dominate
    planner and optimizer running time.
    """

    def __init__(self, lo: Config, hi: Config, obstacles=()):
        lo = Config(*lo)
        hi = Config(*hi)
        if not (lo.x < hi.x and lo.y < hi.y):
            raise ValueError(f"bounds min must be < max componentwise: {lo} vs {hi}")
        self.lo = lo
        self.hi = hi
        self.obstacles = tuple(obstacles)
        self._circles = []
        self._polys = []
        for obs in self.obstacles:
            if isinstance(obs, Circle):
                cx, cy = obs.center
                self._circles.append((cx, cy, obs.radius, obs.radius * obs.radius))
            elif isinstance(obs, ConvexPolygon):
                self._polys.append(_poly_data(obs.vertices))
            else:
                raise TypeError(f"unsupported obstacle type: {type(obs).__name__}")

    def diameter(self) -> float:
        """Diagonal length of the bounding rectangle."""
        return math.hypot(self.hi.x - self.lo.x, self.hi.y - self.lo.y)

    def clamp(self, q: Config) -> Config:
        """Clamp a configuration into the (closed) bounds rectangle."""
        return Config(
            min(max(q[0], self.lo.x), self.hi.x),
            min(max(q[1], self.lo.y), self.hi.y),
        )

    def point_free(self, q: Config) -> bool:
        """True iff q is inside bounds and strictly outside every obstacle.

        Obstacle boundaries count as collision; the bounds rectangle is
        closed (its edge is still free space).
        """
        x, y = q[0], q[1]
        if x < self.lo.x or x > self.hi.x or y < self.lo.y or y > self.hi.y:
            return False
        for cx, cy, _r, r2 in self._circles:
            dx = x - cx
            dy = y - cy
            if dx * dx + dy * dy <= r2:
                return False
        for poly in self._polys:
            pminx, pminy, pmaxx, pmaxy = poly[1]
            if x < pminx or x > pmaxx or y < pminy or y > pmaxy:
                continue
            if _point_in_poly(poly, x, y):
                return False
        return True

    def segment_free(self, a: Config, b: Config) -> bool:
        """True iff the closed segment ab lies entirely in free space.

        Exact tests: point-to-segment distance against circles, separating
        axes against convex polygons.  Touching an obstacle boundary counts
        as collision.
        """
        ax, ay = a[0], a[1]
        bx, by = b[0], b[1]
        lox, loy, hix, hiy = self.lo.x, self.lo.y, self.hi.x, self.hi.y
        if ax < lox or ax > hix or ay < loy or ay > hiy:
            return False
        if bx < lox or bx > hix or by < loy or by > hiy:
            return False
        dx = bx - ax
        dy = by - ay
        seg_len2 = dx * dx + dy * dy
        for cx, cy, _r, r2 in self._circles:
            # squared distance from circle center to the closed segment
            px = cx - ax
            py = cy - ay
            if seg_len2 > 0.0:
                t = (px * dx + py * dy) / seg_len2
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                ex = px - t * dx
                ey = py - t * dy
            else:
                ex = px
                ey = py
            if ex * ex + ey * ey <= r2:
                return False
        if self._polys:
            sminx, smaxx = (ax, bx) if ax <= bx else (bx, ax)
            sminy, smaxy = (ay, by) if ay <= by else (by, ay)
            for poly in self._polys:
                pminx, pminy, pmaxx, pmaxy = poly[1]
                if smaxx < pminx or sminx > pmaxx or smaxy < pminy or sminy > pmaxy:
                    continue
                if _segment_hits_poly(poly, ax, ay, bx, by, dx, dy):
                    return False
        return True

    def path_free(self, path) -> bool:
        """True iff every consecutive segment of the path passes segment_free."""
        if len(path) < 2:
            raise ValueError("path needs at least 2 nodes")
        for i in range(len(path) - 1):
            if not self.segment_free(path[i], path[i + 1]):
                return False
        return True


def _poly_data(verts):
    """Precompute (vertices, aabb, axes) for separating-axis tests."""
    xs = [v[0] for v in verts]
    ys = [v[1] for v in verts]
    aabb = (min(xs), min(ys), max(xs), max(ys))
    axes = []
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        # outward normal of a CCW edge
        axes.append((y1 - y0, x0 - x1, x0, y0))
    return (tuple(verts), aabb, tuple(axes))


def _point_in_poly(poly, x, y) -> bool:
    """Closed-polygon membership: inside or on the boundary."""
    for nx, ny, vx, vy in poly[2]:
        if nx * (x - vx) + ny * (y - vy) > 0.0:
            return False
    return True


def _segment_hits_poly(poly, ax, ay, bx, by, dx, dy) -> bool:
    """Separating-axis test between a closed segment and a closed convex polygon.

    Candidate axes are the polygon edge normals plus the segment normal.
    Touching (zero gap) counts as a hit.
    """
    verts = poly[0]
    for nx, ny, vx, vy in poly[2]:
        pa = nx * (ax - vx) + ny * (ay - vy)
        pb = nx * (bx - vx) + ny * (by - vy)
        # polygon projects to <= 0 on its own outward edge normals
        if pa > 0.0 and pb > 0.0:
            return False
    # segment normal axis (the segment projects to a single value on it)
    nx = -dy
    ny = dx
    if nx != 0.0 or ny != 0.0:
        s = nx * ax + ny * ay
        lo = hi = None
        for vx, vy in verts:
            p = nx * vx + ny * vy
            if lo is None or p < lo:
                lo = p
            if hi is None or p > hi:
                hi = p
        if hi < s or lo > s:
            return False
    return True


def path_length(path) -> float:
    """Total Euclidean length of a node sequence."""
    if len(path) < 2:
        raise ValueError("path needs at least 2 nodes")
    total = 0.0
    for i in range(len(path) - 1):
        total += dist(path[i], path[i + 1])
    return total
