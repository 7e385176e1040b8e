"""Independent reference implementations used only to check the real ones.

Everything here is deliberately brute force and avoids the package's own
geometry/index code paths wherever the oracle exists to validate them.
"""

from __future__ import annotations

import heapq
import math


# -- neighbor queries ------------------------------------------------------


def linear_nearest(points, q):
    """Index of the closest point, ties by lowest index."""
    best = None
    for i, (x, y) in enumerate(points):
        dx = x - q[0]
        dy = y - q[1]
        d2 = dx * dx + dy * dy
        if best is None or (d2, i) < best:
            best = (d2, i)
    return best[1]


def linear_k_nearest(points, q, k):
    """Indices of the min(k, n) closest points, ascending (distance, index)."""
    order = []
    for i, (x, y) in enumerate(points):
        dx = x - q[0]
        dy = y - q[1]
        order.append((dx * dx + dy * dy, i))
    order.sort()
    return [i for _, i in order[:k]]


def linear_near(points, q, radius):
    """Indices within radius of q, ascending (distance, index)."""
    r2 = radius * radius
    order = []
    for i, (x, y) in enumerate(points):
        dx = x - q[0]
        dy = y - q[1]
        d2 = dx * dx + dy * dy
        if d2 <= r2:
            order.append((d2, i))
    order.sort()
    return [i for _, i in order]


# -- tree cost consistency -------------------------------------------------


def root_walk_cost(tree, node_id):
    """Recompute cost-from-root by walking parent links and summing edges."""
    total = 0.0
    walker = node_id
    while tree.parents[walker] is not None:
        parent = tree.parents[walker]
        a = tree.config(walker)
        b = tree.config(parent)
        dx = a[0] - b[0]
        dy = a[1] - b[1]
        total += math.sqrt(dx * dx + dy * dy)
        walker = parent
    return total


# -- collision oracle by dense sampling ------------------------------------


def point_in_circle(q, center, radius):
    dx = q[0] - center[0]
    dy = q[1] - center[1]
    return dx * dx + dy * dy <= radius * radius


def point_in_convex_polygon(q, vertices):
    """Closed convex polygon membership via per-edge half-plane tests."""
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cross = (bx - ax) * (q[1] - ay) - (by - ay) * (q[0] - ax)
        if cross < 0.0:
            return False
    return True


def sampled_segment_free(world, a, b, samples=2000):
    """Segment collision test by dense interior sampling (one-sided oracle).

    True means every probed point is free; a clash with an exact test that
    says "blocked" is only meaningful for crossings wider than the probe
    spacing, which is how the tests use it.
    """
    for i in range(samples + 1):
        t = i / samples
        x = a[0] + t * (b[0] - a[0])
        y = a[1] + t * (b[1] - a[1])
        if x < world.lo.x or x > world.hi.x or y < world.lo.y or y > world.hi.y:
            return False
        for obs in world.obstacles:
            if hasattr(obs, "radius"):
                if point_in_circle((x, y), obs.center, obs.radius):
                    return False
            else:
                if point_in_convex_polygon((x, y), obs.vertices):
                    return False
    return True


# -- point-to-segment distance (independent form) ---------------------------


def point_segment_distance(p, a, b):
    ax, ay = a
    bx, by = b
    px, py = p
    dx = bx - ax
    dy = by - ay
    len2 = dx * dx + dy * dy
    if len2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = max(0.0, min(1.0, ((px - ax) * dx + (py - ay) * dy) / len2))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


# -- visibility-graph shortest path ----------------------------------------


def _strictly_inside(q, vertices, eps=1e-9):
    n = len(vertices)
    for i in range(n):
        ax, ay = vertices[i]
        bx, by = vertices[(i + 1) % n]
        cross = (bx - ax) * (q[1] - ay) - (by - ay) * (q[0] - ax)
        if cross <= eps:
            return False
    return True


def _segment_crosses_interior(a, b, vertices):
    """True iff the open segment ab passes through the open polygon interior.

    The segment parameter range is clipped against every edge half-plane;
    boundary sliding and corner grazing leave a clipped range whose midpoint
    sits on the boundary, which does not count as a crossing.
    """
    t0, t1 = 0.0, 1.0
    dx = b[0] - a[0]
    dy = b[1] - a[1]
    n = len(vertices)
    for i in range(n):
        vx, vy = vertices[i]
        wx, wy = vertices[(i + 1) % n]
        ex, ey = wx - vx, wy - vy
        # inward signed position: positive inside for CCW polygons
        num = ex * (a[1] - vy) - ey * (a[0] - vx)
        den = ex * dy - ey * dx
        if den == 0.0:
            if num < 0.0:
                return False
            continue
        t_cross = -num / den
        if den > 0.0:
            t0 = max(t0, t_cross)
        else:
            t1 = min(t1, t_cross)
        if t0 >= t1:
            return False
    tm = 0.5 * (t0 + t1)
    q = (a[0] + tm * dx, a[1] + tm * dy)
    return _strictly_inside(q, vertices)


def visibility_shortest_path(polygons, start, goal, bounds=None):
    """Length of the shortest path around convex polygon obstacles.

    Brute force: nodes are the start, the goal, and every polygon vertex;
    an edge exists when the straight segment between two nodes crosses no
    polygon interior (touching boundaries is allowed, so paths may hug
    corners).  Dijkstra over the complete candidate edge set.
    """
    nodes = [tuple(start), tuple(goal)]
    for poly in polygons:
        nodes.extend(tuple(v) for v in poly)
    n = len(nodes)
    adjacency = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = nodes[i], nodes[j]
            if bounds is not None:
                (lox, loy), (hix, hiy) = bounds
                if not (lox <= a[0] <= hix and loy <= a[1] <= hiy
                        and lox <= b[0] <= hix and loy <= b[1] <= hiy):
                    continue
            if any(_segment_crosses_interior(a, b, poly) for poly in polygons):
                continue
            w = math.hypot(b[0] - a[0], b[1] - a[1])
            adjacency[i].append((j, w))
            adjacency[j].append((i, w))
    dist = [math.inf] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d, i = heapq.heappop(heap)
        if d > dist[i]:
            continue
        if i == 1:
            return d
        for j, w in adjacency[i]:
            nd = d + w
            if nd < dist[j]:
                dist[j] = nd
                heapq.heappush(heap, (nd, j))
    return math.inf
