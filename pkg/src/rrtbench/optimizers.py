"""Path optimizers: pruning, random shortcut, wrapping, and gradient descent.

Every optimizer is a pure transformation of a collision-free path that never
raises its length, never moves the endpoints, and returns its best result
so far when its budget expires.  Cost is path length throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clocks import ITERATION_COST
from .geometry import Circle, Config, ConvexPolygon, dist, path_length
from .sampling import RngStream

OPTIMIZER_KINDS = ("none", "prune", "rs", "wrap", "gb")


class UnknownKindError(ValueError):
    """Optimizer kind outside OPTIMIZER_KINDS."""


class OptimizerBudget:
    """Interruption deadline for an optimizer run.

    Combines a relative time limit (seconds from construction on the given
    clock) with an optional absolute deadline; whichever is earlier wins.
    A budget with neither is unbounded.
    """

    def __init__(self, clock=None, time_limit: float | None = None,
                 deadline: float | None = None):
        if clock is None and (time_limit is not None or deadline is not None):
            raise ValueError("a bounded budget needs a clock")
        self.clock = clock
        self.time_limit = time_limit
        self.deadline = deadline
        if time_limit is not None:
            candidate = clock.now() + time_limit
            self.deadline = candidate if deadline is None else min(deadline, candidate)

    @classmethod
    def unlimited(cls) -> "OptimizerBudget":
        return cls()

    def expired(self) -> bool:
        return self.deadline is not None and self.clock.now() >= self.deadline


def discretize(path, delta: float):
    """Split every segment into equal pieces no longer than delta.

    Original nodes are kept bit-exact, so total length is preserved up to
    the rounding of the inserted points.
    """
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    out = [Config(*path[0])]
    for i in range(len(path) - 1):
        a = path[i]
        b = path[i + 1]
        pieces = max(1, math.ceil(dist(a, b) / delta))
        for s in range(1, pieces):
            t = s / pieces
            out.append(Config(a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
        out.append(Config(*b))
    return out


def prune_path(world, path, budget: OptimizerBudget | None = None):
    """Remove nodes whose neighbors connect directly with a free shortcut.

    Forward sweeps are repeated to a fixed point (a removal can expose a new
    shortcut earlier in the path), which makes pruning idempotent.
    """
    nodes = [Config(*q) for q in path]
    changed = True
    while changed:
        changed = False
        i = 0
        while i + 2 < len(nodes):
            if budget is not None and budget.expired():
                return tuple(nodes)
            if world.segment_free(nodes[i], nodes[i + 2]):
                del nodes[i + 1]
                changed = True
            else:
                i += 1
    return tuple(nodes)


def random_shortcut(world, path, budget: OptimizerBudget, rng: RngStream, delta: float):
    """Keep replacing random subpaths with chords on a delta-discretized path.

    The resolution-delta discretization is maintained as an invariant:
    accepted chords are split back into pieces no longer than delta, so
    later shortcuts can keep tightening around obstacle corners instead of
    freezing at the surviving node positions.  Shortcut endpoints are drawn
    uniformly among non-consecutive node pairs until the budget expires.
    """
    nodes = discretize(path, delta)
    clock = budget.clock
    while not budget.expired():
        # every attempt costs time even when it ends up checking nothing,
        # or a straightened path would freeze a virtual clock
        if clock is not None:
            clock.advance(ITERATION_COST)
        n = len(nodes)
        if n < 3:
            break
        i = rng.integer(0, n - 2)
        j = rng.integer(i + 2, n)
        direct = dist(nodes[i], nodes[j])
        detour = 0.0
        for k in range(i, j):
            detour += dist(nodes[k], nodes[k + 1])
        if direct < detour - 1e-12 and world.segment_free(nodes[i], nodes[j]):
            nodes[i + 1:j] = _split_segment(nodes[i], nodes[j], delta)
    return tuple(nodes)


def _split_segment(a: Config, b: Config, delta: float) -> list[Config]:
    """Interior points dividing ab into equal pieces no longer than delta."""
    pieces = max(1, math.ceil(dist(a, b) / delta))
    return [
        Config(a.x + (s / pieces) * (b.x - a.x), a.y + (s / pieces) * (b.y - a.y))
        for s in range(1, pieces)
    ]


def wrap_path(world, path, budget: OptimizerBudget,
              collision_margin: float = 1e-6):
    """Prune redundant nodes; pull the others toward obstacle contact.

    Non-redundant nodes are moved along the line toward their projection on
    the chord between their neighbors (binary search) until the two incident
    segments first touch an obstacle, within collision_margin.  Moving
    toward the chord can only shorten the two incident segments.
    """
    nodes = [Config(*q) for q in path]
    i = 0
    while i + 2 < len(nodes):
        if budget.expired():
            break
        a = nodes[i]
        b = nodes[i + 1]
        c = nodes[i + 2]
        if world.segment_free(a, c):
            del nodes[i + 1]
            continue
        p = _project_on_segment(b, a, c)
        reach = dist(b, p)
        if reach <= collision_margin:
            i += 1
            continue
        lo, hi = 0.0, 1.0
        while (hi - lo) * reach > collision_margin:
            mid = 0.5 * (lo + hi)
            bm = Config(b.x + mid * (p.x - b.x), b.y + mid * (p.y - b.y))
            if world.segment_free(a, bm) and world.segment_free(bm, c):
                lo = mid
            else:
                hi = mid
        if lo > 0.0:
            nodes[i + 1] = Config(b.x + lo * (p.x - b.x), b.y + lo * (p.y - b.y))
        i += 1
    return tuple(nodes)


def _project_on_segment(q: Config, a: Config, b: Config) -> Config:
    dx = b.x - a.x
    dy = b.y - a.y
    len2 = dx * dx + dy * dy
    if len2 == 0.0:
        return Config(a.x, a.y)
    t = ((q.x - a.x) * dx + (q.y - a.y) * dy) / len2
    t = min(1.0, max(0.0, t))
    return Config(a.x + t * dx, a.y + t * dy)


# -- gradient-based optimizer ---------------------------------------------


@dataclass
class GBParams:
    """Knobs of the gradient-based optimizer.

    weight is the 2x2 symmetric positive-definite metric of the quadratic
    segment energy; alpha_small is the cautious step fraction used between
    collisions.
    """

    weight: np.ndarray = field(default_factory=lambda: np.eye(2))
    alpha_small: float = 0.1
    max_outer_iterations: int = 100
    convergence_tol: float = 1e-4
    collision_margin: float = 1e-6

    def __post_init__(self):
        w = np.asarray(self.weight, dtype=float)
        if w.shape != (2, 2) or not np.allclose(w, w.T):
            raise ValueError("weight must be a symmetric 2x2 matrix")
        if np.any(np.linalg.eigvalsh(w) <= 0.0):
            raise ValueError("weight must be positive definite")
        self.weight = w
        if not 0.0 < self.alpha_small < 1.0:
            raise ValueError("alpha_small must be in (0, 1)")


def segment_weights(path) -> np.ndarray:
    """Per-segment coefficients that preserve the initial length ratios.

    The quadratic energy below is minimized by collinear nodes with segment
    lengths proportional to 1/coefficient, so coefficients inversely
    proportional to the initial arc-length fractions reproduce the initial
    spacing on the optimized path.  Normalized so that equal spacing gives
    all-ones coefficients.
    """
    m = len(path) - 1
    lengths = np.array([max(dist(path[k], path[k + 1]), 1e-12) for k in range(m)])
    total = lengths.sum()
    return total / (m * lengths)


def path_energy(path, lams, weight) -> float:
    """Weighted quadratic segment energy of the node sequence."""
    nodes = np.asarray(path, dtype=float)
    diffs = nodes[1:] - nodes[:-1]
    return 0.5 * float(np.sum(lams * np.einsum("ki,ij,kj->k", diffs, weight, diffs)))


def path_energy_gradient(path, lams, weight) -> np.ndarray:
    """Gradient of path_energy w.r.t. the interior nodes, shape (n-2, 2)."""
    nodes = np.asarray(path, dtype=float)
    diffs = nodes[1:] - nodes[:-1]
    wd = diffs @ weight.T  # weight symmetric, kept explicit for clarity
    return lams[:-1, None] * wd[:-1] - lams[1:, None] * wd[1:]


def path_energy_hessian(n_nodes: int, lams, weight) -> np.ndarray:
    """Constant block-tridiagonal Hessian over the interior nodes."""
    m = n_nodes - 2
    h = np.zeros((2 * m, 2 * m))
    for j in range(m):
        h[2 * j:2 * j + 2, 2 * j:2 * j + 2] = (lams[j] + lams[j + 1]) * weight
        if j + 1 < m:
            h[2 * j:2 * j + 2, 2 * j + 2:2 * j + 4] = -lams[j + 1] * weight
            h[2 * j + 2:2 * j + 4, 2 * j:2 * j + 2] = -lams[j + 1] * weight
    return h


def _project_null(direction: np.ndarray, jac: np.ndarray) -> np.ndarray:
    """Project a step direction onto the null space of the constraint rows."""
    coeff, *_ = np.linalg.lstsq(jac.T, direction, rcond=None)
    return direction - jac.T @ coeff


def _project_active(direction: np.ndarray, rows: list[np.ndarray]) -> np.ndarray:
    """Project out only the constraint rows the step would violate.

    The separation constraints are one-sided (stay on the obstacle's far
    side), so a step moving a constrained node away from its obstacle needs
    no correction; projecting against every accumulated row would freeze
    such nodes permanently.  Re-checks after each projection because
    removing one violation can introduce another.
    """
    for _ in range(10):
        active = [r for r in rows if float(r @ direction) < 0.0]
        if not active:
            return direction
        direction = _project_null(direction, np.array(active))
    return direction


def _point_penetration(obstacle, q: Config):
    """(depth, boundary point, outward normal) if q is inside; None otherwise."""
    if isinstance(obstacle, Circle):
        dx = q.x - obstacle.center.x
        dy = q.y - obstacle.center.y
        d = math.hypot(dx, dy)
        if d > obstacle.radius:
            return None
        if d == 0.0:
            nx, ny = 1.0, 0.0
        else:
            nx, ny = dx / d, dy / d
        p = Config(obstacle.center.x + nx * obstacle.radius,
                   obstacle.center.y + ny * obstacle.radius)
        return obstacle.radius - d, p, (nx, ny)
    verts = obstacle.vertices
    n = len(verts)
    best = None
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        ex, ey = bx - ax, by - ay
        elen = math.hypot(ex, ey)
        nx, ny = ey / elen, -ex / elen  # outward normal of a CCW edge
        s = nx * (q.x - ax) + ny * (q.y - ay)
        if s > 0.0:
            return None
        if best is None or s > best[0]:
            best = (s, i, nx, ny)
    s, i, nx, ny = best
    ax, ay = verts[i]
    bx, by = verts[(i + 1) % n]
    proj = _project_on_segment(q, Config(ax, ay), Config(bx, by))
    return -s, proj, (nx, ny)


def _segment_penetration(obstacle, a: Config, b: Config):
    """Deepest point of segment ab inside the obstacle, or None."""
    if isinstance(obstacle, Circle):
        closest = _project_on_segment(obstacle.center, a, b)
        d = dist(closest, obstacle.center)
        if d > obstacle.radius:
            return None
        return obstacle.radius - d, closest
    # clip the segment parameter range against the polygon half-planes
    t0, t1 = 0.0, 1.0
    verts = obstacle.vertices
    n = len(verts)
    dx = b.x - a.x
    dy = b.y - a.y
    for i in range(n):
        vx, vy = verts[i]
        wx, wy = verts[(i + 1) % n]
        ex, ey = wx - vx, wy - vy
        nx, ny = ey, -ex  # outward
        num = nx * (a.x - vx) + ny * (a.y - vy)
        den = nx * dx + ny * dy
        if den == 0.0:
            if num > 0.0:
                return None
            continue
        t_cross = -num / den
        if den > 0.0:
            t1 = min(t1, t_cross)
        else:
            t0 = max(t0, t_cross)
        if t0 > t1:
            return None
    tm = 0.5 * (t0 + t1)
    q = Config(a.x + tm * dx, a.y + tm * dy)
    hit = _point_penetration(obstacle, q)
    if hit is None:
        return None
    return hit[0], q


def _collision_constraint_rows(world, nodes, margin: float):
    """Linearized separation constraints for the deepest collision.

    Prefers the deepest-penetrating interior node; when only segments
    collide, the deepest segment point is found and both movable endpoint
    nodes of that segment are constrained to the obstacle's far side.
    Each row acts on one interior node: normal . (q_j - p) >= margin.
    """
    n = len(nodes)
    interior = range(1, n - 1)
    deepest = None
    for j in interior:
        for obs in world.obstacles:
            hit = _point_penetration(obs, nodes[j])
            if hit is not None and (deepest is None or hit[0] > deepest[0]):
                deepest = (hit[0], j, hit[1], hit[2])
    if deepest is not None:
        _, j, p, normal = deepest
        return [_constraint_row(n, j, normal)]
    deepest_seg = None
    for k in range(n - 1):
        for obs in world.obstacles:
            hit = _segment_penetration(obs, nodes[k], nodes[k + 1])
            if hit is not None and (deepest_seg is None or hit[0] > deepest_seg[0]):
                deepest_seg = (hit[0], k, hit[1], obs)
    if deepest_seg is None:
        return []
    _, k, q_deep, obs = deepest_seg
    probe = _point_penetration(obs, q_deep)
    if probe is None:
        return []
    _, _, normal = probe
    rows = []
    for j in (k, k + 1):
        if 1 <= j <= n - 2:
            rows.append(_constraint_row(n, j, normal))
    return rows


def _constraint_row(n_nodes: int, node_index: int, normal) -> np.ndarray:
    row = np.zeros(2 * (n_nodes - 2))
    jj = node_index - 1
    row[2 * jj] = normal[0]
    row[2 * jj + 1] = normal[1]
    return row


def gb_optimize(world, path, params: GBParams | None = None,
                budget: OptimizerBudget | None = None):
    """Second-order descent on the segment energy with collision constraints.

    Takes cautious steps (alpha_small) toward the unconstrained minimum
    until a step would collide; then a linearized separation constraint for
    the deepest collision is appended and one full Newton step is attempted
    in the null space of all accumulated constraints.  A colliding full
    step reverts to cautious stepping.  Returns the best collision-free
    iterate by length (the input path if nothing improves).
    """
    if params is None:
        params = GBParams()
    if budget is None:
        budget = OptimizerBudget.unlimited()
    n = len(path)
    input_path = tuple(Config(*q) for q in path)
    if n < 3 or budget.expired():
        return input_path
    lams = segment_weights(input_path)
    weight = params.weight
    hess = path_energy_hessian(n, lams, weight)
    q_first = input_path[0]
    q_last = input_path[-1]
    x = np.array([c for q in input_path[1:-1] for c in q], dtype=float)
    best_path = input_path
    best_cost = path_length(input_path)
    jac_rows: list[np.ndarray] = []
    small_mode = True
    stalled = 0
    plateau = 0
    for _ in range(params.max_outer_iterations):
        # converged when the achieved length stops moving, not only when
        # the step shrinks: constrained stepping can dither indefinitely
        if budget.expired() or stalled >= 6 or plateau >= 6:
            break
        cost_before = best_cost
        nodes = _rebuild(q_first, q_last, x)
        grad = path_energy_gradient(nodes, lams, weight).reshape(-1)
        direction = -np.linalg.solve(hess, grad)
        if jac_rows:
            direction = _project_active(direction, jac_rows)
        alpha = params.alpha_small if small_mode else 1.0
        if alpha * np.max(np.abs(direction)) < params.convergence_tol:
            break
        x_cand = x + alpha * direction
        _clamp_to_bounds(world, x_cand)
        cand = _rebuild(q_first, q_last, x_cand)
        if world.path_free(cand):
            x = x_cand
            stalled = 0
            cost = path_length(cand)
            if cost < best_cost:
                best_cost = cost
                best_path = cand
            plateau = 0 if cost_before - best_cost >= params.convergence_tol else plateau + 1
            continue
        if not small_mode:
            # colliding full step: revert to cautious stepping
            small_mode = True
            stalled += 1
            plateau += 1
            continue
        # cautious step collided: constrain the deepest collision, salvage
        # whatever fraction of the step is still free, then try a full
        # step toward the minimum of the newly constrained problem
        rows = _collision_constraint_rows(world, cand, params.collision_margin)
        fresh = [r for r in rows if not _is_duplicate_row(r, jac_rows)]
        jac_rows.extend(fresh)
        moved = False
        while alpha > 0.01 * params.alpha_small:
            alpha *= 0.5
            x_try = x + alpha * direction
            _clamp_to_bounds(world, x_try)
            cand = _rebuild(q_first, q_last, x_try)
            if world.path_free(cand):
                x = x_try
                moved = True
                cost = path_length(cand)
                if cost < best_cost:
                    best_cost = cost
                    best_path = cand
                break
        stalled = 0 if (fresh or moved) else stalled + 1
        plateau = 0 if cost_before - best_cost >= params.convergence_tol else plateau + 1
        small_mode = False
    return best_path


def _rebuild(q_first: Config, q_last: Config, x: np.ndarray):
    nodes = [q_first]
    for j in range(len(x) // 2):
        nodes.append(Config(x[2 * j], x[2 * j + 1]))
    nodes.append(q_last)
    return tuple(nodes)


def _clamp_to_bounds(world, x: np.ndarray) -> None:
    np.clip(x[0::2], world.lo.x, world.hi.x, out=x[0::2])
    np.clip(x[1::2], world.lo.y, world.hi.y, out=x[1::2])


def _is_duplicate_row(row: np.ndarray, rows: list[np.ndarray]) -> bool:
    return any(np.allclose(row, r, atol=1e-12) for r in rows)


def optimize(kind: str, world, path, budget: OptimizerBudget, rng: RngStream | None = None,
             *, delta: float | None = None, gb_params: GBParams | None = None,
             collision_margin: float = 1e-6):
    """Dispatch to one optimizer with shared budget semantics.

    An already-expired budget returns the input unchanged for every kind.
    rs requires rng and delta (the discretization resolution).
    """
    if kind not in OPTIMIZER_KINDS:
        raise UnknownKindError(f"unknown optimizer kind {kind!r}")
    path = tuple(Config(*q) for q in path)
    if kind == "none" or budget.expired():
        return path
    if kind == "prune":
        return prune_path(world, path, budget=budget)
    if kind == "rs":
        if rng is None or delta is None:
            raise ValueError("random shortcut needs rng and delta")
        return random_shortcut(world, path, budget, rng, delta)
    if kind == "wrap":
        return wrap_path(world, path, budget, collision_margin=collision_margin)
    return gb_optimize(world, path, params=gb_params, budget=budget)
