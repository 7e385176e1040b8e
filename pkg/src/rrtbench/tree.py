"""Planning tree: node storage, parent links, cost bookkeeping, neighbor queries.

Neighbor queries go through a uniform grid over the world bounds (planner
hot loops are dominated by them); results are exactly those of a linear
scan, including tie-breaking by insertion id.
"""

from __future__ import annotations

import math
from bisect import insort

from .clocks import NEIGHBOR_CANDIDATE_COST
from .geometry import Config, dist


class InvalidStartError(ValueError):
    """Tree root placed outside free space."""


class CycleError(ValueError):
    """Reparenting would create a cycle."""


_MAX_GRID_DIM = 256


class Tree:
    """Rooted tree over configurations with cost-from-root per node.

    Node ids are insertion indices (root is 0).  Costs stay consistent
    under reparenting: the delta is propagated eagerly to all descendants.
    """

    def __init__(self, world, cell_size: float | None = None, clock=None):
        self.world = world
        self._clock = clock
        if cell_size is None:
            cell_size = world.diameter() / 64.0
        span_x = world.hi.x - world.lo.x
        span_y = world.hi.y - world.lo.y
        nx = max(1, min(_MAX_GRID_DIM, math.ceil(span_x / cell_size)))
        ny = max(1, min(_MAX_GRID_DIM, math.ceil(span_y / cell_size)))
        self._nx = nx
        self._ny = ny
        self._cell_w = span_x / nx
        self._cell_h = span_y / ny
        # ring-search bounds assume square-ish cells; use the larger side
        self._cell = max(self._cell_w, self._cell_h)
        self._xs: list[float] = []
        self._ys: list[float] = []
        self.parents: list[int | None] = []
        self.costs: list[float] = []
        self._children: list[list[int]] = []
        self._cells: list[list[int] | None] = [None] * (nx * ny)

    def __len__(self) -> int:
        return len(self._xs)

    def config(self, node_id: int) -> Config:
        return Config(self._xs[node_id], self._ys[node_id])

    def cost(self, node_id: int) -> float:
        return self.costs[node_id]

    def initialise(self, q_start: Config) -> None:
        """Reset the tree to a single root at q_start."""
        if not self.world.point_free(q_start):
            raise InvalidStartError(f"start configuration {q_start} is in collision")
        self._xs = [q_start[0]]
        self._ys = [q_start[1]]
        self.parents = [None]
        self.costs = [0.0]
        self._children = [[]]
        self._cells = [None] * (self._nx * self._ny)
        self._cells[self._cell_index(q_start[0], q_start[1])] = [0]

    # Alg-style alias: growing a fresh tree reuses the same reset.
    reinitialise = initialise

    def insert(self, parent_id: int, q: Config) -> int:
        """Add q under parent_id; returns the new node id."""
        px = self._xs[parent_id]
        py = self._ys[parent_id]
        node_id = len(self._xs)
        self._xs.append(q[0])
        self._ys.append(q[1])
        self.parents.append(parent_id)
        dx = q[0] - px
        dy = q[1] - py
        self.costs.append(self.costs[parent_id] + math.sqrt(dx * dx + dy * dy))
        self._children.append([])
        self._children[parent_id].append(node_id)
        idx = self._cell_index(q[0], q[1])
        cell = self._cells[idx]
        if cell is None:
            self._cells[idx] = [node_id]
        else:
            cell.append(node_id)
        return node_id

    def reparent(self, node_id: int, new_parent: int) -> None:
        """Attach node_id under new_parent, shifting all descendant costs."""
        walker = new_parent
        while walker is not None:
            if walker == node_id:
                raise CycleError(
                    f"node {new_parent} is a descendant of {node_id} (or the node itself)"
                )
            walker = self.parents[walker]
        old_parent = self.parents[node_id]
        self._children[old_parent].remove(node_id)
        self._children[new_parent].append(node_id)
        self.parents[node_id] = new_parent
        dx = self._xs[node_id] - self._xs[new_parent]
        dy = self._ys[node_id] - self._ys[new_parent]
        edge = math.sqrt(dx * dx + dy * dy)
        delta = self.costs[new_parent] + edge - self.costs[node_id]
        stack = [node_id]
        while stack:
            i = stack.pop()
            self.costs[i] += delta
            stack.extend(self._children[i])

    def root_path(self, node_id: int) -> list[Config]:
        """Configurations from the root to node_id, inclusive."""
        out = []
        walker = node_id
        while walker is not None:
            out.append(Config(self._xs[walker], self._ys[walker]))
            walker = self.parents[walker]
        out.reverse()
        return out

    def edges(self):
        """Yield (parent_config, child_config) for every edge."""
        for i in range(1, len(self._xs)):
            p = self.parents[i]
            yield Config(self._xs[p], self._ys[p]), Config(self._xs[i], self._ys[i])

    def copy(self) -> "Tree":
        """Structural snapshot (shares the immutable world)."""
        clone = Tree.__new__(Tree)
        clone.world = self.world
        clone._clock = self._clock
        clone._nx = self._nx
        clone._ny = self._ny
        clone._cell_w = self._cell_w
        clone._cell_h = self._cell_h
        clone._cell = self._cell
        clone._xs = list(self._xs)
        clone._ys = list(self._ys)
        clone.parents = list(self.parents)
        clone.costs = list(self.costs)
        clone._children = [list(c) for c in self._children]
        clone._cells = [None if c is None else list(c) for c in self._cells]
        return clone

    # -- neighbor queries ------------------------------------------------

    def nearest(self, q: Config) -> int:
        """Node id minimizing distance to q; ties break by lowest id."""
        if not self._xs:
            raise ValueError("nearest on an empty tree")
        qx, qy = q[0], q[1]
        xs = self._xs
        ys = self._ys
        best_d2 = math.inf
        best_id = -1
        ci, cj = self._cell_coords(qx, qy)
        ring = 0
        cell = self._cell
        examined = 0
        while True:
            any_cells = False
            for idx in self._ring_cells(ci, cj, ring):
                any_cells = True
                bucket = self._cells[idx]
                if bucket is None:
                    continue
                examined += len(bucket)
                for i in bucket:
                    dx = xs[i] - qx
                    dy = ys[i] - qy
                    d2 = dx * dx + dy * dy
                    if d2 < best_d2 or (d2 == best_d2 and i < best_id):
                        best_d2 = d2
                        best_id = i
            # cells on ring r+1 are at distance >= ring*cell from q
            bound = ring * cell
            if (best_id >= 0 and bound * bound > best_d2) or (not any_cells and ring > 0):
                if self._clock is not None:
                    self._clock.advance(examined * NEIGHBOR_CANDIDATE_COST)
                return best_id
            ring += 1

    def k_nearest(self, q: Config, k: int) -> list[int]:
        """The min(k, size) nodes closest to q, ascending (distance, id)."""
        if k < 1:
            raise ValueError("k must be positive")
        if not self._xs:
            raise ValueError("k_nearest on an empty tree")
        qx, qy = q[0], q[1]
        xs = self._xs
        ys = self._ys
        best: list[tuple[float, int]] = []
        ci, cj = self._cell_coords(qx, qy)
        ring = 0
        cell = self._cell
        examined = 0
        while True:
            any_cells = False
            for idx in self._ring_cells(ci, cj, ring):
                any_cells = True
                bucket = self._cells[idx]
                if bucket is None:
                    continue
                examined += len(bucket)
                for i in bucket:
                    dx = xs[i] - qx
                    dy = ys[i] - qy
                    entry = (dx * dx + dy * dy, i)
                    if len(best) < k:
                        insort(best, entry)
                    elif entry < best[-1]:
                        insort(best, entry)
                        best.pop()
            bound = ring * cell
            if len(best) == k and bound * bound > best[-1][0]:
                break
            if not any_cells and ring > 0:
                break
            ring += 1
        if self._clock is not None:
            self._clock.advance(examined * NEIGHBOR_CANDIDATE_COST)
        return [i for _, i in best]

    def near(self, q: Config, radius: float) -> list[int]:
        """All nodes within radius of q, ascending (distance, id)."""
        return [i for _, i in self.near_entries(q, radius)]

    def near_entries(self, q: Config, radius: float) -> list[tuple[float, int]]:
        """(squared distance, id) pairs within radius, ascending.

        Same result set as near(); planner hot loops use this variant to
        avoid recomputing distances per candidate.
        """
        if radius < 0.0:
            raise ValueError("radius must be non-negative")
        qx, qy = q[0], q[1]
        xs = self._xs
        ys = self._ys
        r2 = radius * radius
        found: list[tuple[float, int]] = []
        ci, cj = self._cell_coords(qx, qy)
        max_ring = int(radius / self._cell) + 1
        examined = 0
        for ring in range(max_ring + 1):
            any_cells = False
            for idx in self._ring_cells(ci, cj, ring):
                any_cells = True
                bucket = self._cells[idx]
                if bucket is None:
                    continue
                examined += len(bucket)
                for i in bucket:
                    dx = xs[i] - qx
                    dy = ys[i] - qy
                    d2 = dx * dx + dy * dy
                    if d2 <= r2:
                        found.append((d2, i))
            if not any_cells and ring > 0:
                break
        if self._clock is not None:
            self._clock.advance(examined * NEIGHBOR_CANDIDATE_COST)
        found.sort()
        return found

    # -- grid helpers ----------------------------------------------------

    def _cell_coords(self, x: float, y: float) -> tuple[int, int]:
        ci = int((x - self.world.lo.x) / self._cell_w)
        cj = int((y - self.world.lo.y) / self._cell_h)
        if ci < 0:
            ci = 0
        elif ci >= self._nx:
            ci = self._nx - 1
        if cj < 0:
            cj = 0
        elif cj >= self._ny:
            cj = self._ny - 1
        return ci, cj

    def _cell_index(self, x: float, y: float) -> int:
        ci, cj = self._cell_coords(x, y)
        return cj * self._nx + ci

    def _ring_cells(self, ci: int, cj: int, ring: int):
        """Flat indices of in-grid cells at Chebyshev distance `ring`."""
        nx = self._nx
        ny = self._ny
        if ring == 0:
            yield cj * nx + ci
            return
        x0 = ci - ring
        x1 = ci + ring
        y0 = cj - ring
        y1 = cj + ring
        xa = max(x0, 0)
        xb = min(x1, nx - 1)
        if 0 <= y0 < ny:
            base = y0 * nx
            for x in range(xa, xb + 1):
                yield base + x
        if 0 <= y1 < ny and y1 != y0:
            base = y1 * nx
            for x in range(xa, xb + 1):
                yield base + x
        ya = max(y0 + 1, 0)
        yb = min(y1 - 1, ny - 1)
        if 0 <= x0 < nx:
            for y in range(ya, yb + 1):
                yield y * nx + x0
        if 0 <= x1 < nx and x1 != x0:
            for y in range(ya, yb + 1):
                yield y * nx + x1
