"""RRT* planning on a (possibly partially known) occupancy grid.

Used by the modular agent's action module: plans on the agent's memory map
with unknown space treated as traversable, replanning when newly observed
obstacles cut the current path. Sampling is seeded and the rewire radius
shrinks with the standard log scale, so plans are reproducible.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import ndimage

from ..errors import TargetExcluded

UNKNOWN, KNOWN_FREE, KNOWN_OBSTACLE = 0, 1, 2


class GridWorld:
    """Collision queries over a memory grid (unknown counts as free)."""

    def __init__(self, grid: np.ndarray, origin: tuple[float, float], cell_size: float,
                 clearance: float):
        self.grid = grid
        self.origin = origin
        self.cell_size = cell_size
        self.clearance = clearance
        blocked = grid == KNOWN_OBSTACLE
        padded = np.pad(blocked, 1, constant_values=False)
        self._dist = ndimage.distance_transform_edt(~padded)[1:-1, 1:-1] * cell_size
        self.height, self.width = grid.shape

    def point_free(self, x: float, y: float) -> bool:
        cx = int((x - self.origin[0]) / self.cell_size)
        cy = int((y - self.origin[1]) / self.cell_size)
        if not (0 <= cx < self.width and 0 <= cy < self.height):
            return False
        return self._dist[cy, cx] >= self.clearance

    def segment_free(self, a: tuple[float, float], b: tuple[float, float],
                     spacing: float = 0.1) -> bool:
        dist = math.hypot(b[0] - a[0], b[1] - a[1])
        steps = max(1, int(dist / spacing))
        for i in range(steps + 1):
            t = i / steps
            if not self.point_free(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t):
                return False
        return True

    def bounds(self) -> tuple[float, float, float, float]:
        return (
            self.origin[0], self.origin[1],
            self.origin[0] + self.width * self.cell_size,
            self.origin[1] + self.height * self.cell_size,
        )


def rrt_star(
    world: GridWorld,
    start: tuple[float, float],
    goal: tuple[float, float],
    rng: np.random.Generator,
    samples: int = 2000,
    goal_bias: float = 0.1,
    steer_step: float = 1.0,
    goal_radius: float = 0.5,
    shortcut_passes: int = 3,
) -> list[tuple[float, float]]:
    """Sampling-based near-optimal path; raises TargetExcluded when no tree
    branch reaches the goal region within the sample budget."""
    if not world.point_free(*start):
        raise TargetExcluded(f"start {start} is not free on the known map")
    x0, y0, x1, y1 = world.bounds()
    nodes_x = np.array([start[0]])
    nodes_y = np.array([start[1]])
    parent = [0]
    cost = [0.0]
    gamma = 8.0  # rewire scale; radius shrinks as sqrt(log n / n)

    for it in range(samples):
        if rng.random() < goal_bias:
            sample = goal
        else:
            sample = (x0 + rng.random() * (x1 - x0), y0 + rng.random() * (y1 - y0))
        d2 = (nodes_x - sample[0]) ** 2 + (nodes_y - sample[1]) ** 2
        nearest = int(np.argmin(d2))
        nx, ny = nodes_x[nearest], nodes_y[nearest]
        dist = math.sqrt(d2[nearest])
        if dist < 1e-9:
            continue
        t = min(1.0, steer_step / dist)
        new = (nx + (sample[0] - nx) * t, ny + (sample[1] - ny) * t)
        if not world.point_free(*new) or not world.segment_free((nx, ny), new):
            continue

        n = len(parent) + 1
        radius = min(gamma * math.sqrt(math.log(n + 1) / n), 2.0)
        d2new = (nodes_x - new[0]) ** 2 + (nodes_y - new[1]) ** 2
        near = np.nonzero(d2new <= radius * radius)[0]

        best_parent = nearest
        best_cost = cost[nearest] + dist * t
        for j in near:
            c = cost[j] + math.sqrt(d2new[j])
            if c < best_cost and world.segment_free((nodes_x[j], nodes_y[j]), new):
                best_parent, best_cost = int(j), c

        nodes_x = np.append(nodes_x, new[0])
        nodes_y = np.append(nodes_y, new[1])
        parent.append(best_parent)
        cost.append(best_cost)
        new_idx = len(parent) - 1

        for j in near:  # rewire neighbors through the new node when cheaper
            c = best_cost + math.sqrt(d2new[j])
            if c < cost[j] and world.segment_free(new, (nodes_x[j], nodes_y[j])):
                parent[j] = new_idx
                cost[j] = c

    d2goal = (nodes_x - goal[0]) ** 2 + (nodes_y - goal[1]) ** 2
    reachable = [
        i for i in np.nonzero(d2goal <= goal_radius * goal_radius)[0]
        if world.segment_free((nodes_x[i], nodes_y[i]), goal)
    ]
    if not reachable:
        raise TargetExcluded("no RRT* branch reached the goal region")
    best = min(reachable, key=lambda i: cost[i] + math.sqrt(d2goal[i]))

    waypoints = [goal]
    node = int(best)
    while True:
        waypoints.append((float(nodes_x[node]), float(nodes_y[node])))
        if node == 0:
            break
        node = parent[node]
    waypoints.reverse()
    return _shortcut(world, waypoints, shortcut_passes)


def _shortcut(world: GridWorld, waypoints: list[tuple[float, float]], passes: int) -> list:
    """Deterministic straightening: drop middle points whose neighbors connect."""
    for _ in range(passes):
        changed = False
        i = 0
        while i + 2 < len(waypoints):
            if world.segment_free(waypoints[i], waypoints[i + 2]):
                del waypoints[i + 1]
                changed = True
            else:
                i += 1
        if not changed:
            break
    return waypoints


def path_length(waypoints) -> float:
    return sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(waypoints, waypoints[1:]))


def path_blocked(world: GridWorld, waypoints) -> bool:
    """True when any segment now violates clearance on the updated map."""
    return any(
        not world.segment_free(a, b) for a, b in zip(waypoints, waypoints[1:])
    )
