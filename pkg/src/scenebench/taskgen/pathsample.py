"""Collision-free ground-truth path sampling on the occupancy grid.

Obstacle and undefined cells are inflated by the robot radius plus a grid
margin; shortest paths live on the 8-connected traversable graph. One distance
field per goal serves every start sample for that goal, so batch generation
stays fast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import ndimage
from scipy.sparse.csgraph import dijkstra

from ..config import PathConfig
from ..errors import ContractViolation, TargetExcluded
from ..scene.model import ObjectInstance
from .occupancy import FREE, OccupancyMap

# extra clearance beyond the robot radius covering cell extent and segment
# interpolation, so every point of a grid path clears obstacle rectangles
GRID_MARGIN_CELLS = 2.0

# ground-truth paths keep this much extra slack beyond the motion clearance,
# so trackers quantized to 2 m moves are not forced to graze corners
SAMPLING_SLACK = 0.08


def clearance_grid(occ: OccupancyMap) -> np.ndarray:
    """Meters from each cell center to the nearest impassable cell; the area
    beyond the grid counts as impassable. Cached on the map (it is immutable)."""
    if occ._clearance is None:
        padded = np.pad(occ.blocked, 1, constant_values=True)
        occ._clearance = ndimage.distance_transform_edt(~padded)[1:-1, 1:-1] * occ.cell_size
    return occ._clearance


@dataclass(frozen=True)
class Path:
    waypoints: tuple[tuple[float, float], ...]
    length: float

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ContractViolation("a path needs at least two waypoints")

    @staticmethod
    def from_waypoints(waypoints) -> "Path":
        """Canonical construction: coordinates and length at 1e-9 precision."""
        pts = tuple((round(float(x), 9), round(float(y), 9)) for x, y in waypoints)
        length = sum(
            math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])
        )
        return Path(pts, round(length, 9))

    def to_dict(self) -> dict:
        return {"waypoints": [[x, y] for x, y in self.waypoints],
                "length": self.length}

    @staticmethod
    def from_dict(raw: dict) -> "Path":
        return Path(tuple((float(x), float(y)) for x, y in raw["waypoints"]), float(raw["length"]))


class PathPlanner:
    """Shortest-path machinery over one occupancy map, cached per goal."""

    def __init__(self, occ: OccupancyMap, cfg: PathConfig | None = None):
        self.occ = occ
        self.cfg = cfg or PathConfig()
        clearance = self.cfg.robot_radius + GRID_MARGIN_CELLS * occ.cell_size + SAMPLING_SLACK
        self.traversable = (occ.cells == FREE) & (clearance_grid(occ) >= clearance)
        # episode starts need a runway: at least one clean 2 m axis move, so
        # the discrete action space always has an opening move available
        self.start_cells = self.traversable & _axis_runway(self.traversable, occ.cell_size, 2.0)
        if not self.start_cells.any():
            self.start_cells = self.traversable
        self._graph = None
        self._fields: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    # -- graph ----------------------------------------------------------------

    @property
    def graph(self) -> sp.csr_matrix:
        if self._graph is None:
            self._graph = _grid_graph(self.traversable, self.occ.cell_size)
        return self._graph

    def _node(self, cx: int, cy: int) -> int:
        return cy * self.occ.width + cx

    def field_for(self, goal_cell: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
        """Distance (meters) and predecessor arrays rooted at the goal cell."""
        if goal_cell not in self._fields:
            dist, pred = dijkstra(
                self.graph, directed=False, indices=self._node(*goal_cell),
                return_predecessors=True,
            )
            self._fields[goal_cell] = (dist, pred)
        return self._fields[goal_cell]

    # -- goals ------------------------------------------------------------------

    def approach_cell(self, obj: ObjectInstance) -> tuple[int, int]:
        """Nearest traversable cell to the object's footprint within the
        approach radius; raises TargetExcluded when none exists."""
        x0, y0, x1, y1 = obj.footprint
        r = self.cfg.approach_radius
        cx0, cy0 = self.occ.world_to_cell(x0 - r, y0 - r)
        cx1, cy1 = self.occ.world_to_cell(x1 + r, y1 + r)
        cx0, cy0 = max(cx0, 0), max(cy0, 0)
        cx1, cy1 = min(cx1, self.occ.width - 1), min(cy1, self.occ.height - 1)
        best = None
        window = self.traversable[cy0:cy1 + 1, cx0:cx1 + 1]
        ys, xs = np.nonzero(window)
        if len(xs) == 0:
            raise TargetExcluded(f"{obj.instance_id}: no traversable cell near footprint")
        centers_x = self.occ.origin[0] + (xs + cx0 + 0.5) * self.occ.cell_size
        centers_y = self.occ.origin[1] + (ys + cy0 + 0.5) * self.occ.cell_size
        dx = np.maximum(np.maximum(x0 - centers_x, centers_x - x1), 0.0)
        dy = np.maximum(np.maximum(y0 - centers_y, centers_y - y1), 0.0)
        dist = np.hypot(dx, dy)
        order = np.lexsort((xs, ys, dist))
        idx = order[0]
        if dist[idx] > r:
            raise TargetExcluded(f"{obj.instance_id}: nearest approach cell beyond {r} m")
        best = (int(xs[idx] + cx0), int(ys[idx] + cy0))
        return best

    # -- sampling ------------------------------------------------------------------

    def sample_path(self, goal_obj: ObjectInstance, rng: np.random.Generator) -> Path:
        """Uniformly sample starts until the geodesic to the goal approach cell
        lands in the configured length band; TargetExcluded after max_attempts."""
        goal = self.approach_cell(goal_obj)
        dist, pred = self.field_for(goal)
        start_ys, start_xs = np.nonzero(self.start_cells)
        if len(start_xs) == 0:
            raise TargetExcluded("map has no traversable cells")
        for _ in range(self.cfg.max_attempts):
            pick = int(rng.integers(len(start_xs)))
            cx, cy = int(start_xs[pick]), int(start_ys[pick])
            d = dist[self._node(cx, cy)]
            if self.cfg.min_length <= d <= self.cfg.max_length:
                path = self._reconstruct((cx, cy), goal, pred)
                # re-check on the reconstructed polyline to rule out boundary jitter
                if self.cfg.min_length <= path.length <= self.cfg.max_length:
                    return path
        raise TargetExcluded(
            f"{goal_obj.instance_id}: no start with geodesic in "
            f"[{self.cfg.min_length}, {self.cfg.max_length}] m after {self.cfg.max_attempts} tries"
        )

    def shortest_path(self, start_xy: tuple[float, float], goal_obj: ObjectInstance) -> Path:
        goal = self.approach_cell(goal_obj)
        dist, pred = self.field_for(goal)
        start = self.occ.world_to_cell(*start_xy)
        if not (self.occ.in_bounds(*start) and self.traversable[start[1], start[0]]):
            raise TargetExcluded(f"start {start_xy} not traversable")
        if not np.isfinite(dist[self._node(*start)]):
            raise TargetExcluded(f"no path from {start_xy} to {goal_obj.instance_id}")
        return self._reconstruct(start, goal, pred)

    def _reconstruct(self, start: tuple[int, int], goal: tuple[int, int], pred: np.ndarray) -> Path:
        node = self._node(*start)
        goal_node = self._node(*goal)
        cells = [start]
        while node != goal_node:
            node = int(pred[node])
            if node < 0:
                raise TargetExcluded("predecessor chain broken: unreachable goal")
            cells.append((node % self.occ.width, node // self.occ.width))
        points = [self.occ.cell_center(cx, cy) for cx, cy in cells]
        return Path.from_waypoints(_drop_collinear(points))


def _axis_runway(traversable: np.ndarray, cell_size: float, run_length: float) -> np.ndarray:
    """Cells from which a straight run of `run_length` stays traversable in at
    least one of the four axis directions."""
    size = int(math.ceil(run_length / cell_size)) + 2
    t = traversable.astype(np.int32)
    ok = np.zeros_like(traversable)
    for axis in (0, 1):
        csum = np.cumsum(t, axis=axis)
        padded = np.concatenate(
            [np.zeros_like(np.take(csum, [0], axis=axis)), csum], axis=axis
        )
        n = traversable.shape[axis]
        take = lambda lo, hi: np.take(padded, range(lo, hi), axis=axis)  # noqa: E731
        window = take(size, n + 1) - take(0, n + 1 - size)
        full = window == size
        # forward run: window starting at the cell; backward: ending at it
        fwd = np.zeros_like(ok)
        bwd = np.zeros_like(ok)
        sl_f = [slice(None)] * 2
        sl_f[axis] = slice(0, n - size + 1)
        fwd[tuple(sl_f)] = full
        sl_b = [slice(None)] * 2
        sl_b[axis] = slice(size - 1, n)
        bwd[tuple(sl_b)] = full
        ok |= fwd | bwd
    return ok


def _grid_graph(traversable: np.ndarray, cell_size: float) -> sp.csr_matrix:
    height, width = traversable.shape
    idx = np.arange(height * width).reshape(height, width)
    rows, cols, data = [], [], []
    steps = [(0, 1, 1.0), (1, 0, 1.0), (1, 1, math.sqrt(2)), (1, -1, math.sqrt(2))]
    for dy, dx, w in steps:
        if dx >= 0:
            src = idx[: height - dy, : width - dx]
            dst = idx[dy:, dx:]
            ok = traversable[: height - dy, : width - dx] & traversable[dy:, dx:]
        else:
            src = idx[: height - dy, -dx:]
            dst = idx[dy:, : width + dx]
            ok = traversable[: height - dy, -dx:] & traversable[dy:, : width + dx]
        rows.append(src[ok])
        cols.append(dst[ok])
        data.append(np.full(int(ok.sum()), w * cell_size))
    return sp.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(height * width, height * width),
    )


def _drop_collinear(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    if len(points) <= 2:
        return points
    kept = [points[0]]
    for prev, cur, nxt in zip(points, points[1:], points[2:]):
        cross = (cur[0] - prev[0]) * (nxt[1] - cur[1]) - (cur[1] - prev[1]) * (nxt[0] - cur[0])
        if abs(cross) > 1e-12:
            kept.append(cur)
    kept.append(points[-1])
    return kept
