"""Independent oracles the implementation is checked against.

The swept-disc checker certifies path clearance straight from cell rectangles
and segment geometry (KD-tree lower bound plus exact point-rectangle refinement),
sharing no code with the planner's distance-transform inflation.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.spatial import cKDTree

from scenebench.taskgen.occupancy import FREE, OccupancyMap


def sample_polyline(waypoints, spacing: float) -> np.ndarray:
    """Points along the polyline no farther than `spacing` apart, endpoints included."""
    pts = []
    for (x0, y0), (x1, y1) in zip(waypoints, waypoints[1:]):
        seg = math.hypot(x1 - x0, y1 - y0)
        n = max(1, int(math.ceil(seg / spacing)))
        for i in range(n):
            t = i / n
            pts.append((x0 + t * (x1 - x0), y0 + t * (y1 - y0)))
    pts.append(tuple(waypoints[-1]))
    return np.asarray(pts)


class SweptDiscChecker:
    """Exhaustive swept-disc clearance against every impassable cell rectangle.

    A KD-tree over blocked-cell centers (built once per map) gives bracketing
    bounds; only samples that can attain the global minimum are refined with
    exact point-to-rectangle distances.
    """

    def __init__(self, occ: OccupancyMap):
        self.occ = occ
        self.cs = occ.cell_size
        blocked_ys, blocked_xs = np.nonzero(occ.cells != FREE)
        self.centers = np.stack(
            [
                occ.origin[0] + (blocked_xs + 0.5) * self.cs,
                occ.origin[1] + (blocked_ys + 0.5) * self.cs,
            ],
            axis=1,
        )
        self.tree = cKDTree(self.centers) if len(self.centers) else None

    def clearance(self, waypoints) -> float:
        if self.tree is None:
            return math.inf
        cs = self.cs
        samples = sample_polyline(waypoints, spacing=cs / 2)
        # sampling a segment every cs/2 underestimates the true minimum by < cs/4
        center_dist, _ = self.tree.query(samples)
        half_diag = cs * math.sqrt(2) / 2

        # point-to-rectangle distance lies in [center - half_diag, center], so
        # only samples whose lower bound reaches the global upper bound matter
        upper = center_dist.min()
        candidates = np.nonzero(center_dist - half_diag <= upper)[0]
        min_clear = math.inf
        for i in candidates:
            px, py = samples[i]
            for j in self.tree.query_ball_point((px, py), center_dist[i] + half_diag + 1e-9):
                rx, ry = self.centers[j]
                dx = max(rx - cs / 2 - px, px - (rx + cs / 2), 0.0)
                dy = max(ry - cs / 2 - py, py - (ry + cs / 2), 0.0)
                min_clear = min(min_clear, math.hypot(dx, dy))
        return min_clear

    def is_collision_free(self, waypoints, radius: float) -> bool:
        margin = self.cs / 4  # sampling granularity bound
        return self.clearance(waypoints) >= radius - margin


def swept_disc_clearance(occ: OccupancyMap, waypoints, radius: float = 0.34) -> float:
    return SweptDiscChecker(occ).clearance(waypoints)


def path_is_collision_free(occ: OccupancyMap, waypoints, radius: float) -> bool:
    return SweptDiscChecker(occ).is_collision_free(waypoints, radius)


def polyline_length(waypoints) -> float:
    return float(
        sum(math.hypot(b[0] - a[0], b[1] - a[1]) for a, b in zip(waypoints, waypoints[1:]))
    )


# -- rational-arithmetic metric oracles ---------------------------------------


def spl_oracle(results: list[tuple[bool, Fraction, Fraction]]) -> Fraction:
    """(success, shortest l, taken p) triples -> exact SPL."""
    total = Fraction(0)
    for success, l, p in results:
        if success:
            total += l / max(p, l)
    return total / len(results)


def ecr_oracle(sizes: list[int]) -> Fraction:
    if sizes[0] == 1:
        return Fraction(1)
    total = sum(Fraction(a - b) for a, b in zip(sizes, sizes[1:]))
    return total / (sizes[0] - 1)


def scr_oracle(flags: list[bool]) -> Fraction:
    return Fraction(sum(1 for f in flags if f), len(flags))
