"""The modular agent's memory: incremental BEV map, candidates, history."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from ..sim.harness import Observation
from ..taskgen.occupancy import FREE, OBSTACLE, OccupancyMap
from .rrt import KNOWN_FREE, KNOWN_OBSTACLE, UNKNOWN


@dataclass
class Candidate:
    instance_id: str
    position: tuple[float, float]
    description: str
    footprint: tuple[float, float, float, float]
    top_z: float


@dataclass
class BevMemory:
    """Monotone knowledge: cells only ever transition unknown -> known."""

    origin: tuple[float, float]
    cell_size: float
    grid: np.ndarray
    candidates: dict[str, Candidate] = field(default_factory=dict)
    history: list[tuple[str, str]] = field(default_factory=list)  # (action, digest)
    goal_info: list[str] = field(default_factory=list)

    @classmethod
    def for_map(cls, occ: OccupancyMap) -> "BevMemory":
        return cls(
            origin=occ.origin,
            cell_size=occ.cell_size,
            grid=np.full((occ.height, occ.width), UNKNOWN, dtype=np.uint8),
        )

    def merge_patch(self, observation: Observation) -> int:
        """Fold the observed window into the map; returns newly known cells."""
        patch = observation.local_occupancy
        x0, y0 = patch.origin_cell
        h, w = patch.cells.shape
        window = self.grid[y0:y0 + h, x0:x0 + w]
        known = np.where(patch.cells == FREE, KNOWN_FREE, KNOWN_OBSTACLE).astype(np.uint8)
        fresh = window == UNKNOWN
        window[fresh] = known[fresh]
        return int(fresh.sum())

    def note_candidates(self, observation: Observation, describe) -> None:
        for seen in observation.visible_objects:
            if seen.instance_id in self.candidates:
                continue
            info = describe(seen.instance_id)
            self.candidates[seen.instance_id] = Candidate(
                instance_id=seen.instance_id,
                position=info["position"],
                description=info["description"],
                footprint=info["footprint"],
                top_z=info["top_z"],
            )

    def record(self, action_kind: str, observation: Observation) -> None:
        digest = f"saw {len(observation.visible_objects)} objects"
        self.history.append((action_kind, digest))

    def frontier_point(self, position: tuple[float, float]) -> tuple[float, float] | None:
        """Nearest unknown cell bordering known-free space."""
        free = self.grid == KNOWN_FREE
        if not free.any():
            return None
        grown = ndimage.binary_dilation(free)
        frontier = (self.grid == UNKNOWN) & grown
        ys, xs = np.nonzero(frontier)
        if len(xs) == 0:
            return None
        px = self.origin[0] + (xs + 0.5) * self.cell_size
        py = self.origin[1] + (ys + 0.5) * self.cell_size
        d2 = (px - position[0]) ** 2 + (py - position[1]) ** 2
        order = np.lexsort((xs, ys, d2))
        i = order[0]
        return (float(px[i]), float(py[i]))
