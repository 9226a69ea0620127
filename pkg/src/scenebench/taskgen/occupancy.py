"""BEV occupancy maps: region-bounded grids with projected object footprints.

Cells outside every region polygon are undefined; cells covered (with positive
area) by the footprint of any object whose AABB intersects the projection band
are obstacles; the rest is free. An owner grid remembers which object painted
each obstacle cell for line-of-sight queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..config import OccupancyConfig
from ..errors import SizingError
from ..scene.model import Scene
from ..scene.regions import point_in_polygon

UNDEFINED, FREE, OBSTACLE = 0, 1, 2
_EPS = 1e-12


@dataclass
class OccupancyMap:
    width: int
    height: int
    cell_size: float
    origin: tuple[float, float]
    cells: np.ndarray  # uint8 [height, width], values in {UNDEFINED, FREE, OBSTACLE}
    owner: np.ndarray  # int32 [height, width], object index or -1
    object_ids: tuple[str, ...] = ()
    object_tops: tuple[float, ...] = ()
    scene_id: str = ""
    _blocked: np.ndarray | None = field(default=None, repr=False, compare=False)
    _clearance: np.ndarray | None = field(default=None, repr=False, compare=False)

    def world_to_cell(self, x: float, y: float) -> tuple[int, int]:
        cx = int(math.floor((x - self.origin[0]) / self.cell_size))
        cy = int(math.floor((y - self.origin[1]) / self.cell_size))
        return cx, cy

    def cell_center(self, cx: int, cy: int) -> tuple[float, float]:
        return (
            self.origin[0] + (cx + 0.5) * self.cell_size,
            self.origin[1] + (cy + 0.5) * self.cell_size,
        )

    def in_bounds(self, cx: int, cy: int) -> bool:
        return 0 <= cx < self.width and 0 <= cy < self.height

    def state_at(self, x: float, y: float) -> int:
        cx, cy = self.world_to_cell(x, y)
        if not self.in_bounds(cx, cy):
            return UNDEFINED
        return int(self.cells[cy, cx])

    @property
    def blocked(self) -> np.ndarray:
        """Boolean mask of impassable cells (obstacle or undefined)."""
        if self._blocked is None:
            self._blocked = self.cells != FREE
        return self._blocked


def _cover_range(lo: float, hi: float, origin: float, cell: float, count: int) -> tuple[int, int]:
    """Half-open cell index range covering [lo, hi] with positive overlap."""
    first = int(math.floor((lo - origin) / cell + _EPS))
    last = int(math.ceil((hi - origin) / cell - _EPS)) - 1
    return max(first, 0), min(last, count - 1)


def build_occupancy(scene: Scene, cfg: OccupancyConfig | None = None) -> OccupancyMap:
    cfg = cfg or OccupancyConfig()
    min_x, min_y, max_x, max_y = scene.bounds()
    extent_x = cfg.width * cfg.cell_size
    extent_y = cfg.height * cfg.cell_size
    if max_x - min_x > extent_x or max_y - min_y > extent_y:
        raise SizingError(
            f"scene {scene.scene_id!r} spans {max_x - min_x:.2f} x {max_y - min_y:.2f} m, "
            f"grid holds {extent_x:.2f} x {extent_y:.2f} m at cell_size {cfg.cell_size}"
        )
    # center the scene so any grid slack becomes an undefined border; snap the
    # shift to whole cells to keep footprints grid-aligned
    pad_x = cfg.cell_size * ((extent_x - (max_x - min_x)) // (2 * cfg.cell_size))
    pad_y = cfg.cell_size * ((extent_y - (max_y - min_y)) // (2 * cfg.cell_size))
    origin = (round(min_x - pad_x, 9), round(min_y - pad_y, 9))

    cells = np.full((cfg.height, cfg.width), UNDEFINED, dtype=np.uint8)
    owner = np.full((cfg.height, cfg.width), -1, dtype=np.int32)

    # region interiors become free (membership tested at cell centers)
    xs = origin[0] + (np.arange(cfg.width) + 0.5) * cfg.cell_size
    ys = origin[1] + (np.arange(cfg.height) + 0.5) * cfg.cell_size
    for region in scene.regions:
        rx0 = min(p[0] for p in region.polygon)
        rx1 = max(p[0] for p in region.polygon)
        ry0 = min(p[1] for p in region.polygon)
        ry1 = max(p[1] for p in region.polygon)
        cx0, cx1 = _cover_range(rx0, rx1, origin[0], cfg.cell_size, cfg.width)
        cy0, cy1 = _cover_range(ry0, ry1, origin[1], cfg.cell_size, cfg.height)
        poly = np.asarray(region.polygon)
        sub = _polygon_mask(xs[cx0:cx1 + 1], ys[cy0:cy1 + 1], poly)
        block = cells[cy0:cy1 + 1, cx0:cx1 + 1]
        block[sub & (block == UNDEFINED)] = FREE

    # object footprints become obstacles; first painter owns the cell
    object_ids = []
    object_tops = []
    for index, (oid, obj) in enumerate(scene.objects.items()):
        object_ids.append(oid)
        object_tops.append(obj.max_points[2])
        z0, z1 = obj.z_range
        if z1 < cfg.project_z_min or z0 > cfg.project_z_max:
            continue
        x0, y0, x1, y1 = obj.footprint
        cx0, cx1 = _cover_range(x0, x1, origin[0], cfg.cell_size, cfg.width)
        cy0, cy1 = _cover_range(y0, y1, origin[1], cfg.cell_size, cfg.height)
        if cx1 < cx0 or cy1 < cy0:
            continue
        block = cells[cy0:cy1 + 1, cx0:cx1 + 1]
        own = owner[cy0:cy1 + 1, cx0:cx1 + 1]
        own[own == -1] = index
        block[:] = OBSTACLE
    owner[cells != OBSTACLE] = -1

    return OccupancyMap(
        width=cfg.width,
        height=cfg.height,
        cell_size=cfg.cell_size,
        origin=origin,
        cells=cells,
        owner=owner,
        object_ids=tuple(object_ids),
        object_tops=tuple(object_tops),
        scene_id=scene.scene_id,
    )


def _polygon_mask(xs: np.ndarray, ys: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd membership of every (x, y) grid center in the polygon."""
    px = polygon[:, 0]
    py = polygon[:, 1]
    nx = np.roll(px, -1)
    ny = np.roll(py, -1)
    gx = xs[None, :, None]  # [1, W, 1]
    gy = ys[:, None, None]  # [H, 1, 1]
    crosses = (py[None, None, :] > gy) != (ny[None, None, :] > gy)
    denom = np.where(ny - py == 0, 1.0, ny - py)
    t = (gy - py[None, None, :]) / denom[None, None, :]
    x_at = px[None, None, :] + t * (nx - px)[None, None, :]
    hits = crosses & (gx < x_at)
    return (hits.sum(axis=2) % 2).astype(bool)


def save_pgm(occ: OccupancyMap, path: str | Path) -> None:
    """Portable graymap export: undefined=0, obstacle=128, free=255."""
    gray = np.zeros_like(occ.cells, dtype=np.uint8)
    gray[occ.cells == OBSTACLE] = 128
    gray[occ.cells == FREE] = 255
    header = f"P5\n{occ.width} {occ.height}\n255\n".encode("ascii")
    Path(path).write_bytes(header + gray.tobytes())


def load_pgm(path: str | Path) -> np.ndarray:
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError("not a binary PGM file")
    parts = data.split(b"\n", 3)
    width, height = (int(v) for v in parts[1].split())
    gray = np.frombuffer(parts[3], dtype=np.uint8).reshape(height, width)
    return gray
