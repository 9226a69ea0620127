"""Point-in-region queries over the BEV region polygons."""

from __future__ import annotations

import logging

from .model import Region, Scene

logger = logging.getLogger(__name__)

_EPS = 1e-9


def point_in_polygon(point: tuple[float, float], polygon) -> bool:
    """Even-odd test, inclusive of the boundary."""
    x, y = point
    n = len(polygon)
    for i in range(n):
        if _on_segment(point, polygon[i], polygon[(i + 1) % n]):
            return True
    inside = False
    for i in range(n):
        (x1, y1), (x2, y2) = polygon[i], polygon[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            t = (y - y1) / (y2 - y1)
            if x < x1 + t * (x2 - x1):
                inside = not inside
    return inside


def _on_segment(p, a, b) -> bool:
    (px, py), (ax, ay), (bx, by) = p, a, b
    cross = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    if abs(cross) > _EPS * max(1.0, abs(bx - ax), abs(by - ay)):
        return False
    dot = (px - ax) * (bx - ax) + (py - ay) * (by - ay)
    sq_len = (bx - ax) ** 2 + (by - ay) ** 2
    return -_EPS <= dot <= sq_len + _EPS


def assign_room(scene: Scene, point: tuple[float, float]) -> Region | None:
    """Region containing the point; first-declared wins on boundaries/overlaps."""
    hits = [r for r in scene.regions if point_in_polygon(point, r.polygon)]
    if not hits:
        return None
    if len(hits) > 1:
        logger.warning(
            "point %s inside %d regions (%s); first-declared wins",
            point, len(hits), ", ".join(r.region_id for r in hits),
        )
    return hits[0]
