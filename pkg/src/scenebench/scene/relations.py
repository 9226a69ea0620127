"""AABB-only spatial relation derivation.

For an ordered pair (source, target) the derived label describes where the
target sits relative to the source, so a couch's edge list can contain
``(blanket, under)`` and ``(picture, above)``. At most one relation is emitted
per ordered pair (the most specific that applies); pairs farther apart than the
near threshold get nothing. Containment is labeled ``in`` on the container's
list; the contained object's list carries the computed inverse ``out_of``.
"""

from __future__ import annotations

from ..config import RelationConfig
from .model import ObjectInstance, RelationEdge, Scene, SceneGraph


def min_aabb_gap(a: ObjectInstance, b: ObjectInstance) -> float:
    """Minimum Euclidean distance between two AABBs; 0 when they touch/overlap."""
    total = 0.0
    for axis in range(3):
        lo = max(a.min_points[axis], b.min_points[axis])
        hi = min(a.max_points[axis], b.max_points[axis])
        if lo > hi:
            d = lo - hi
            total += d * d
    return total ** 0.5


def _horizontal_overlap(a: ObjectInstance, b: ObjectInstance) -> bool:
    ax0, ay0, ax1, ay1 = a.footprint
    bx0, by0, bx1, by1 = b.footprint
    return min(ax1, bx1) > max(ax0, bx0) and min(ay1, by1) > max(ay0, by0)


def _inside(inner: ObjectInstance, outer: ObjectInstance, tol: float) -> bool:
    return all(
        inner.min_points[axis] >= outer.min_points[axis] - tol
        and inner.max_points[axis] <= outer.max_points[axis] + tol
        for axis in range(3)
    )


def _degenerate(obj: ObjectInstance) -> bool:
    return any(obj.max_points[axis] - obj.min_points[axis] <= 0 for axis in range(3))


def relation_between(
    source: ObjectInstance, target: ObjectInstance, cfg: RelationConfig
) -> tuple[str, float] | None:
    """Relation of ``target`` w.r.t. ``source`` plus edge distance, or None."""
    gap = min_aabb_gap(source, target)
    if gap >= cfg.near_threshold:
        return None
    if _degenerate(source) or _degenerate(target):
        return ("near", gap)  # zero-volume boxes only participate in near
    if _inside(target, source, cfg.in_tolerance):
        return ("in", gap)
    if _inside(source, target, cfg.in_tolerance):
        return ("out_of", gap)
    if _horizontal_overlap(source, target):
        if abs(target.min_points[2] - source.max_points[2]) < cfg.on_tolerance:
            return ("on", gap)
        below_gap = source.min_points[2] - target.max_points[2]
        if below_gap >= cfg.above_min_gap:
            rel = "under" if below_gap < cfg.under_max_gap else "below"
            return (rel, gap)
        above_gap = target.min_points[2] - source.max_points[2]
        if above_gap >= cfg.above_min_gap:
            return ("above", gap)
    return ("near", gap)


def derive_relations(scene: Scene, cfg: RelationConfig | None = None, step_stamp: int = 0) -> SceneGraph:
    """Build the scene graph; annotated nearby_objects edges win over derived ones."""
    cfg = cfg or RelationConfig()
    adjacency: dict[str, tuple[RelationEdge, ...]] = {}
    ids = list(scene.objects)
    for src_id in ids:
        src = scene.objects[src_id]
        annotated = scene.annotated_edges.get(src_id, {})
        edges: list[RelationEdge] = []
        for tgt_id in ids:
            if tgt_id == src_id:
                continue
            if tgt_id in annotated:
                rel, dist = annotated[tgt_id]
                edges.append(RelationEdge(src_id, tgt_id, rel, dist))
                continue
            derived = relation_between(src, scene.objects[tgt_id], cfg)
            if derived is not None:
                rel, dist = derived
                edges.append(RelationEdge(src_id, tgt_id, rel, dist))
        adjacency[src_id] = tuple(edges)
    graph = SceneGraph(nodes=dict(scene.objects), adjacency=adjacency, step_stamp=step_stamp)
    graph.validate()
    return graph
