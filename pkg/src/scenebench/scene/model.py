"""Domain types for annotated scenes and the derived scene graph.

An edge stored under a source object reads as "<target> <relation> <source>",
matching the annotation convention (a couch record listing ``blanket: under``
means the blanket sits under the couch). Scenes and graphs are immutable after
construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import SceneValidationError

# Closed relation vocabulary: the Sr3D-style set observed in annotations plus
# containment and its stored inverse. Anything else in a fixture is an error.
RELATIONS = ("near", "on", "in", "above", "below", "under", "out_of")

Vec3 = tuple[float, float, float]


@dataclass(frozen=True)
class ObjectInstance:
    """One annotated object: category-prefixed id, AABB, room, captions."""

    instance_id: str
    category: str
    scope: str
    room: str  # "index/name" form, compared as the full string
    position: Vec3
    min_points: Vec3
    max_points: Vec3
    description: tuple[str, ...]
    interactive: bool = False
    extras: dict = field(default_factory=dict, compare=False)

    def validate(self) -> None:
        prefix = self.instance_id.split("/", 1)[0]
        if prefix != self.category:
            raise SceneValidationError(
                f"{self.instance_id}: id prefix {prefix!r} != category {self.category!r}"
            )
        for axis in range(3):
            if self.min_points[axis] > self.max_points[axis]:
                raise SceneValidationError(
                    f"{self.instance_id}: min_points > max_points on axis {axis}"
                )
            if not (self.min_points[axis] <= self.position[axis] <= self.max_points[axis]):
                raise SceneValidationError(
                    f"{self.instance_id}: position outside AABB on axis {axis}"
                )

    @property
    def footprint(self) -> tuple[float, float, float, float]:
        """BEV AABB as (min_x, min_y, max_x, max_y)."""
        return (self.min_points[0], self.min_points[1], self.max_points[0], self.max_points[1])

    @property
    def z_range(self) -> tuple[float, float]:
        return (self.min_points[2], self.max_points[2])

    def translated(self, new_bottom_center: Vec3) -> "ObjectInstance":
        """Copy with the AABB moved so its bottom-center lands at the given point."""
        cx = (self.min_points[0] + self.max_points[0]) / 2
        cy = (self.min_points[1] + self.max_points[1]) / 2
        dx = new_bottom_center[0] - cx
        dy = new_bottom_center[1] - cy
        dz = new_bottom_center[2] - self.min_points[2]
        shift = (dx, dy, dz)
        return ObjectInstance(
            instance_id=self.instance_id,
            category=self.category,
            scope=self.scope,
            room=self.room,
            position=tuple(p + s for p, s in zip(self.position, shift)),  # type: ignore[arg-type]
            min_points=tuple(p + s for p, s in zip(self.min_points, shift)),  # type: ignore[arg-type]
            max_points=tuple(p + s for p, s in zip(self.max_points, shift)),  # type: ignore[arg-type]
            description=self.description,
            interactive=self.interactive,
            extras=dict(self.extras),
        )


@dataclass(frozen=True)
class RelationEdge:
    """Directed edge stored on ``source``: "<target> <relation> <source>"."""

    source: str
    target: str
    relation: str
    distance: float

    def validate(self) -> None:
        if self.relation not in RELATIONS:
            raise SceneValidationError(
                f"edge {self.source} -> {self.target}: unknown relation {self.relation!r}"
            )
        if not (self.distance >= 0 and self.distance == self.distance and self.distance != float("inf")):
            raise SceneValidationError(
                f"edge {self.source} -> {self.target}: bad distance {self.distance!r}"
            )


@dataclass(frozen=True)
class Region:
    """Named floor area annotated as a BEV polygon."""

    region_id: str
    label: str
    polygon: tuple[tuple[float, float], ...]

    def validate(self) -> None:
        if len(self.polygon) < 3:
            raise SceneValidationError(f"region {self.region_id}: polygon needs >= 3 vertices")
        if _self_intersects(self.polygon):
            raise SceneValidationError(f"region {self.region_id}: polygon self-intersects")


@dataclass(frozen=True)
class AttributeSet:
    """Per-object appearance attributes extracted from caption sentences."""

    entries: tuple[tuple[float, str], ...]  # (weight, attribute text)
    colors: frozenset[str]
    shapes: frozenset[str]


@dataclass(frozen=True)
class Scene:
    """A validated annotated scene: objects, regions, annotated relation edges."""

    scene_id: str
    objects: dict[str, ObjectInstance]
    regions: tuple[Region, ...]
    # source id -> target id -> (relation, distance), verbatim from the file
    annotated_edges: dict[str, dict[str, tuple[str, float]]]
    extras: dict = field(default_factory=dict, compare=False)

    def validate(self) -> None:
        for obj in self.objects.values():
            obj.validate()
        for region in self.regions:
            region.validate()
        for src, targets in self.annotated_edges.items():
            if src not in self.objects:
                raise SceneValidationError(f"annotated edge source {src!r} not in scene")
            for tgt, (rel, dist) in targets.items():
                if tgt not in self.objects:
                    raise SceneValidationError(
                        f"annotated edge target {tgt!r} (from {src!r}) not in scene"
                    )
                RelationEdge(src, tgt, rel, dist).validate()

    def by_category(self, category: str) -> list[str]:
        return [oid for oid, obj in self.objects.items() if obj.category == category]

    @property
    def categories(self) -> set[str]:
        return {obj.category for obj in self.objects.values()}

    def bounds(self) -> tuple[float, float, float, float]:
        """BEV extent covering all region polygons and object footprints."""
        xs: list[float] = []
        ys: list[float] = []
        for region in self.regions:
            for x, y in region.polygon:
                xs.append(x)
                ys.append(y)
        for obj in self.objects.values():
            x0, y0, x1, y1 = obj.footprint
            xs.extend((x0, x1))
            ys.extend((y0, y1))
        if not xs:
            return (0.0, 0.0, 0.0, 0.0)
        return (min(xs), min(ys), max(xs), max(ys))


@dataclass(frozen=True)
class SceneGraph:
    """Relational snapshot at one simulation step."""

    nodes: dict[str, ObjectInstance]
    adjacency: dict[str, tuple[RelationEdge, ...]]
    step_stamp: int = 0

    def validate(self) -> None:
        for src, edges in self.adjacency.items():
            if src not in self.nodes:
                raise SceneValidationError(f"adjacency source {src!r} not a node")
            seen: set[tuple[str, str]] = set()
            for edge in edges:
                if edge.target not in self.nodes:
                    raise SceneValidationError(f"edge target {edge.target!r} not a node")
                key = (edge.target, edge.relation)
                if key in seen:
                    raise SceneValidationError(f"duplicate edge {src} -> {key}")
                seen.add(key)
                edge.validate()

    def edges_of(self, instance_id: str) -> tuple[RelationEdge, ...]:
        return self.adjacency.get(instance_id, ())


def _self_intersects(polygon: tuple[tuple[float, float], ...]) -> bool:
    """True when any two non-adjacent polygon edges properly intersect."""
    n = len(polygon)
    segs = [(polygon[i], polygon[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared vertex with a neighbor is fine
            if _segments_cross(*segs[i], *segs[j]):
                return True
    return False


def _segments_cross(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if abs(v) < 1e-12:
            return 0
        return 1 if v > 0 else -1

    o1, o2 = orient(p1, p2, p3), orient(p1, p2, p4)
    o3, o4 = orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    return False
