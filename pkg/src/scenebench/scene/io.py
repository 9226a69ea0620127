"""Scene file reading/writing.

The on-disk form is a UTF-8 JSON document: a top-level map from instance_id to
its annotation record, an optional "scene_id" string, and a "regions" list of
``{region_id, label, polygon}``. Saving is canonical: sorted keys, floats
rounded to 1e-9, so identical scenes serialize byte-identically.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..errors import SceneFormatError, SceneValidationError
from .model import ObjectInstance, Region, Scene

_RESERVED_KEYS = {"regions", "scene_id"}
_RECORD_FIELDS = {
    "instance_id", "category", "scope", "room", "position",
    "min_points", "max_points", "description", "nearby_objects", "interactive",
}


def load_scene(path: str | Path) -> Scene:
    """Parse, validate, and index a scene file. Raises on malformed input."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"), object_pairs_hook=_reject_dup_keys)
    except json.JSONDecodeError as exc:
        raise SceneFormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise SceneFormatError(f"{path}: top level must be a map")
    scene = scene_from_dict(raw, default_scene_id=path.stem)
    scene.validate()
    return scene


def scene_from_dict(raw: dict, default_scene_id: str = "scene") -> Scene:
    scene_id = raw.get("scene_id", default_scene_id)
    if not isinstance(scene_id, str) or not scene_id:
        raise SceneFormatError("scene_id must be a non-empty string", field="scene_id")

    objects: dict[str, ObjectInstance] = {}
    annotated: dict[str, dict[str, tuple[str, float]]] = {}
    extras: dict = {}
    for key, record in raw.items():
        if key in _RESERVED_KEYS:
            continue
        if not isinstance(record, dict):
            extras[key] = record
            continue
        obj, nearby = _parse_record(key, record)
        if obj.instance_id in objects:
            raise SceneValidationError(f"duplicate instance_id {obj.instance_id!r}")
        objects[obj.instance_id] = obj
        if nearby:
            annotated[obj.instance_id] = nearby

    regions = tuple(_parse_region(i, r) for i, r in enumerate(raw.get("regions", [])))
    return Scene(
        scene_id=scene_id,
        objects=objects,
        regions=regions,
        annotated_edges=annotated,
        extras=extras,
    )


def _parse_record(key: str, record: dict) -> tuple[ObjectInstance, dict[str, tuple[str, float]]]:
    def need(field: str):
        if field not in record:
            raise SceneFormatError("missing field", record=key, field=field)
        return record[field]

    instance_id = need("instance_id")
    if instance_id != key:
        raise SceneFormatError(
            f"record key {key!r} != instance_id {instance_id!r}", record=key, field="instance_id"
        )
    nearby_raw = record.get("nearby_objects", {})
    if not isinstance(nearby_raw, dict):
        raise SceneFormatError("nearby_objects must be a map", record=key, field="nearby_objects")
    nearby: dict[str, tuple[str, float]] = {}
    for tgt, pair in nearby_raw.items():
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise SceneFormatError(
                f"nearby entry for {tgt!r} must be [relation, distance]",
                record=key, field="nearby_objects",
            )
        nearby[tgt] = (str(pair[0]), float(pair[1]))

    obj = ObjectInstance(
        instance_id=instance_id,
        category=str(need("category")),
        scope=str(need("scope")),
        room=str(need("room")),
        position=_vec3(need("position"), key, "position"),
        min_points=_vec3(need("min_points"), key, "min_points"),
        max_points=_vec3(need("max_points"), key, "max_points"),
        description=tuple(str(s) for s in need("description")),
        interactive=bool(record.get("interactive", False)),
        extras={k: v for k, v in record.items() if k not in _RECORD_FIELDS},
    )
    return obj, nearby


def _parse_region(index: int, raw) -> Region:
    if not isinstance(raw, dict):
        raise SceneFormatError(f"regions[{index}] must be a map", field="regions")
    try:
        polygon = tuple((float(x), float(y)) for x, y in raw["polygon"])
        return Region(region_id=str(raw["region_id"]), label=str(raw["label"]), polygon=polygon)
    except (KeyError, TypeError, ValueError) as exc:
        raise SceneFormatError(f"regions[{index}]: {exc}", field="regions") from exc


def _vec3(value, record: str, field: str) -> tuple[float, float, float]:
    try:
        x, y, z = (float(v) for v in value)
        return (x, y, z)
    except (TypeError, ValueError) as exc:
        raise SceneFormatError(f"expected 3-vector: {exc}", record=record, field=field) from exc


def scene_to_dict(scene: Scene) -> dict:
    doc: dict = {"scene_id": scene.scene_id}
    for oid, obj in scene.objects.items():
        record: dict = {
            "instance_id": obj.instance_id,
            "category": obj.category,
            "scope": obj.scope,
            "room": obj.room,
            "position": [_canon(v) for v in obj.position],
            "min_points": [_canon(v) for v in obj.min_points],
            "max_points": [_canon(v) for v in obj.max_points],
            "description": list(obj.description),
            "interactive": obj.interactive,
        }
        nearby = scene.annotated_edges.get(oid, {})
        record["nearby_objects"] = {
            tgt: [rel, _canon(dist)] for tgt, (rel, dist) in nearby.items()
        }
        record.update(obj.extras)
        doc[oid] = record
    doc["regions"] = [
        {
            "region_id": r.region_id,
            "label": r.label,
            "polygon": [[_canon(x), _canon(y)] for x, y in r.polygon],
        }
        for r in scene.regions
    ]
    doc.update(scene.extras)
    return doc


def save_scene(scene: Scene, path: str | Path) -> None:
    """Write the canonical form (sorted keys, 1e-9 float precision)."""
    text = json.dumps(scene_to_dict(scene), sort_keys=True, indent=2, ensure_ascii=False)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _canon(value: float) -> float:
    return round(float(value), 9)


def _reject_dup_keys(pairs):
    seen: dict = {}
    for key, value in pairs:
        if key in seen:
            raise SceneValidationError(f"duplicate key {key!r} in scene file")
        seen[key] = value
    return seen
