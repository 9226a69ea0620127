from .model import (
    RELATIONS,
    AttributeSet,
    ObjectInstance,
    Region,
    RelationEdge,
    Scene,
    SceneGraph,
)
from .io import load_scene, save_scene, scene_to_dict
from .relations import derive_relations, min_aabb_gap, relation_between
from .attributes import extract_attributes
from .regions import assign_room, point_in_polygon

__all__ = [
    "RELATIONS",
    "AttributeSet",
    "ObjectInstance",
    "Region",
    "RelationEdge",
    "Scene",
    "SceneGraph",
    "load_scene",
    "save_scene",
    "scene_to_dict",
    "derive_relations",
    "min_aabb_gap",
    "relation_between",
    "extract_attributes",
    "assign_room",
    "point_in_polygon",
]
