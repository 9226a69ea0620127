"""Placement-condition checking with the same relation program as generation.

A condition is satisfied when ANY object matching its receptacle spec stands
in the required relation to the placed object, so instructions with dropped
attributes admit multiple solutions.
"""

from __future__ import annotations

from ..config import GenerationConfig, RelationConfig
from ..scene.model import ObjectInstance
from ..scene.relations import min_aabb_gap, relation_between
from ..wkm.interfaces import WorldKnowledge


def condition_satisfied(
    placed: ObjectInstance,
    condition,
    wkm: WorldKnowledge,
    relation_cfg: RelationConfig | None = None,
    pair_distance: float | None = None,
) -> bool:
    relation_cfg = relation_cfg or RelationConfig()
    if pair_distance is None:
        pair_distance = GenerationConfig().condition_pair_distance
    pool = [oid for oid in wkm.graph.nodes if oid != placed.instance_id]
    receptacles = wkm.filter(pool, condition.receptacle_spec)
    for oid in sorted(receptacles):
        receptacle = wkm.graph.nodes[oid]
        if condition.relation == "on":
            derived = relation_between(receptacle, placed, relation_cfg)
            if derived is not None and derived[0] == "on":
                return True
        else:  # nearby: within the pairing distance used at sampling time
            if min_aabb_gap(placed, receptacle) <= pair_distance:
                return True
    return False


def check_conditions(
    placed: ObjectInstance | None,
    conditions,
    wkm: WorldKnowledge,
    relation_cfg: RelationConfig | None = None,
    pair_distance: float | None = None,
) -> list[bool]:
    """Per-condition satisfaction flags; an unplaced object satisfies nothing."""
    if placed is None:
        return [False] * len(conditions)
    return [
        condition_satisfied(placed, cond, wkm, relation_cfg, pair_distance)
        for cond in conditions
    ]


def make_checker(wkm: WorldKnowledge, relation_cfg: RelationConfig | None = None,
                 pair_distance: float | None = None):
    """Bind the scene knowledge into a (placed, conditions) -> flags callable."""

    def checker(placed: ObjectInstance, conditions) -> list[bool]:
        return check_conditions(placed, conditions, wkm, relation_cfg, pair_distance)

    return checker
