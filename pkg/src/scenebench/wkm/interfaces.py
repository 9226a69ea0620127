"""The world knowledge manager: difference search, info lookup, and filtering.

These three interfaces drive referring-expression generation and NPC dialogue.
``find_diff`` walks a fixed priority (category, then room, then spatial
relations, then appearance) and returns the first level at which a target
differs from its fellow candidates; ``get_info`` reads that level off the
target; ``filter`` keeps the candidates satisfying the resulting condition.
Iterating the three shrinks any candidate set to the target.

All map iteration is over sorted keys so outputs are reproducible; appearance
sampling is the only stateful part and lives in :class:`KnowledgeSession`.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..config import GenerationConfig
from ..errors import ContractViolation, GenerationFailure, LookupError_
from ..scene.attributes import extract_attributes
from ..scene.model import AttributeSet, SceneGraph

logger = logging.getLogger(__name__)

NOTHING = "nothing"
APPEARANCE_SIM_THRESHOLD = 0.9


@dataclass(frozen=True)
class Difference:
    """One discriminating level: its type and the observed difference payload."""

    diff_type: str  # category | room | relation | appearance
    payload: frozenset[str] | tuple[str, str] | None

    def __post_init__(self):
        ok = (
            (self.diff_type in ("category", "room") and isinstance(self.payload, frozenset))
            or (self.diff_type == "relation" and isinstance(self.payload, tuple))
            or (self.diff_type == "appearance" and self.payload is None)
        )
        if not ok:
            raise ContractViolation(f"payload shape does not match diff_type {self.diff_type!r}")


@dataclass(frozen=True)
class InfoCondition:
    """A filterable fact about an object; at least one field is set."""

    category: str | None = None
    room: str | None = None
    relation: tuple[tuple[bool, str, str], ...] | None = None
    appearance: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.category is None and self.room is None and self.relation is None and self.appearance is None:
            raise ContractViolation("InfoCondition must set at least one field")

    def to_dict(self) -> dict:
        out: dict = {}
        if self.category is not None:
            out["category"] = self.category
        if self.room is not None:
            out["room"] = self.room
        if self.relation is not None:
            out["relation"] = [[has, rel, cate] for has, rel, cate in self.relation]
        if self.appearance is not None:
            out["appearance"] = list(self.appearance)
        return out

    @staticmethod
    def from_dict(raw: dict) -> "InfoCondition":
        relation = raw.get("relation")
        if relation is not None:
            relation = tuple((bool(h), str(r), str(c)) for h, r, c in relation)
        appearance = raw.get("appearance")
        if appearance is not None:
            appearance = tuple(str(a) for a in appearance)
        return InfoCondition(
            category=raw.get("category"),
            room=raw.get("room"),
            relation=relation,
            appearance=appearance,
        )


class WorldKnowledge:
    """Query surface over one immutable scene graph snapshot."""

    def __init__(
        self,
        graph: SceneGraph,
        provider=None,
        attributes: dict[str, AttributeSet] | None = None,
        gen_cfg: GenerationConfig | None = None,
    ):
        from .similarity import default_provider

        self.graph = graph
        self.provider = provider or default_provider()
        cfg = gen_cfg or GenerationConfig()
        self.gen_cfg = cfg
        self.attributes = attributes or {
            oid: extract_attributes(obj, cfg.color_vocab, cfg.shape_vocab)
            for oid, obj in graph.nodes.items()
        }

    # -- relation bookkeeping ------------------------------------------------

    def _relation_sets(self, object_id: str) -> dict[str, Counter]:
        """Per relation type, how many neighbors of each category the object has.

        "near" is always present (possibly empty) so a missing-near difference
        is never reported as a nothing-case.
        """
        sets: dict[str, Counter] = {"near": Counter()}
        for edge in self.graph.edges_of(object_id):
            sets.setdefault(edge.relation, Counter())[self.graph.nodes[edge.target].category] += 1
        return sets

    # -- the three data interfaces -------------------------------------------

    def find_diff(self, target: str, candidates: set[str] | list[str]) -> Difference:
        """First level of the category > room > relation > appearance priority
        at which the target differs from at least one other candidate."""
        cand_ids = sorted(set(candidates))
        if target not in cand_ids:
            raise ContractViolation(f"target {target!r} not among candidates")
        if len(cand_ids) < 2:
            raise ContractViolation("find_diff needs at least two candidates")

        categories: set[str] = set()
        rooms: set[str] = set()
        relations: dict[str, list[Counter]] = {}
        current_relation: dict[str, Counter] = {}
        for oid in cand_ids:
            node = self.graph.nodes[oid]
            categories.add(node.category)
            rooms.add(node.room)
            rel_sets = self._relation_sets(oid)
            for rel_type, counter in rel_sets.items():
                relations.setdefault(rel_type, []).append(counter)
            if oid == target:
                current_relation = rel_sets

        if len(categories) > 1:
            return Difference("category", frozenset(categories))
        if len(rooms) > 1:
            return Difference("room", frozenset(rooms))

        for rel_type in sorted(relations):
            per_candidate = relations[rel_type]
            per_candidate = per_candidate + [Counter()] * (len(cand_ids) - len(per_candidate))
            if rel_type not in current_relation:
                return Difference("relation", (rel_type, NOTHING))
            target_counter = current_relation[rel_type]
            for counter in per_candidate:
                for cate in sorted(target_counter):
                    if cate not in counter:
                        return Difference("relation", (rel_type, cate))

        return Difference("appearance", None)

    def filter(self, candidates: set[str] | list[str], condition: InfoCondition) -> set[str]:
        """Subset of candidates meeting every set field of the condition."""
        result: set[str] = set()
        for oid in sorted(set(candidates)):
            if oid not in self.graph.nodes:
                logger.warning("filter: unknown candidate %r skipped", oid)
                continue
            if self._meets(oid, condition):
                result.add(oid)
        return result

    def _meets(self, oid: str, condition: InfoCondition) -> bool:
        node = self.graph.nodes[oid]
        if condition.category is not None and node.category != condition.category:
            return False
        if condition.room is not None and node.room != condition.room:
            return False
        if condition.relation is not None:
            edges = self.graph.edges_of(oid)
            rel_types = {e.relation for e in edges}
            for has, rel_a, cate_a in condition.relation:
                if cate_a == NOTHING:
                    # (True, rel, nothing) keeps objects with no rel edges;
                    # (False, rel, nothing) keeps objects with some rel edge.
                    if has == (rel_a in rel_types):
                        return False
                else:
                    matched = any(
                        e.relation == rel_a and self.graph.nodes[e.target].category == cate_a
                        for e in edges
                    )
                    if matched != has:
                        return False
        if condition.appearance is not None:
            entries = self.attributes[oid].entries
            for wanted in condition.appearance:
                if not any(
                    self.provider.similarity(wanted, text) > APPEARANCE_SIM_THRESHOLD
                    for _, text in entries
                ):
                    return False
        return True

    def similarity(self, a: str, b: str) -> float:
        return self.provider.similarity(a, b)

    def session(self, seed: int = 0) -> "KnowledgeSession":
        return KnowledgeSession(self, seed)


class KnowledgeSession:
    """Per-dialogue/per-episode state: the appearance attributes already told."""

    def __init__(self, wkm: WorldKnowledge, seed: int = 0):
        self.wkm = wkm
        self.sampled: set[str] = set()
        self.rng = np.random.default_rng(seed)

    def reset(self, seed: int | None = None) -> None:
        self.sampled.clear()
        if seed is not None:
            self.rng = np.random.default_rng(seed)

    # convenience passthroughs so a session exposes the full interface
    def find_diff(self, target: str, candidates) -> Difference:
        return self.wkm.find_diff(target, candidates)

    def filter(self, candidates, condition: InfoCondition) -> set[str]:
        return self.wkm.filter(candidates, condition)

    def get_info(self, object_id: str, diff: Difference) -> InfoCondition:
        """Read the requested difference level off one object."""
        graph = self.wkm.graph
        if object_id not in graph.nodes:
            raise LookupError_(f"unknown object {object_id!r}")
        node = graph.nodes[object_id]

        if diff.diff_type == "category":
            return InfoCondition(category=node.category)
        if diff.diff_type == "room":
            return InfoCondition(room=node.room)
        if diff.diff_type == "relation":
            rel_type, wanted_cate = diff.payload  # type: ignore[misc]
            edges = graph.edges_of(object_id)
            rel_types = {e.relation for e in edges}
            if wanted_cate == NOTHING:
                # has the relation type at all -> it is false that it has nothing
                has_nothing = rel_type not in rel_types
                return InfoCondition(relation=((has_nothing, rel_type, NOTHING),))
            matched = any(
                e.relation == rel_type and graph.nodes[e.target].category == wanted_cate
                for e in edges
            )
            return InfoCondition(relation=((matched, rel_type, wanted_cate),))

        # appearance: disclose one caption attribute not yet told this session
        entries = self.wkm.attributes[object_id].entries
        unsampled = [text for _, text in entries if text not in self.sampled]
        if not unsampled:
            raise GenerationFailure(
                f"appearance attributes of {object_id!r} exhausted with candidates remaining"
            )
        attr = unsampled[int(self.rng.integers(len(unsampled)))]
        self.sampled.add(attr)
        return InfoCondition(appearance=(attr,))
