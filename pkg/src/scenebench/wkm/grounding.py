"""Description-to-instance grounding and the referring utterance template.

Utterances follow "<target object info> <relation> <anchor object info>"; an
edge stored on the anchor as ``(target, relation)`` reads exactly that way, so
grounding restricts to the anchor's edge targets for the named relation and
scores the description against each.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import GroundingFailure
from ..scene.model import ObjectInstance
from .interfaces import WorldKnowledge
from .similarity import tokenize

REL_PHRASES = {
    "near": "near",
    "on": "on",
    "in": "in",
    "above": "above",
    "below": "below",
    "under": "under",
    "out_of": "out of",
}

# Synonyms accepted on the way back in (utterance perturbation uses them).
RELATION_SYNONYMS = {
    "beside": "near",
    "next to": "near",
    "close to": "near",
    "on top of": "on",
    "inside": "in",
    "beneath": "under",
    "underneath": "under",
    "over": "above",
}

_PREFIXES = ("find the ", "find ", "i want to get the ", "i want to get ", "go to the ", "go to ")

CATEGORY_WEIGHT = 1.0
ATTRIBUTE_WEIGHT = 0.5


def canonical_relation(name: str) -> str:
    name = name.strip().lower().replace("_", " ")
    for rel, phrase in REL_PHRASES.items():
        if name == phrase or name == rel:
            return rel
    return RELATION_SYNONYMS.get(name, name)


def describe_object(wkm: WorldKnowledge, object_id: str, with_attribute: bool = True) -> str:
    """Short "the <color> <category>" phrase used on either side of the template."""
    node = wkm.graph.nodes[object_id]
    attrs = wkm.attributes[object_id]
    qualifier = ""
    if with_attribute and attrs.colors:
        qualifier = sorted(attrs.colors)[0] + " "
    return f"the {qualifier}{node.category}"


def render_utterance(wkm: WorldKnowledge, target_id: str, anchor_id: str, relation: str) -> str:
    target_info = describe_object(wkm, target_id)
    anchor_info = describe_object(wkm, anchor_id)
    return f"{target_info} {REL_PHRASES[relation]} {anchor_info}"


def parse_utterance(utterance: str) -> tuple[str, str, str]:
    """Split a template utterance into (target_info, relation_name, anchor_info).

    Accepts the perturbation synonyms and sentence-adjustment prefixes; raises
    GroundingFailure(relation) when no relation phrase is found.
    """
    text = utterance.strip().rstrip(".!?").lower()
    for prefix in _PREFIXES:
        if text.startswith(prefix):
            text = text[len(prefix):]
            text = "the " + text if not text.startswith("the ") else text
            break
    phrases = sorted(
        list(REL_PHRASES.values()) + list(RELATION_SYNONYMS.keys()), key=len, reverse=True
    )
    for phrase in phrases:
        marker = f" {phrase} "
        idx = text.find(marker)
        if idx != -1:
            target_info = text[:idx].strip()
            anchor_info = text[idx + len(marker):].strip()
            return target_info, canonical_relation(phrase), anchor_info
    raise GroundingFailure("relation", f"no relation phrase in {utterance!r}")


@dataclass(frozen=True)
class MatchScore:
    instance_id: str
    score: float


def _score(wkm: WorldKnowledge, info_text: str, obj: ObjectInstance) -> float:
    """Category exact-match plus mean attribute-token overlap."""
    tokens = set(tokenize(info_text))
    score = CATEGORY_WEIGHT if obj.category.lower() in tokens else 0.0
    vocab = set(v.lower() for v in wkm.gen_cfg.color_vocab) | set(
        v.lower() for v in wkm.gen_cfg.shape_vocab
    )
    wanted = tokens & vocab
    if wanted:
        attrs = wkm.attributes[obj.instance_id]
        owned = {a.lower() for a in attrs.colors | attrs.shapes}
        score += ATTRIBUTE_WEIGHT * len(wanted & owned) / len(wanted)
    return score


def _best_match(
    wkm: WorldKnowledge, info_text: str, pool: list[str], stage: str
) -> str:
    if not pool:
        raise GroundingFailure(stage, f"empty candidate pool for {info_text!r}")
    scored = [MatchScore(oid, _score(wkm, info_text, wkm.graph.nodes[oid])) for oid in sorted(pool)]
    best = max(m.score for m in scored)
    winners = [m.instance_id for m in scored if m.score == best]
    if best == 0.0 and len(scored) > 1:
        raise GroundingFailure(stage, f"nothing matches {info_text!r}")
    if len(winners) > 1:
        raise GroundingFailure("ambiguous", f"{info_text!r} ties", ties=winners)
    return winners[0]


def ground(wkm: WorldKnowledge, target_info: str, anchor_info: str, relation_name: str) -> str:
    """Resolve a template description to an instance id.

    The anchor resolves over the whole scene; the target resolves among the
    anchor's edge targets for the named relation, by the same scoring.
    """
    relation = canonical_relation(relation_name)
    anchor = _best_match(wkm, anchor_info, list(wkm.graph.nodes), "anchor")
    neighbors = [e.target for e in wkm.graph.edges_of(anchor) if e.relation == relation]
    if not neighbors:
        raise GroundingFailure(
            "relation", f"{anchor!r} has no {relation!r} neighbor"
        )
    return _best_match(wkm, target_info, neighbors, "ambiguous")


def ground_utterance(wkm: WorldKnowledge, utterance: str) -> str:
    target_info, relation, anchor_info = parse_utterance(utterance)
    return ground(wkm, target_info, anchor_info, relation)
