"""Instruction generation: template speaking, the three per-task procedures,
and rule-based utterance perturbation.

Instructions are rendered deterministically from the collected conditions; an
optional rewriter may polish the text, but the machine-readable constraint
trace is what evaluation replays.
"""

from __future__ import annotations

import logging
import os
from collections.abc import Callable

import httpx
import numpy as np

from ..config import GenerationConfig
from ..errors import ContractViolation, GenerationFailure
from ..wkm.grounding import REL_PHRASES
from ..wkm.interfaces import NOTHING, InfoCondition, KnowledgeSession

logger = logging.getLogger(__name__)

ENV_REWRITER_URL = "SCENEBENCH_LLM_URL"

Rewriter = Callable[[str], str]


def room_name(room: str) -> str:
    return room.split("/", 1)[1] if "/" in room else room


def _relation_clause(has: bool, rel: str, cate: str) -> str:
    phrase = REL_PHRASES.get(rel, rel)
    if cate == NOTHING:
        return f"with {'nothing' if has else 'something'} {phrase} it"
    if rel == "near":
        return f"{'near' if has else 'not near'} a {cate}"
    return f"with {'a' if has else 'no'} {cate} {phrase} it"


def speak(
    infos: list[InfoCondition],
    prefix: str | None = None,
    rewriter: Rewriter | None = None,
) -> str:
    """Render a noun phrase from the collected conditions, in trace order."""
    base = prefix
    clauses: list[str] = []
    looks: list[str] = []
    for info in infos:
        if info is None:
            continue
        if info.category is not None and base is None:
            base = f"the {info.category}"
        if info.room is not None:
            clauses.append(f"in the {room_name(info.room)}")
        if info.relation is not None:
            clauses.extend(_relation_clause(*triple) for triple in info.relation)
        if info.appearance is not None:
            looks.extend(info.appearance)
    if base is None:
        raise ContractViolation("speak needs a prefix or a category condition")
    text = base
    if clauses:
        text += " " + ", ".join(clauses)
    if looks:
        text += "; it matches: " + " ".join(looks)
    if rewriter is not None:
        try:
            return rewriter(text)
        except Exception as exc:  # the template output is the fallback
            logger.warning("rewriter failed (%s); using template output", exc)
    return text


class HttpRewriter:
    """Optional fluency rewriter backed by an external endpoint."""

    def __init__(self, url: str, timeout: float = 10.0):
        self.url = url
        self.timeout = timeout

    @classmethod
    def from_env(cls) -> "HttpRewriter | None":
        url = os.environ.get(ENV_REWRITER_URL)
        return cls(url) if url else None

    def __call__(self, text: str) -> str:
        resp = httpx.post(self.url, json={"text": text}, timeout=self.timeout)
        resp.raise_for_status()
        return str(resp.json()["text"])


def gen_instruction_objnav(
    session: KnowledgeSession,
    candidates: set[str],
    target: str,
    rewriter: Rewriter | None = None,
) -> tuple[str, list[InfoCondition]]:
    """Iterate find_diff/get_info/filter until only the target remains."""
    wkm = session.wkm
    if target not in candidates:
        raise ContractViolation(f"target {target!r} not among candidates")
    cands = set(candidates)
    infos: list[InfoCondition] = []
    while len(cands) > 1:
        diff = wkm.find_diff(target, cands)
        info = session.get_info(target, diff)  # raises on appearance exhaustion
        cands = wkm.filter(cands, info)
        infos.append(info)
    if cands != {target}:
        raise GenerationFailure(f"disambiguation converged to {cands} instead of {{{target}}}")
    category = wkm.graph.nodes[target].category
    instruction = speak(infos, prefix=f"the {category}", rewriter=rewriter)
    return f"Find {instruction}.", infos


def gen_instruction_socialnav(
    session: KnowledgeSession,
    candidates: set[str],
    target: str,
    rng: np.random.Generator,
    round_cap: int = 4,
    rewriter: Rewriter | None = None,
) -> tuple[str, list[InfoCondition]]:
    """Disclose only the last attribute of a random 1..(cap-1) round prefix.

    The full disambiguating trace is still produced and returned; the NPC
    session uses it to answer follow-up questions during the episode.
    """
    wkm = session.wkm
    category = wkm.graph.nodes[target].category
    _, full_trace = gen_instruction_objnav(session, candidates, target)
    if not full_trace:  # already unambiguous: instruction from category alone
        return f"Find {speak([], prefix=f'the {category}', rewriter=rewriter)}.", full_trace
    rounds = int(rng.integers(1, max(round_cap, 2)))
    disclosed = full_trace[:rounds]
    instruction = speak([disclosed[-1]], prefix=f"the {category}", rewriter=rewriter)
    return f"Find {instruction}.", full_trace


def gen_instruction_locomanip(
    session: KnowledgeSession,
    candidates: set[str],
    source: str,
    conditions: list,
    rng: np.random.Generator,
    cfg: GenerationConfig | None = None,
    rewriter: Rewriter | None = None,
) -> tuple[str, list[InfoCondition], list]:
    """Compose pick-up and per-condition placement clauses.

    Room and relation attributes of each receptacle description are dropped
    with the configured probability (multiple placements may then qualify);
    the surviving attributes are merged into the condition's machine-readable
    receptacle spec.
    """
    from .episodes import PlacementCondition

    cfg = cfg or GenerationConfig()
    wkm = session.wkm
    nav_phrase, source_trace = gen_instruction_objnav(session, candidates, source)
    source_desc = nav_phrase[len("Find "):-1]

    rendered: list[str] = []
    updated: list[PlacementCondition] = []
    for cond in conditions:
        witness = cond.receptacle_witness
        wit_category = wkm.graph.nodes[witness].category
        wit_cands = {
            oid for oid, node in wkm.graph.nodes.items() if node.category == wit_category
        }
        temp = set(wit_cands)
        kept: list[InfoCondition] = []
        while len(temp) > 1:
            diff = wkm.find_diff(witness, temp)
            info = session.get_info(witness, diff)
            temp = wkm.filter(temp, info)
            droppable = info.room is not None or info.relation is not None
            if droppable and rng.random() < cfg.attribute_drop_prob:
                continue  # dropped: instruction stays coarse, solutions multiply
            kept.append(info)
        spec = _merge_spec(wit_category, kept)
        updated.append(
            PlacementCondition(relation=cond.relation, receptacle_spec=spec,
                               receptacle_witness=witness)
        )
        phrase = speak(kept, prefix=f"the {wit_category}", rewriter=rewriter)
        rel_word = "on" if cond.relation == "on" else "near"
        rendered.append(f"{rel_word} {phrase}")

    instruction = f"Pick up {source_desc} and place it {' and '.join(rendered)}."
    return instruction, source_trace, updated


def _merge_spec(category: str, infos: list[InfoCondition]) -> InfoCondition:
    room = None
    relation: list[tuple[bool, str, str]] = []
    appearance: list[str] = []
    for info in infos:
        if info.room is not None:
            room = info.room
        if info.relation is not None:
            relation.extend(info.relation)
        if info.appearance is not None:
            appearance.extend(info.appearance)
    return InfoCondition(
        category=category,
        room=room,
        relation=tuple(relation) or None,
        appearance=tuple(appearance) or None,
    )


# -- utterance perturbation -----------------------------------------------------

_SYNONYM_CHOICES = {
    "near": ["beside", "next to"],
    "on": ["on top of"],
    "under": ["beneath", "underneath"],
    "above": ["over"],
    "in": ["inside"],
}

_ADJUST_PREFIXES = ["find ", "i want to get "]


def perturb_utterance(
    utterance: str,
    rng: np.random.Generator,
    p_hide_category: float = 0.0,
    p_relation: float = 0.5,
    p_adjust: float = 0.5,
) -> str:
    """Apply the three rule classes to a template utterance.

    Category hiding replaces the head noun of the target phrase with "object";
    relation replacement swaps in a synonym; sentence adjustment prepends a
    natural-instruction opener. Each class fires with its own probability.
    """
    from ..wkm.grounding import parse_utterance

    target_info, relation, anchor_info = parse_utterance(utterance)
    phrase = REL_PHRASES[relation]

    if rng.random() < p_hide_category:
        words = target_info.split()
        words[-1] = "object"
        target_info = " ".join(words)
    if rng.random() < p_relation and relation in _SYNONYM_CHOICES:
        options = _SYNONYM_CHOICES[relation]
        phrase = options[int(rng.integers(len(options)))]
    text = f"{target_info} {phrase} {anchor_info}"
    if rng.random() < p_adjust:
        text = _ADJUST_PREFIXES[int(rng.integers(len(_ADJUST_PREFIXES)))] + text
    return text
