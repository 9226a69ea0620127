"""Object-centric question answering and its threshold scoring."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from ..errors import TransportError
from ..taskgen.instructions import room_name
from ..wkm.interfaces import WorldKnowledge

logger = logging.getLogger(__name__)

QA_SCORE_THRESHOLD = 0.6

_ROOM_WORDS = ("room", "where")
_NEAR_WORDS = ("near", "nearby", "next to", "beside", "around")
_LOOK_WORDS = ("look", "appearance", "color", "shape", "describe", "what is it")


@dataclass(frozen=True)
class QAItem:
    question: str
    gold_answer: str
    npc_answer: str
    similarity: float
    score: int  # 0 or 100

    def to_dict(self) -> dict:
        return {
            "question": self.question,
            "gold_answer": self.gold_answer,
            "npc_answer": self.npc_answer,
            "similarity": round(self.similarity, 6),
            "score": self.score,
        }


def answer_qa(question: str, target: str, wkm: WorldKnowledge) -> str:
    """Deterministic keyword-routed answers from the target's record."""
    node = wkm.graph.nodes[target]
    text = question.lower()

    if any(w in text for w in _ROOM_WORDS):
        return f"It is in the {room_name(node.room)}."
    if any(w in text for w in _NEAR_WORDS):
        near = sorted(
            wkm.graph.nodes[e.target].category
            for e in wkm.graph.edges_of(target)
            if e.relation == "near"
        )
        if near:
            return "Nearby there are: " + ", ".join(near) + "."
        return "There is nothing notable nearby."
    if any(w in text for w in _LOOK_WORDS):
        return " ".join(node.description)
    # unroutable or empty question: full description
    return f"It is a {node.category} in the {room_name(node.room)}. " + " ".join(node.description)


def score_item(question: str, gold: str, answer: str, provider) -> QAItem:
    similarity = provider.similarity(gold, answer)
    score = 100 if similarity > QA_SCORE_THRESHOLD else 0
    return QAItem(question, gold, answer, similarity, score)


def score_qa(items: list[QAItem]) -> float:
    """Mean of per-item 0/100 scores."""
    if not items:
        raise ValueError("no QA items to score")
    return sum(item.score for item in items) / len(items)


def evaluate_qa_records(records: list[dict], wkm: WorldKnowledge, provider) -> tuple[list[QAItem], float]:
    """Score dataset records {question, gold_answer, target[, npc_answer]}.

    Items whose similarity call fails are excluded from the mean with a warning.
    """
    items: list[QAItem] = []
    skipped = 0
    for rec in records:
        answer = rec.get("npc_answer") or answer_qa(rec["question"], rec["target"], wkm)
        try:
            items.append(score_item(rec["question"], rec["gold_answer"], answer, provider))
        except TransportError as exc:
            skipped += 1
            logger.warning("similarity provider failed on %r: %s", rec["question"], exc)
    if skipped:
        logger.warning("%d QA items unscored and excluded from the mean", skipped)
    return items, score_qa(items)


def load_qa_dataset(path: str | Path) -> list[dict]:
    return [
        json.loads(line)
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
