"""NPC dialogue sessions for Social Loco-Navigation.

Each answered round discloses the next difference level for the episode
target and shrinks the candidate set; the candidate-set sizes feed the
excluded-candidate-rate metric. Three rounds maximum, then refusals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import ContractViolation, GenerationFailure
from ..taskgen.episodes import Episode
from ..taskgen.instructions import Rewriter, speak
from ..wkm.interfaces import InfoCondition, KnowledgeSession, WorldKnowledge

MAX_ROUNDS = 3

REFUSAL = "I have already told you everything I can within our three questions."


@dataclass
class Message:
    speaker: str  # "agent" | "npc"
    text: str
    step: int = 0

    def to_dict(self) -> dict:
        return {"speaker": self.speaker, "text": self.text, "step": self.step}


@dataclass
class DialogueSession:
    episode_id: str
    target: str
    category: str
    knowledge: KnowledgeSession
    memory: list[Message] = field(default_factory=list)
    remaining_rounds: int = MAX_ROUNDS
    candidate_history: list[set[str]] = field(default_factory=list)
    disclosed: list[InfoCondition] = field(default_factory=list)

    @property
    def candidates(self) -> set[str]:
        return self.candidate_history[-1]

    def transcript(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "messages": [m.to_dict() for m in self.memory],
            "candidate_counts": [len(c) for c in self.candidate_history],
            "disclosed": [c.to_dict() for c in self.disclosed],
            "remaining_rounds": self.remaining_rounds,
        }


def open_session(episode: Episode, wkm: WorldKnowledge, seed: int = 0) -> DialogueSession:
    """Start a dialogue: candidates are the target's whole category."""
    if episode.task != "social_loconav":
        raise ContractViolation(f"dialogue sessions are for social episodes, got {episode.task}")
    target = episode.target
    category = wkm.graph.nodes[target].category
    objects_0 = {oid for oid, node in wkm.graph.nodes.items() if node.category == category}
    return DialogueSession(
        episode_id=episode.episode_id,
        target=target,
        category=category,
        knowledge=wkm.session(seed=seed),
        candidate_history=[objects_0],
    )


def handle_message(
    session: DialogueSession,
    question: str,
    step: int = 0,
    rewriter: Rewriter | None = None,
) -> str:
    """Disclose the next condition (question content does not steer it)."""
    session.memory.append(Message("agent", question, step))

    if session.remaining_rounds <= 0:
        reply = REFUSAL
        session.memory.append(Message("npc", reply, step))
        return reply

    wkm = session.knowledge.wkm
    candidates = session.candidates
    if len(candidates) <= 1:
        # already disambiguated: restate, no further filtering; the question
        # still consumes one of the three rounds
        phrase = speak(session.disclosed, prefix=f"the {session.category}")
        reply = f"You already have everything: it is {phrase}."
        session.memory.append(Message("npc", reply, step))
        session.remaining_rounds -= 1
        return reply

    diff = wkm.find_diff(session.target, candidates)
    try:
        info = session.knowledge.get_info(session.target, diff)
    except GenerationFailure:
        reply = "I cannot narrow it down further."
        session.memory.append(Message("npc", reply, step))
        session.remaining_rounds -= 1
        return reply
    remaining = wkm.filter(candidates, info)

    session.disclosed.append(info)
    session.candidate_history.append(remaining)
    session.remaining_rounds -= 1

    phrase = speak([info], prefix=f"the {session.category}")
    reply = f"It is {phrase}."
    if rewriter is not None:
        try:
            reply = rewriter(reply)
        except Exception:
            pass  # recorded condition is authoritative; template reply stands
    session.memory.append(Message("npc", reply, step))
    return reply
