from .interfaces import (
    APPEARANCE_SIM_THRESHOLD,
    NOTHING,
    Difference,
    InfoCondition,
    KnowledgeSession,
    WorldKnowledge,
)
from .grounding import (
    REL_PHRASES,
    RELATION_SYNONYMS,
    canonical_relation,
    describe_object,
    ground,
    ground_utterance,
    parse_utterance,
    render_utterance,
)
from .similarity import HttpEmbeddingProvider, TokenCosineProvider, default_provider, tokenize

__all__ = [
    "APPEARANCE_SIM_THRESHOLD",
    "NOTHING",
    "Difference",
    "InfoCondition",
    "KnowledgeSession",
    "WorldKnowledge",
    "REL_PHRASES",
    "RELATION_SYNONYMS",
    "canonical_relation",
    "describe_object",
    "ground",
    "ground_utterance",
    "parse_utterance",
    "render_utterance",
    "HttpEmbeddingProvider",
    "TokenCosineProvider",
    "default_provider",
    "tokenize",
]
