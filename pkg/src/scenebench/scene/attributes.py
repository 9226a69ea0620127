"""Color/shape attribute extraction from caption sentences by exact text match."""

from __future__ import annotations

import re
from collections.abc import Iterable

from ..errors import ContractViolation
from .model import AttributeSet, ObjectInstance


def _whole_word(token: str, text: str) -> bool:
    return re.search(rf"(?<!\w){re.escape(token.lower())}(?!\w)", text.lower()) is not None


def extract_attributes(
    obj: ObjectInstance, color_vocab: Iterable[str], shape_vocab: Iterable[str]
) -> AttributeSet:
    """Match vocabulary tokens (case-insensitive, whole-word) in the captions.

    Entries carry one (weight, sentence) pair per caption sentence; the weight
    is uniform since captions are unranked.
    """
    colors = set(color_vocab)
    shapes = set(shape_vocab)
    if not colors or not shapes:
        raise ContractViolation("color and shape vocabularies must be non-empty")
    text = " ".join(obj.description)
    return AttributeSet(
        entries=tuple((1.0, sentence) for sentence in obj.description),
        colors=frozenset(c for c in colors if _whole_word(c, text)),
        shapes=frozenset(s for s in shapes if _whole_word(s, text)),
    )
