from .session import MAX_ROUNDS, REFUSAL, DialogueSession, Message, handle_message, open_session
from .qa import (
    QA_SCORE_THRESHOLD,
    QAItem,
    answer_qa,
    evaluate_qa_records,
    load_qa_dataset,
    score_item,
    score_qa,
)

__all__ = [
    "MAX_ROUNDS",
    "REFUSAL",
    "DialogueSession",
    "Message",
    "handle_message",
    "open_session",
    "QA_SCORE_THRESHOLD",
    "QAItem",
    "answer_qa",
    "evaluate_qa_records",
    "load_qa_dataset",
    "score_item",
    "score_qa",
]
