from .core import (
    EpisodeResult,
    Report,
    aggregate,
    ecr,
    load_results,
    save_results,
    scr,
    spl,
)
from .conditions import check_conditions, condition_satisfied, make_checker

__all__ = [
    "EpisodeResult",
    "Report",
    "aggregate",
    "ecr",
    "load_results",
    "save_results",
    "scr",
    "spl",
    "check_conditions",
    "condition_satisfied",
    "make_checker",
]
