from .memory import BevMemory, Candidate
from .modular import (
    REASONING_PROMPT,
    SPEAKING_PROMPT,
    HttpDecisionBackend,
    ModularAgent,
    ScriptedBackend,
)
from .policies import MotionPrimitive, OracleAgent, RandomAgent
from .rrt import GridWorld, path_blocked, rrt_star

__all__ = [
    "BevMemory",
    "Candidate",
    "REASONING_PROMPT",
    "SPEAKING_PROMPT",
    "HttpDecisionBackend",
    "ModularAgent",
    "ScriptedBackend",
    "MotionPrimitive",
    "OracleAgent",
    "RandomAgent",
    "GridWorld",
    "path_blocked",
    "rrt_star",
]
