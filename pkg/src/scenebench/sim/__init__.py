from .harness import (
    MOVE_KINDS,
    TURN_KINDS,
    Action,
    LocalPatch,
    Observation,
    RobotState,
    Simulator,
    StepOutcome,
    VisibleObject,
    legal_actions,
)
from .trajlog import replay_log, save_log

__all__ = [
    "MOVE_KINDS",
    "TURN_KINDS",
    "Action",
    "LocalPatch",
    "Observation",
    "RobotState",
    "Simulator",
    "StepOutcome",
    "VisibleObject",
    "legal_actions",
    "replay_log",
    "save_log",
]
