from .occupancy import FREE, OBSTACLE, UNDEFINED, OccupancyMap, build_occupancy, load_pgm, save_pgm
from .pathsample import Path, PathPlanner
from .instructions import (
    HttpRewriter,
    gen_instruction_locomanip,
    gen_instruction_objnav,
    gen_instruction_socialnav,
    perturb_utterance,
    speak,
)
from .episodes import (
    SPLITS,
    TASKS,
    Episode,
    EpisodeGenerator,
    PlacementCondition,
    load_episodes,
    save_episodes,
)

__all__ = [
    "FREE", "OBSTACLE", "UNDEFINED", "OccupancyMap", "build_occupancy", "load_pgm", "save_pgm",
    "Path", "PathPlanner",
    "HttpRewriter", "gen_instruction_locomanip", "gen_instruction_objnav",
    "gen_instruction_socialnav", "perturb_utterance", "speak",
    "SPLITS", "TASKS", "Episode", "EpisodeGenerator", "PlacementCondition",
    "load_episodes", "save_episodes",
]
