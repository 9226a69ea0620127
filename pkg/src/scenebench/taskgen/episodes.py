"""Episode sampling for the three benchmarks.

An episode bundles a start pose, a target (plus placement conditions for
pick-and-place), the generated instruction, the collision-free ground-truth
path, and the constraint trace that certifies the target is uniquely
identified. Generation is a pure function of (scene, task, seed).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path as FilePath

import numpy as np

from ..config import ToolkitConfig
from ..errors import GenerationFailure, TargetExcluded
from ..scene.model import Scene
from ..scene.relations import derive_relations, min_aabb_gap
from ..wkm.interfaces import InfoCondition, WorldKnowledge
from .instructions import (
    gen_instruction_locomanip,
    gen_instruction_objnav,
    gen_instruction_socialnav,
)
from .occupancy import build_occupancy
from .pathsample import Path, PathPlanner

TASKS = ("object_loconav", "social_loconav", "loco_manip")
SPLITS = ("validation", "test")

_PATTERNS = (("on",), ("nearby",), ("nearby", "nearby"), ("on", "nearby"))


@dataclass(frozen=True)
class PlacementCondition:
    relation: str  # "on" | "nearby"
    receptacle_spec: InfoCondition
    receptacle_witness: str

    def to_dict(self) -> dict:
        return {
            "relation": self.relation,
            "receptacle_spec": self.receptacle_spec.to_dict(),
            "receptacle_witness": self.receptacle_witness,
        }

    @staticmethod
    def from_dict(raw: dict) -> "PlacementCondition":
        return PlacementCondition(
            relation=raw["relation"],
            receptacle_spec=InfoCondition.from_dict(raw["receptacle_spec"]),
            receptacle_witness=raw["receptacle_witness"],
        )


@dataclass(frozen=True)
class Episode:
    episode_id: str
    task: str
    scene_id: str
    start_pose: tuple[float, float, float]  # x, y, heading (radians)
    target: str
    instruction: str
    gt_path: Path
    constraint_trace: tuple[InfoCondition, ...]
    conditions: tuple[PlacementCondition, ...] = ()
    split: str = "validation"

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "task": self.task,
            "scene_id": self.scene_id,
            "start_pose": list(self.start_pose),
            "target": self.target,
            "instruction": self.instruction,
            "gt_path": self.gt_path.to_dict(),
            "constraint_trace": [c.to_dict() for c in self.constraint_trace],
            "conditions": [c.to_dict() for c in self.conditions],
            "split": self.split,
        }

    @staticmethod
    def from_dict(raw: dict) -> "Episode":
        return Episode(
            episode_id=raw["episode_id"],
            task=raw["task"],
            scene_id=raw["scene_id"],
            start_pose=tuple(float(v) for v in raw["start_pose"]),
            target=raw["target"],
            instruction=raw["instruction"],
            gt_path=Path.from_dict(raw["gt_path"]),
            constraint_trace=tuple(InfoCondition.from_dict(c) for c in raw["constraint_trace"]),
            conditions=tuple(PlacementCondition.from_dict(c) for c in raw["conditions"]),
            split=raw["split"],
        )


def save_episodes(episodes: list[Episode], path: str | FilePath) -> None:
    lines = [json.dumps(e.to_dict(), sort_keys=True) for e in episodes]
    FilePath(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_episodes(path: str | FilePath) -> list[Episode]:
    episodes = []
    for line in FilePath(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            episodes.append(Episode.from_dict(json.loads(line)))
    return episodes


class EpisodeGenerator:
    """Seeds in, episodes out, for one scene."""

    def __init__(self, scene: Scene, config: ToolkitConfig | None = None, provider=None):
        self.scene = scene
        self.config = config or ToolkitConfig()
        self.graph = derive_relations(scene, self.config.relation)
        self.wkm = WorldKnowledge(self.graph, provider=provider, gen_cfg=self.config.generation)
        self.occupancy = build_occupancy(scene, self.config.occupancy)
        self.planner = PathPlanner(self.occupancy, self.config.path)
        self._pathable: list[str] | None = None

    # -- target pools -----------------------------------------------------------

    def pathable_targets(self) -> list[str]:
        """Non-structural objects with a reachable approach cell and a start
        band inside the configured length bounds."""
        if self._pathable is None:
            cfg = self.config.path
            pool = []
            for oid in sorted(self.scene.objects):
                obj = self.scene.objects[oid]
                if obj.scope == "Structure":
                    continue
                try:
                    goal = self.planner.approach_cell(obj)
                except TargetExcluded:
                    continue
                dist, _ = self.planner.field_for(goal)
                band = (dist >= cfg.min_length) & (dist <= cfg.max_length)
                if band.any():
                    pool.append(oid)
            self._pathable = pool
        return self._pathable

    def handheld_sources(self) -> list[str]:
        allowed = set(self.config.generation.handheld_categories)
        return [oid for oid in self.pathable_targets()
                if self.scene.objects[oid].category in allowed]

    # -- condition sampling -------------------------------------------------------

    def sample_conditions(self, source: str, rng: np.random.Generator,
                          max_attempts: int = 40) -> list[PlacementCondition]:
        """Draw one of the four placement patterns with receptacle-typed "on"
        witnesses; paired witnesses must sit within the configured distance."""
        gen_cfg = self.config.generation
        receptacles = sorted(
            oid for oid, obj in self.scene.objects.items()
            if obj.category in gen_cfg.receptacle_categories and oid != source
        )
        nearby_pool = sorted(
            oid for oid, obj in self.scene.objects.items()
            if obj.scope != "Structure" and oid != source
        )
        if not receptacles:
            raise GenerationFailure("scene has no receptacle-category object")

        for _ in range(max_attempts):
            pattern = _PATTERNS[int(rng.integers(len(_PATTERNS)))]
            witnesses = []
            for relation in pattern:
                pool = receptacles if relation == "on" else nearby_pool
                witnesses.append(pool[int(rng.integers(len(pool)))])
            if len(pattern) == 2:
                a = self.scene.objects[witnesses[0]]
                b = self.scene.objects[witnesses[1]]
                if witnesses[0] == witnesses[1]:
                    continue
                if min_aabb_gap(a, b) > gen_cfg.condition_pair_distance:
                    continue  # witnesses too far apart: redraw
            return [
                PlacementCondition(
                    relation=rel,
                    receptacle_spec=InfoCondition(
                        category=self.scene.objects[wit].category
                    ),
                    receptacle_witness=wit,
                )
                for rel, wit in zip(pattern, witnesses)
            ]
        raise GenerationFailure("no placement pattern satisfiable on this scene")

    # -- episode generation ----------------------------------------------------------

    def generate(self, task: str, rng: np.random.Generator, index: int,
                 split: str = "validation") -> Episode:
        if task not in TASKS:
            raise GenerationFailure(f"unknown task {task!r}")
        if task == "loco_manip":
            pool = self.handheld_sources()
            if not pool:
                raise GenerationFailure("no pathable handheld-category object")
        else:
            pool = self.pathable_targets()
            if not pool:
                raise TargetExcluded("no pathable target in scene")

        target = pool[int(rng.integers(len(pool)))]
        gt_path = self.planner.sample_path(self.scene.objects[target], rng)
        session = self.wkm.session(seed=int(rng.integers(2**31)))
        category = self.scene.objects[target].category
        candidates = set(self.scene.by_category(category))

        conditions: list[PlacementCondition] = []
        if task == "object_loconav":
            instruction, trace = gen_instruction_objnav(session, candidates, target)
        elif task == "social_loconav":
            instruction, trace = gen_instruction_socialnav(
                session, candidates, target, rng,
                round_cap=self.config.generation.social_round_cap,
            )
        else:
            sampled = self.sample_conditions(target, rng)
            instruction, trace, conditions = gen_instruction_locomanip(
                session, candidates, target, sampled, rng, self.config.generation,
            )

        x0, y0 = gt_path.waypoints[0]
        x1, y1 = gt_path.waypoints[1]
        heading = round(math.atan2(y1 - y0, x1 - x0), 9)
        return Episode(
            episode_id=f"{self.scene.scene_id}-{task}-{index:04d}",
            task=task,
            scene_id=self.scene.scene_id,
            start_pose=(x0, y0, heading),
            target=target,
            instruction=instruction,
            gt_path=gt_path,
            constraint_trace=tuple(trace),
            conditions=tuple(conditions),
            split=split,
        )

    def generate_batch(self, task: str, count: int, seed: int) -> list[Episode]:
        """Deterministic batch with the configured validation/test proportion."""
        gen_cfg = self.config.generation
        n_val = round(count * gen_cfg.validation_count
                      / (gen_cfg.validation_count + gen_cfg.test_count))
        rng = np.random.default_rng(seed)
        episodes = []
        for index in range(count):
            split = "validation" if index < n_val else "test"
            episodes.append(self.generate(task, rng, index, split))
        return episodes
