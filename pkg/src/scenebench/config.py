"""Dataclass configs for relation derivation, occupancy, generation, and simulation.

Every tunable that the benchmarks depend on lives here with its default; configs
serialize to/from plain JSON dicts so a single config file can drive the CLI.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class RelationConfig:
    """Thresholds for AABB-only spatial relation derivation (meters)."""

    near_threshold: float = 2.5
    on_tolerance: float = 0.02
    above_min_gap: float = 0.02
    under_max_gap: float = 0.05
    in_tolerance: float = 0.01


@dataclass(frozen=True)
class OccupancyConfig:
    """Grid sizing for BEV occupancy maps."""

    width: int = 1440
    height: int = 1440
    cell_size: float = 0.014
    project_z_min: float = 0.1
    project_z_max: float = 2.1


@dataclass(frozen=True)
class PathConfig:
    """Collision-free ground-truth path sampling."""

    robot_radius: float = 0.34
    min_length: float = 7.0
    max_length: float = 20.0
    approach_radius: float = 2.5
    max_attempts: int = 50


@dataclass(frozen=True)
class GenerationConfig:
    """Episode/instruction generation knobs."""

    validation_count: int = 100
    test_count: int = 200
    social_round_cap: int = 4  # rounds drawn from [1, cap)
    attribute_drop_prob: float = 0.5
    receptacle_categories: tuple[str, ...] = ("table", "teatable", "cabinet", "stool", "couch")
    handheld_categories: tuple[str, ...] = ("book", "cup", "bottle", "vase", "basket")
    condition_pair_distance: float = 1.5
    color_vocab: tuple[str, ...] = (
        "white", "black", "gray", "grey", "brown", "beige", "red", "orange",
        "yellow", "green", "blue", "purple", "pink", "golden", "silver",
    )
    shape_vocab: tuple[str, ...] = (
        "round", "square", "rectangular", "cylindrical", "oval", "l-shaped",
        "curved", "flat", "tall", "grid-like",
    )


@dataclass(frozen=True)
class SimConfig:
    """Physics accounting and robot geometry for the 2D episode simulator."""

    physics_hz: int = 240
    step_budget: int = 14400
    nominal_speed: float = 0.5
    turn_time: float = 2.0
    interact_time: float = 1.0  # ask/pick/place charge one planner tick
    robot_radius: float = 0.34
    fov_half_angle_deg: float = 45.0
    fov_range: float = 10.0
    success_distance: float = 3.0
    reach_radius: float = 0.8
    move_magnitudes: tuple[float, ...] = (2.0, 4.0, 6.0)


@dataclass(frozen=True)
class ToolkitConfig:
    """Top-level bundle; what a CLI config file deserializes into."""

    relation: RelationConfig = field(default_factory=RelationConfig)
    occupancy: OccupancyConfig = field(default_factory=OccupancyConfig)
    path: PathConfig = field(default_factory=PathConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    @staticmethod
    def from_dict(raw: dict) -> "ToolkitConfig":
        sections = {}
        for f in dataclasses.fields(ToolkitConfig):
            sub = raw.get(f.name, {})
            cls = f.default_factory  # type: ignore[union-attr]
            kwargs = {}
            for sf in dataclasses.fields(cls):
                if sf.name in sub:
                    val = sub[sf.name]
                    if isinstance(sf.default, tuple) and isinstance(val, list):
                        val = tuple(val)
                    kwargs[sf.name] = val
            sections[f.name] = cls(**kwargs)
        return ToolkitConfig(**sections)

    @staticmethod
    def load(path: str | Path) -> "ToolkitConfig":
        with open(path, encoding="utf-8") as fh:
            return ToolkitConfig.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)
