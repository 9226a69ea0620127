"""Deterministic 2D episode simulator.

Movement actions translate a disc robot on the occupancy grid, clipping at the
first position that would violate clearance (each clip is a fall: the robot is
reset standing at the pre-collision position and the reset counter grows).
Every action charges physical simulation steps against the episode life
horizon; exceeding it ends the episode unsuccessfully.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..config import SimConfig
from ..errors import ContractViolation, EpisodeInvalidError
from ..scene.model import ObjectInstance, Scene
from ..taskgen.episodes import Episode
from ..taskgen.occupancy import FREE, OBSTACLE, UNDEFINED, OccupancyMap
from ..taskgen.pathsample import GRID_MARGIN_CELLS, clearance_grid

MOVE_KINDS = ("move_forward", "advance_left", "advance_right")
TURN_KINDS = ("turn_left_90", "turn_right_90")


@dataclass(frozen=True)
class Action:
    kind: str
    magnitude: float = 0.0
    question: str | None = None
    target: str | None = None
    place_position: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.kind in MOVE_KINDS and self.magnitude not in (2.0, 4.0, 6.0):
            raise ContractViolation(f"movement magnitude must be 2, 4 or 6 m, got {self.magnitude}")
        if self.kind == "ask" and self.question is None:
            raise ContractViolation("ask needs a question")
        if self.kind == "pick" and self.target is None:
            raise ContractViolation("pick needs a target instance id")
        if self.kind == "place" and self.place_position is None:
            raise ContractViolation("place needs a position")

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.kind in MOVE_KINDS:
            out["magnitude"] = self.magnitude
        if self.question is not None:
            out["question"] = self.question
        if self.target is not None:
            out["target"] = self.target
        if self.place_position is not None:
            out["place_position"] = list(self.place_position)
        return out

    @staticmethod
    def from_dict(raw: dict) -> "Action":
        pos = raw.get("place_position")
        return Action(
            kind=raw["kind"],
            magnitude=float(raw.get("magnitude", 0.0)),
            question=raw.get("question"),
            target=raw.get("target"),
            place_position=tuple(pos) if pos else None,
        )


def legal_actions(task: str) -> list[Action]:
    actions = [Action(kind, magnitude=m) for kind in MOVE_KINDS for m in (2.0, 4.0, 6.0)]
    actions += [Action("turn_left_90"), Action("turn_right_90"), Action("stop")]
    if task == "social_loconav":
        actions.append(Action("ask", question="What can you tell me about the target?"))
    if task == "loco_manip":
        actions.append(Action("pick", target="?"))
        actions.append(Action("place", place_position=(0.0, 0.0, 0.0)))
    return actions


@dataclass
class RobotState:
    position: tuple[float, float]
    heading: float
    physical_steps_used: int = 0
    reset_count: int = 0
    held_object: str | None = None
    path_length_accum: float = 0.0


@dataclass(frozen=True)
class VisibleObject:
    instance_id: str
    bearing: float  # radians relative to heading
    range: float
    box: tuple[float, float, float, float]  # normalized image-plane box


@dataclass(frozen=True, eq=False)
class LocalPatch:
    origin_cell: tuple[int, int]
    cells: np.ndarray

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LocalPatch)
            and self.origin_cell == other.origin_cell
            and np.array_equal(self.cells, other.cells)
        )


@dataclass(frozen=True)
class Observation:
    pose: tuple[float, float, float]
    visible_objects: tuple[VisibleObject, ...]
    local_occupancy: LocalPatch
    last_npc_reply: str | None = None


@dataclass(frozen=True)
class StepOutcome:
    steps_charged: int
    collided: bool = False
    terminated: bool = False
    success: bool | None = None
    exhausted: bool = False
    failed_action: bool = False
    npc_reply: str | None = None


class Simulator:
    """One instance simulates one episode, lock-step and rng-free."""

    def __init__(
        self,
        scene: Scene,
        occupancy: OccupancyMap,
        episode: Episode,
        config: SimConfig | None = None,
        ask_handler=None,
        condition_checker=None,
        patch_radius: float = 3.0,
    ):
        if episode.scene_id != scene.scene_id:
            raise EpisodeInvalidError(
                f"episode {episode.episode_id} is for scene {episode.scene_id!r}, "
                f"loaded scene is {scene.scene_id!r}"
            )
        self.scene = scene
        self.occ = occupancy
        self.episode = episode
        self.cfg = config or SimConfig()
        self.ask_handler = ask_handler
        self.condition_checker = condition_checker
        self.patch_radius = patch_radius

        clearance = self.cfg.robot_radius + GRID_MARGIN_CELLS * occupancy.cell_size
        self._valid = (occupancy.cells == FREE) & (clearance_grid(occupancy) >= clearance)
        self._object_index = {oid: i for i, oid in enumerate(occupancy.object_ids)}

        self.state: RobotState | None = None
        self.terminated = False
        self.success: bool | None = None
        self.placed: dict[str, ObjectInstance] = {}
        self.log: list[dict] = []
        sx, sy, _ = episode.start_pose
        if not self._position_valid(sx, sy):
            raise EpisodeInvalidError(f"start pose {episode.start_pose[:2]} not on a free cell")

    # -- lifecycle -----------------------------------------------------------------

    def reset(self) -> Observation:
        x, y, heading = self.episode.start_pose
        self.state = RobotState(position=(x, y), heading=heading)
        self.terminated = False
        self.success = None
        self.placed = {}
        self.log = []
        return self._observe(None)

    def step(self, action: Action) -> tuple[Observation, StepOutcome]:
        if self.state is None:
            raise ContractViolation("step before reset")
        if self.terminated:
            raise ContractViolation("step after episode termination")

        before = (*self.state.position, self.state.heading)
        npc_reply: str | None = None
        collided = False
        failed = False

        if action.kind in MOVE_KINDS:
            collided = self._move(action)
            duration = action.magnitude / self.cfg.nominal_speed
        elif action.kind in TURN_KINDS:
            sign = 1.0 if action.kind == "turn_left_90" else -1.0
            self.state.heading = _wrap(self.state.heading + sign * math.pi / 2)
            duration = self.cfg.turn_time
        elif action.kind == "stop":
            duration = 0.0
        elif action.kind == "ask":
            duration = self.cfg.interact_time
            if self.ask_handler is not None:
                npc_reply = self.ask_handler(action.question)
        elif action.kind == "pick":
            duration = self.cfg.interact_time
            failed = not self._try_pick(action.target)
        elif action.kind == "place":
            duration = self.cfg.interact_time
            failed = not self._try_place(action.place_position)
        else:
            raise ContractViolation(f"unknown action kind {action.kind!r}")

        charged = math.ceil(self.cfg.physics_hz * duration)
        self.state.physical_steps_used += charged

        exhausted = self.state.physical_steps_used > self.cfg.step_budget
        if exhausted:
            self.terminated = True
            self.success = False
        elif action.kind == "stop":
            self.terminated = True
            self.success = self.check_success()

        outcome = StepOutcome(
            steps_charged=charged,
            collided=collided,
            terminated=self.terminated,
            success=self.success,
            exhausted=exhausted,
            failed_action=failed,
            npc_reply=npc_reply,
        )
        self.log.append({
            "action": action.to_dict(),
            "pose_before": [round(v, 9) for v in before],
            "pose_after": [round(v, 9) for v in (*self.state.position, self.state.heading)],
            "steps_charged": charged,
            "reset_count": self.state.reset_count,
            "collided": collided,
            "failed_action": failed,
            "npc_reply": npc_reply,
        })
        return self._observe(npc_reply), outcome

    # -- movement ---------------------------------------------------------------------

    def _position_valid(self, x: float, y: float) -> bool:
        cx, cy = self.occ.world_to_cell(x, y)
        return self.occ.in_bounds(cx, cy) and bool(self._valid[cy, cx])

    def _move(self, action: Action) -> bool:
        offsets = {"move_forward": 0.0, "advance_left": math.pi / 4, "advance_right": -math.pi / 4}
        angle = self.state.heading + offsets[action.kind]
        dx, dy = math.cos(angle), math.sin(angle)
        x0, y0 = self.state.position
        step = self.occ.cell_size / 2
        reached = 0.0
        t = step
        while t <= action.magnitude + 1e-9:
            if not self._position_valid(x0 + dx * t, y0 + dy * t):
                break
            reached = t
            t += step
        else:
            reached = action.magnitude
        collided = reached < action.magnitude - 1e-9
        if collided:
            # stand the robot up a couple of cells short of the contact point
            # so it does not balance exactly on the clearance boundary
            reached = max(0.0, reached - 2 * self.occ.cell_size)
        if reached > 0:
            self.state.position = (x0 + dx * reached, y0 + dy * reached)
            self.state.path_length_accum += reached
        if collided:
            self.state.reset_count += 1  # fall + standing-pose reset in place
        return collided

    # -- manipulation ----------------------------------------------------------------

    def _object_aabb(self, oid: str) -> ObjectInstance:
        return self.placed.get(oid, self.scene.objects[oid])

    def _try_pick(self, target: str) -> bool:
        if self.state.held_object is not None or target not in self.scene.objects:
            return False
        obj = self._object_aabb(target)
        if _point_rect_distance(self.state.position, obj.footprint) > self.cfg.reach_radius:
            return False
        self.state.held_object = target
        return True

    def _try_place(self, position: tuple[float, float, float]) -> bool:
        held = self.state.held_object
        if held is None:
            return False
        if math.hypot(position[0] - self.state.position[0],
                      position[1] - self.state.position[1]) > self.cfg.reach_radius:
            return False
        self.placed[held] = self.scene.objects[held].translated(position)
        self.state.held_object = None
        return True

    # -- perception ---------------------------------------------------------------------

    def fov_visible(self, oid: str) -> bool:
        obj = self._object_aabb(oid)
        near = _nearest_rect_point(self.state.position, obj.footprint)
        dist = math.hypot(near[0] - self.state.position[0], near[1] - self.state.position[1])
        if dist > self.cfg.fov_range:
            return False
        if dist > 1e-9:
            bearing = _wrap(math.atan2(near[1] - self.state.position[1],
                                       near[0] - self.state.position[0]) - self.state.heading)
            if abs(bearing) > math.radians(self.cfg.fov_half_angle_deg):
                return False
        return self._line_of_sight(self.state.position, near, oid, obj)

    def _line_of_sight(self, src: tuple[float, float], dst: tuple[float, float],
                       target_id: str, target: ObjectInstance) -> bool:
        """BEV ray test: undefined cells block; obstacle cells of another object
        block unless that object tops out below the target's base (supports do
        not occlude what rests on them)."""
        target_index = self._object_index.get(target_id, -2)
        steps = max(1, int(math.hypot(dst[0] - src[0], dst[1] - src[1]) / (self.occ.cell_size / 2)))
        last_cell = None
        for i in range(steps + 1):
            t = i / steps
            x = src[0] + (dst[0] - src[0]) * t
            y = src[1] + (dst[1] - src[1]) * t
            cell = self.occ.world_to_cell(x, y)
            if cell == last_cell:
                continue
            last_cell = cell
            cx, cy = cell
            if not self.occ.in_bounds(cx, cy):
                return False
            state = self.occ.cells[cy, cx]
            if state == UNDEFINED:
                return False
            if state == OBSTACLE:
                owner = int(self.occ.owner[cy, cx])
                if owner == target_index or owner < 0:
                    continue
                if self.occ.object_tops[owner] > target.min_points[2] + 1e-9:
                    return False
        return True

    def _observe(self, npc_reply: str | None) -> Observation:
        visible = []
        for oid in sorted(self.scene.objects):
            if self.scene.objects[oid].scope == "Structure":
                continue
            if self.fov_visible(oid):
                obj = self._object_aabb(oid)
                near = _nearest_rect_point(self.state.position, obj.footprint)
                dist = math.hypot(near[0] - self.state.position[0],
                                  near[1] - self.state.position[1])
                bearing = _wrap(math.atan2(near[1] - self.state.position[1],
                                           near[0] - self.state.position[0]) - self.state.heading) \
                    if dist > 1e-9 else 0.0
                visible.append(VisibleObject(oid, bearing, dist, self._image_box(obj, dist, bearing)))
        return Observation(
            pose=(*self.state.position, self.state.heading),
            visible_objects=tuple(visible),
            local_occupancy=self._local_patch(),
            last_npc_reply=npc_reply,
        )

    def _image_box(self, obj: ObjectInstance, dist: float, bearing: float) -> tuple[float, float, float, float]:
        half = math.radians(self.cfg.fov_half_angle_deg)
        x0, y0, x1, y1 = obj.footprint
        px, py = self.state.position
        angles = []
        for cx, cy in ((x0, y0), (x0, y1), (x1, y0), (x1, y1)):
            angles.append(_wrap(math.atan2(cy - py, cx - px) - self.state.heading))
        u0 = max(min(angles) / half, -1.0)
        u1 = min(max(angles) / half, 1.0)
        eye = 1.2
        d = max(dist, 0.3)
        v0 = max(math.atan2(obj.min_points[2] - eye, d) / half, -1.0)
        v1 = min(math.atan2(obj.max_points[2] - eye, d) / half, 1.0)
        return (round(u0, 6), round(v0, 6), round(u1, 6), round(v1, 6))

    def _local_patch(self) -> LocalPatch:
        r_cells = int(self.patch_radius / self.occ.cell_size)
        cx, cy = self.occ.world_to_cell(*self.state.position)
        x0, x1 = max(cx - r_cells, 0), min(cx + r_cells + 1, self.occ.width)
        y0, y1 = max(cy - r_cells, 0), min(cy + r_cells + 1, self.occ.height)
        return LocalPatch(origin_cell=(x0, y0), cells=self.occ.cells[y0:y1, x0:x1].copy())

    # -- success -------------------------------------------------------------------------

    def check_success(self) -> bool:
        if self.episode.task in ("object_loconav", "social_loconav"):
            target = self._object_aabb(self.episode.target)
            near = _nearest_rect_point(self.state.position, target.footprint)
            dist = math.hypot(near[0] - self.state.position[0],
                              near[1] - self.state.position[1])
            return self.fov_visible(self.episode.target) and dist < self.cfg.success_distance
        # loco-manipulation: the handheld target must have been placed so that
        # every condition holds, judged by the shared relation program
        placed = self.placed.get(self.episode.target)
        if placed is None or self.condition_checker is None:
            return False
        flags = self.condition_checker(placed, self.episode.conditions)
        return bool(flags) and all(flags)

    def condition_flags(self) -> list[bool]:
        placed = self.placed.get(self.episode.target)
        if placed is None or self.condition_checker is None:
            return [False] * len(self.episode.conditions)
        return list(self.condition_checker(placed, self.episode.conditions))


def _wrap(angle: float) -> float:
    while angle > math.pi:
        angle -= 2 * math.pi
    while angle < -math.pi:
        angle += 2 * math.pi
    return angle


def _nearest_rect_point(p: tuple[float, float], rect: tuple[float, float, float, float]) -> tuple[float, float]:
    x0, y0, x1, y1 = rect
    return (min(max(p[0], x0), x1), min(max(p[1], y0), y1))


def _point_rect_distance(p: tuple[float, float], rect: tuple[float, float, float, float]) -> float:
    nx, ny = _nearest_rect_point(p, rect)
    return math.hypot(nx - p[0], ny - p[1])
