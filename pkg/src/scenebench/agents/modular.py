"""The modular baseline agent: grounding, memory, decision, action.

Perception is oracle (the simulator supplies labeled detections and map
patches); the decision module is pluggable — a deterministic scripted backend
for offline runs, or an HTTP backend speaking the standard reasoning/speaking
prompts to an external model.
"""

from __future__ import annotations

import math
import os

import httpx
import numpy as np

from ..config import SimConfig
from ..errors import TargetExcluded, TransportError
from ..sim.harness import Action, Observation
from ..taskgen.episodes import Episode
from ..taskgen.occupancy import OccupancyMap
from ..wkm.similarity import tokenize
from .memory import BevMemory, Candidate
from .policies import MotionPrimitive, _wrap
from .rrt import GridWorld, path_blocked, rrt_star

ENV_DECISION_URL = "SCENEBENCH_DECISION_URL"

REASONING_PROMPT = """USER:
Here are the descriptions of the current candidates for the goal object {goal}:

{description}

Here are the known information about the goal object {goal}:

{goal_info}

1. Each line of candidate description corresponds to a candidate.
2. The number in the description is the candidate's index, and the text after ':' is the candidate's description.
3. Now, based on the provided information about the goal object, please select the candidate most likely to be the goal object.
4. You only need to output the candidate's index. Please do not output anything other than the candidate's index.
ASSISTANT:"""

SPEAKING_PROMPT = """USER:
Here are the descriptions of the current candidates for the goal object {goal}:

{description}

Here are the known information about the goal object {goal}:

{goal_info}

1. Now you can ask a question about the goal object.
2. Based on the information described above,  what question do you think will help to minimize the scope of the possible candidates?
3. Just output the question, don't include the reason or explanation.
ASSISTANT:"""

_STOPWORDS = {
    "the", "a", "an", "it", "is", "in", "on", "of", "with", "and", "to", "find",
    "pick", "place", "up", "near", "object", "that", "matches", "has", "have",
    "i", "you", "me", "we",
}


def _content_tokens(text: str) -> set[str]:
    return {t for t in tokenize(text) if t not in _STOPWORDS}


class ScriptedBackend:
    """Deterministic keyword-overlap decision rules behind the same contract."""

    name = "scripted"

    def decide(self, candidates: list[tuple[int, str]], goal_info: list[str],
               history_digest: str, ask_available: bool):
        if not candidates:
            return "ask" if ask_available else None
        goal_tokens = _content_tokens(" ".join(goal_info))
        scores = [
            (len(goal_tokens & _content_tokens(desc)), -index, index)
            for index, desc in candidates
        ]
        scores.sort(reverse=True)
        best_score = scores[0][0]
        tied = [s for s in scores if s[0] == best_score]
        if len(tied) > 1 and ask_available:
            return "ask"
        return scores[0][2]

    def speak(self, candidates: list[tuple[int, str]], goal_info: list[str],
              history_digest: str) -> str:
        return "Can you tell me more about the goal object?"


class HttpDecisionBackend:
    """Forwards decisions to an external model over the structured wire format."""

    name = "http"

    def __init__(self, url: str, timeout: float = 30.0):
        self.url = url
        self.timeout = timeout

    @classmethod
    def from_env(cls) -> "HttpDecisionBackend | None":
        url = os.environ.get(ENV_DECISION_URL)
        return cls(url) if url else None

    def _request(self, payload: dict) -> dict:
        try:
            resp = httpx.post(self.url, json=payload, timeout=self.timeout)
            resp.raise_for_status()
            return resp.json()
        except httpx.HTTPError as exc:
            raise TransportError(f"decision backend unreachable: {exc}") from exc

    def decide(self, candidates, goal_info, history_digest, ask_available):
        description = "\n".join(f"{i}: {d}" for i, d in candidates)
        payload = {
            "mode": "reason",
            "candidates": [{"index": i, "description": d} for i, d in candidates],
            "goal_info": goal_info,
            "history": history_digest,
            "prompt": REASONING_PROMPT.format(
                goal="the goal object", description=description,
                goal_info="\n".join(goal_info),
            ),
        }
        choice = self._request(payload).get("choice")
        if choice in ("ask", "stop"):
            return choice if (choice != "ask" or ask_available) else None
        return int(choice)

    def speak(self, candidates, goal_info, history_digest) -> str:
        description = "\n".join(f"{i}: {d}" for i, d in candidates)
        payload = {
            "mode": "speak",
            "candidates": [{"index": i, "description": d} for i, d in candidates],
            "goal_info": goal_info,
            "history": history_digest,
            "prompt": SPEAKING_PROMPT.format(
                goal="the goal object", description=description,
                goal_info="\n".join(goal_info),
            ),
        }
        return str(self._request(payload).get("question", "Tell me more?"))


class ModularAgent:
    """Grounding/memory/decision/action loop with sampling-based replanning."""

    def __init__(
        self,
        occupancy: OccupancyMap,
        episode: Episode,
        describe,
        backend=None,
        cfg: SimConfig | None = None,
        seed: int = 0,
        rrt_samples: int = 2000,
    ):
        self.occ = occupancy
        self.episode = episode
        self.describe = describe
        self.backend = backend or ScriptedBackend()
        self.cfg = cfg or SimConfig()
        self.seed = seed
        self.rrt_samples = rrt_samples
        self.memory: BevMemory | None = None
        self.reset(episode, None)

    def reset(self, episode: Episode, observation: Observation | None) -> None:
        self.memory = BevMemory.for_map(self.occ)
        self.memory.goal_info.append(episode.instruction)
        self.rng = np.random.default_rng(self.seed)
        self.plan: list[tuple[float, float]] = []
        self.plan_goal: tuple[float, float] | None = None
        self.asks_used = 0
        self.phase = "fetch" if episode.task == "loco_manip" else "navigate"
        self.goal_candidate: str | None = None
        self._turns = 0
        self._queue: list[Action] = []
        self._world_cache: GridWorld | None = None
        self._stale_cells = 0

    # -- map plumbing ----------------------------------------------------------

    def _world(self) -> GridWorld:
        clearance = self.cfg.robot_radius + 2 * self.occ.cell_size
        return GridWorld(self.memory.grid, self.occ.origin, self.occ.cell_size, clearance)

    def _point_free(self, x: float, y: float) -> bool:
        return self._world_cache.point_free(x, y)

    # -- decision helpers --------------------------------------------------------

    def _choose_goal(self, pool: dict[str, Candidate], ask_available: bool):
        indexed = sorted(pool)
        candidates = [(i, pool[oid].description) for i, oid in enumerate(indexed)]
        digest = self.memory.history[-1][1] if self.memory.history else ""
        choice = self.backend.decide(candidates, self.memory.goal_info, digest, ask_available)
        if choice in ("ask", "stop", None):
            return choice
        return indexed[int(choice)]

    def _deliver_pool(self) -> dict[str, Candidate]:
        wanted = {c.receptacle_spec.category for c in self.episode.conditions}
        return {
            oid: cand for oid, cand in self.memory.candidates.items()
            if cand.description and any(w in cand.description for w in wanted)
        }

    def _fetch_pool(self) -> dict[str, Candidate]:
        return dict(self.memory.candidates)

    # -- main loop -------------------------------------------------------------------

    def act(self, observation: Observation) -> Action:
        fresh = self.memory.merge_patch(observation)
        self.memory.note_candidates(observation, self.describe)
        if observation.last_npc_reply:
            self.memory.goal_info.append(observation.last_npc_reply)
        self.memory.record("tick", observation)
        # the distance transform is expensive: rebuild only after the map
        # grew meaningfully, not on every tick
        self._stale_cells += fresh
        if self._world_cache is None or self._stale_cells > 1500:
            self._world_cache = self._world()
            self._stale_cells = 0

        pose = observation.pose
        visible = {v.instance_id: v for v in observation.visible_objects}

        if self._queue:  # committed turn+move sequence in flight
            return self._queue.pop(0)

        ask_available = (
            self.episode.task == "social_loconav" and self.asks_used < 3
        )
        pool = self._deliver_pool() if self.phase == "deliver" else self._fetch_pool()
        choice = self._choose_goal(pool, ask_available) if pool or ask_available else None

        if choice == "ask":
            self.asks_used += 1
            question = self.backend.speak(
                [(i, c.description) for i, c in enumerate(pool.values())],
                self.memory.goal_info, "",
            )
            return Action("ask", question=question)
        if isinstance(choice, str) and choice in self.memory.candidates:
            self.goal_candidate = choice

        if self.goal_candidate is not None:
            cand = self.memory.candidates[self.goal_candidate]
            seen = visible.get(self.goal_candidate)
            near_point = _nearest_on_rect(pose[:2], cand.footprint)
            dist = math.hypot(near_point[0] - pose[0], near_point[1] - pose[1])

            if self.phase == "navigate":
                if seen is not None and seen.range < self.cfg.success_distance - 0.1:
                    return Action("stop")
                if dist < self.cfg.success_distance - 0.1 and seen is None:
                    bearing = _wrap(math.atan2(near_point[1] - pose[1],
                                               near_point[0] - pose[0]) - pose[2])
                    if abs(bearing) > math.radians(self.cfg.fov_half_angle_deg):
                        return Action("turn_left_90" if bearing > 0 else "turn_right_90")
            elif self.phase == "fetch":
                if dist < self.cfg.reach_radius - 0.05:
                    self.phase = "deliver"
                    self.plan, self.plan_goal, self.goal_candidate = [], None, None
                    return Action("pick", target=cand.instance_id)
            elif self.phase == "deliver":
                place_at = self._place_position(cand, pose[:2])
                reach = math.hypot(place_at[0] - pose[0], place_at[1] - pose[1])
                if reach < self.cfg.reach_radius - 0.05:
                    self.phase = "done"
                    return Action("place", place_position=place_at)

            return self._navigate(pose, near_point)

        if self.phase == "done":
            return Action("stop")
        # nothing to chase yet: explore toward the nearest frontier
        frontier = self.memory.frontier_point(pose[:2])
        if frontier is None:
            return Action("turn_left_90")
        return self._navigate(pose, frontier)

    # -- navigation -----------------------------------------------------------------

    def _navigate(self, pose, goal_point) -> Action:
        world = self._world_cache
        goal_moved = (
            self.plan_goal is None
            or math.hypot(goal_point[0] - self.plan_goal[0],
                          goal_point[1] - self.plan_goal[1]) > 0.5
        )
        if goal_moved or not self.plan or path_blocked(world, [pose[:2]] + self.plan):
            try:
                self.plan = rrt_star(
                    world, pose[:2], goal_point, self.rng, samples=self.rrt_samples,
                )
                self.plan_goal = goal_point
            except TargetExcluded:
                self.plan, self.plan_goal = [], None
                self._turns += 1
                return Action("turn_left_90")

        # drop waypoints already passed, then chase the farthest clear one
        while len(self.plan) > 1 and math.hypot(
            self.plan[0][0] - pose[0], self.plan[0][1] - pose[1]
        ) < 0.5:
            self.plan.pop(0)
        primitive = MotionPrimitive(world.point_free, self.occ.cell_size, self.cfg)
        lookahead = self.plan[0]
        for p in self.plan:
            if math.hypot(p[0] - pose[0], p[1] - pose[1]) > 4.5:
                break
            if primitive.sweep_clear(pose[:2], p):
                lookahead = p
        sequence = primitive.toward(pose, lookahead)
        self._queue = sequence[1:]
        return sequence[0]

    def _place_position(self, cand: Candidate,
                        robot_xy: tuple[float, float]) -> tuple[float, float, float]:
        """For "on": the reachable top point nearest the robot; for nearby: a
        floor spot just outside the footprint toward the robot."""
        relations = {c.relation for c in self.episode.conditions}
        x0, y0, x1, y1 = cand.footprint
        if "on" in relations:
            inset = 0.15
            px = min(max(robot_xy[0], x0 + inset), max(x0 + inset, x1 - inset))
            py = min(max(robot_xy[1], y0 + inset), max(y0 + inset, y1 - inset))
            return (px, py, cand.top_z)
        nx = min(max(robot_xy[0], x0), x1)
        ny = min(max(robot_xy[1], y0), y1)
        dx, dy = robot_xy[0] - nx, robot_xy[1] - ny
        norm = math.hypot(dx, dy) or 1.0
        return (nx + dx / norm * 0.25, ny + dy / norm * 0.25, 0.0)


def _nearest_on_rect(p, rect):
    x0, y0, x1, y1 = rect
    return (min(max(p[0], x0), x1), min(max(p[1], y0), y1))
