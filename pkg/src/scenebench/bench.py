"""Benchmark runner: wires scenes, episodes, agents, the simulator, and the
NPC into per-episode results ready for aggregation."""

from __future__ import annotations

from .agents import ModularAgent, OracleAgent, RandomAgent, ScriptedBackend
from .config import ToolkitConfig
from .errors import ContractViolation, SceneBenchError
from .metrics import EpisodeResult, make_checker
from .npc import handle_message, open_session
from .scene.model import Scene
from .scene.relations import derive_relations
from .sim import Simulator
from .taskgen.episodes import Episode
from .taskgen.instructions import room_name
from .taskgen.occupancy import build_occupancy
from .wkm.interfaces import WorldKnowledge

AGENTS = ("random", "oracle", "modular")


class BenchContext:
    """Everything episode execution needs, built once per scene."""

    def __init__(self, scene: Scene, config: ToolkitConfig | None = None):
        self.scene = scene
        self.config = config or ToolkitConfig()
        graph = derive_relations(scene, self.config.relation)
        self.wkm = WorldKnowledge(graph, gen_cfg=self.config.generation)
        self.occupancy = build_occupancy(scene, self.config.occupancy)
        self.checker = make_checker(
            self.wkm, self.config.relation, self.config.generation.condition_pair_distance
        )
        self._planner = None

    @property
    def planner(self):
        if self._planner is None:
            from .taskgen.pathsample import PathPlanner

            self._planner = PathPlanner(self.occupancy, self.config.path)
        return self._planner

    def delivery_path(self, episode: Episode):
        """Shortest route from the pick approach point to the first condition
        witness; None when it cannot be computed."""
        if not episode.conditions:
            return None
        on_conditions = [c for c in episode.conditions if c.relation == "on"]
        witness = (on_conditions[0] if on_conditions else episode.conditions[0])
        try:
            return self.planner.shortest_path(
                episode.gt_path.waypoints[-1], self.scene.objects[witness.receptacle_witness]
            )
        except SceneBenchError:
            return None

    def describe(self, instance_id: str) -> dict:
        """Oracle perception payload for one detected object."""
        obj = self.scene.objects[instance_id]
        near = sorted(
            self.wkm.graph.nodes[e.target].category
            for e in self.wkm.graph.edges_of(instance_id)
            if e.relation == "near"
        )
        description = (
            f"a {obj.category} in the {room_name(obj.room)}. "
            + " ".join(obj.description)
            + (" Nearby: " + ", ".join(near) + "." if near else "")
        )
        return {
            "position": (obj.position[0], obj.position[1]),
            "description": description,
            "footprint": obj.footprint,
            "top_z": obj.max_points[2],
        }


def make_agent(name: str, context: BenchContext, episode: Episode, seed: int,
               backend=None, rrt_samples: int = 2000):
    if name == "random":
        return RandomAgent(episode.task, seed=seed)
    if name == "oracle":
        delivery = context.delivery_path(episode) if episode.task == "loco_manip" else None
        return OracleAgent(context.scene, context.occupancy, episode, context.config.sim,
                           delivery_path=delivery)
    if name == "modular":
        return ModularAgent(
            context.occupancy, episode, context.describe,
            backend=backend or ScriptedBackend(), cfg=context.config.sim, seed=seed,
            rrt_samples=rrt_samples,
        )
    raise ContractViolation(f"unknown agent {name!r}; choose from {AGENTS}")


def run_episode(context: BenchContext, episode: Episode, agent, seed: int = 0) -> EpisodeResult:
    session = None
    ask_handler = None
    if episode.task == "social_loconav":
        session = open_session(episode, context.wkm, seed=seed)
        ask_handler = lambda question: handle_message(session, question)  # noqa: E731

    sim = Simulator(
        context.scene, context.occupancy, episode, context.config.sim,
        ask_handler=ask_handler, condition_checker=context.checker,
    )
    observation = sim.reset()
    agent.reset(episode, observation)
    while not sim.terminated:
        observation, _ = sim.step(agent.act(observation))

    history = ()
    rounds = 0
    if session is not None:
        history = tuple(len(c) for c in session.candidate_history)
        rounds = sum(1 for m in session.memory if m.speaker == "agent")
    return EpisodeResult(
        episode_id=episode.episode_id,
        task=episode.task,
        success=bool(sim.success),
        taken_path_length=sim.state.path_length_accum,
        shortest_path_length=episode.gt_path.length,
        reset_count=sim.state.reset_count,
        candidate_history=history,
        condition_flags=tuple(sim.condition_flags()) if episode.task == "loco_manip" else (),
        dialogue_rounds=rounds,
        split=episode.split,
    )


def run_benchmark(context: BenchContext, episodes: list[Episode], agent_name: str,
                  seed: int = 0, backend=None, rrt_samples: int = 2000) -> list[EpisodeResult]:
    results = []
    for index, episode in enumerate(episodes):
        agent = make_agent(agent_name, context, episode, seed + index,
                           backend=backend, rrt_samples=rrt_samples)
        results.append(run_episode(context, episode, agent, seed=seed + index))
    return results
