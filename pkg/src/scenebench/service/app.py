"""HTTP service: scenes, cross-verification rounds, and dialogue sessions.

Referring rounds hide the true target until the client selects; grounding
rounds resolve a client-supplied description. All responses carry a schema
version, and mutations go through the append-only event log.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from ..config import ToolkitConfig
from ..errors import GenerationFailure, GroundingFailure, SceneBenchError
from ..fixtures import BUILTIN_SCENES
from ..npc import handle_message, open_session
from ..scene import derive_relations, load_scene
from ..taskgen import build_occupancy, load_episodes
from ..taskgen.instructions import gen_instruction_objnav
from ..wkm import WorldKnowledge, ground_utterance
from .store import EventLog

SCHEMA_VERSION = 1


class SceneState:
    def __init__(self, scene, config: ToolkitConfig):
        self.scene = scene
        self.config = config
        self.graph = derive_relations(scene, config.relation)
        self.wkm = WorldKnowledge(self.graph, gen_cfg=config.generation)
        self._occupancy = None

    @property
    def occupancy(self):
        if self._occupancy is None:
            self._occupancy = build_occupancy(self.scene, self.config.occupancy)
        return self._occupancy


class SelectBody(BaseModel):
    instance_id: str


class ReferringStartBody(BaseModel):
    scene_id: str | None = None
    seed: int | None = None


class GroundingStartBody(BaseModel):
    description: str
    scene_id: str | None = None
    true_target: str | None = None


class MessageBody(BaseModel):
    text: str


def create_app(
    scene_dir: str | None = None,
    data_dir: str | None = None,
    episodes_path: str | None = None,
    seed: int = 0,
    config: ToolkitConfig | None = None,
) -> FastAPI:
    config = config or ToolkitConfig()
    app = FastAPI(title="scenebench verification service")

    scenes: dict[str, SceneState] = {
        name: SceneState(builder(), config) for name, builder in BUILTIN_SCENES.items()
    }
    if scene_dir:
        for path in sorted(Path(scene_dir).glob("*.json")):
            scene = load_scene(path)
            scenes[scene.scene_id] = SceneState(scene, config)

    episodes = {}
    if episodes_path:
        for episode in load_episodes(episodes_path):
            episodes[episode.episode_id] = episode

    log = EventLog(Path(data_dir) / "events.jsonl" if data_dir else None)
    rounds: dict[str, dict] = {}
    referring_stats = {"correct": 0, "total": 0}
    grounding_stats = {"correct": 0, "total": 0}
    sessions: dict[str, object] = {}
    rng = np.random.default_rng(seed)

    # restore rounds and accuracy from the persisted event log
    for event in log.events:
        if event["type"] == "referring_started":
            rounds[event["round_id"]] = {k: event[k] for k in
                                         ("round_id", "scene_id", "description",
                                          "candidate_ids", "true_target")}
            rounds[event["round_id"]]["selection"] = None
        elif event["type"] == "referring_selected":
            record = rounds.get(event["round_id"])
            if record is not None:
                record["selection"] = event["selection"]
                referring_stats["total"] += 1
                referring_stats["correct"] += int(event["correct"])
        elif event["type"] == "grounding_attempted" and event.get("correct") is not None:
            grounding_stats["total"] += 1
            grounding_stats["correct"] += int(event["correct"])

    def versioned(payload: dict) -> dict:
        return {"schema_version": SCHEMA_VERSION, **payload}

    def get_scene(scene_id: str | None) -> SceneState:
        if scene_id is None:
            scene_id = sorted(scenes)[0]
        if scene_id not in scenes:
            raise HTTPException(status_code=404, detail=f"unknown scene {scene_id!r}")
        return scenes[scene_id]

    @app.get("/scenes")
    def list_scenes():
        return versioned({
            "scenes": [
                {
                    "scene_id": sid,
                    "objects": len(state.scene.objects),
                    "regions": len(state.scene.regions),
                }
                for sid, state in sorted(scenes.items())
            ]
        })

    @app.get("/scenes/{scene_id}/bev")
    def scene_bev(scene_id: str):
        state = get_scene(scene_id)
        occ = state.occupancy
        cells = occ.cells
        return versioned({
            "scene_id": scene_id,
            "regions": [
                {"region_id": r.region_id, "label": r.label,
                 "polygon": [[x, y] for x, y in r.polygon]}
                for r in state.scene.regions
            ],
            "objects": [
                {
                    "instance_id": oid,
                    "category": obj.category,
                    "footprint": list(obj.footprint),
                    "position": [obj.position[0], obj.position[1]],
                    "interactive": obj.interactive,
                }
                for oid, obj in sorted(state.scene.objects.items())
            ],
            "occupancy_summary": {
                "width": occ.width,
                "height": occ.height,
                "cell_size": occ.cell_size,
                "origin": list(occ.origin),
                "free": int((cells == 1).sum()),
                "obstacle": int((cells == 2).sum()),
                "undefined": int((cells == 0).sum()),
            },
        })

    @app.get("/episodes")
    def list_episodes():
        return versioned({
            "episodes": [
                {"episode_id": e.episode_id, "task": e.task, "scene_id": e.scene_id,
                 "instruction": e.instruction}
                for e in episodes.values()
            ]
        })

    @app.post("/verify/referring/start")
    def referring_start(body: ReferringStartBody):
        state = get_scene(body.scene_id)
        local_rng = np.random.default_rng(body.seed) if body.seed is not None else rng
        pool = sorted(
            oid for oid, obj in state.scene.objects.items() if obj.scope != "Structure"
        )
        if not pool:
            raise HTTPException(status_code=409, detail="scene has no describable objects")
        target = pool[int(local_rng.integers(len(pool)))]
        category = state.scene.objects[target].category
        candidates = set(state.scene.by_category(category))
        session = state.wkm.session(seed=int(local_rng.integers(2**31)))
        try:
            instruction, _ = gen_instruction_objnav(session, candidates, target)
        except GenerationFailure as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        description = instruction[len("Find "):-1]
        round_id = f"r-{len(log.of_type('referring_started')):05d}"
        record = {
            "round_id": round_id,
            "scene_id": state.scene.scene_id,
            "description": description,
            "candidate_ids": sorted(candidates),
            "true_target": target,
            "selection": None,
        }
        rounds[round_id] = record
        log.append({"type": "referring_started", **{k: record[k] for k in
                    ("round_id", "scene_id", "description", "candidate_ids", "true_target")}})
        # the true target stays server-side until the selection arrives
        return versioned({
            "round_id": round_id,
            "scene_id": record["scene_id"],
            "description": description,
            "candidate_ids": record["candidate_ids"],
        })

    @app.post("/verify/referring/{round_id}/select")
    def referring_select(round_id: str, body: SelectBody):
        record = rounds.get(round_id)
        if record is None:
            raise HTTPException(status_code=404, detail=f"unknown round {round_id!r}")
        if record["selection"] is not None:
            raise HTTPException(status_code=409, detail=f"round {round_id!r} already closed")
        if body.instance_id not in record["candidate_ids"]:
            raise HTTPException(status_code=409, detail="selection outside round candidates")
        record["selection"] = body.instance_id
        correct = body.instance_id == record["true_target"]
        referring_stats["total"] += 1
        referring_stats["correct"] += int(correct)
        log.append({"type": "referring_selected", "round_id": round_id,
                    "selection": body.instance_id, "correct": correct})
        return versioned({
            "round_id": round_id,
            "correct": correct,
            "true_target": record["true_target"],
            "running_accuracy": referring_stats["correct"] / referring_stats["total"],
            "rounds_played": referring_stats["total"],
        })

    @app.post("/verify/grounding/start")
    def grounding_start(body: GroundingStartBody):
        state = get_scene(body.scene_id)
        try:
            selected = ground_utterance(state.wkm, body.description)
            failure = None
        except GroundingFailure as exc:
            selected = None
            failure = exc.reason
        correct = None
        if body.true_target is not None:
            correct = selected == body.true_target
            grounding_stats["total"] += 1
            grounding_stats["correct"] += int(correct)
        log.append({"type": "grounding_attempted", "scene_id": state.scene.scene_id,
                    "description": body.description, "selected": selected,
                    "correct": correct})
        payload = {
            "scene_id": state.scene.scene_id,
            "selected_instance": selected,
            "failure": failure,
            "correct": correct,
        }
        if grounding_stats["total"]:
            payload["running_accuracy"] = grounding_stats["correct"] / grounding_stats["total"]
        return versioned(payload)

    @app.post("/dialogue/{episode_id}/message")
    def dialogue_message(episode_id: str, body: MessageBody, client: str = "default"):
        episode = episodes.get(episode_id)
        if episode is None:
            raise HTTPException(status_code=404, detail=f"unknown episode {episode_id!r}")
        state = get_scene(episode.scene_id)
        key = f"{episode_id}:{client}"
        if key not in sessions:
            try:
                sessions[key] = open_session(episode, state.wkm, seed=seed)
            except SceneBenchError as exc:
                raise HTTPException(status_code=409, detail=str(exc)) from exc
        session = sessions[key]
        reply = handle_message(session, body.text)
        log.append({"type": "dialogue", "episode_id": episode_id, "client": client,
                    "text": body.text, "reply": reply})
        return versioned({
            "episode_id": episode_id,
            "reply": reply,
            "remaining_rounds": session.remaining_rounds,
            "candidates_remaining": len(session.candidates),
            "candidate_counts": [len(c) for c in session.candidate_history],
        })

    return app
