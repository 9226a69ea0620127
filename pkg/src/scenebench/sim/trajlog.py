"""Trajectory logs: per-action records, saved line-delimited and replayable."""

from __future__ import annotations

import json
from pathlib import Path

from .harness import Action, Simulator


def save_log(sim: Simulator, path: str | Path) -> None:
    lines = [json.dumps(rec, sort_keys=True) for rec in sim.log]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def replay_log(sim: Simulator, path: str | Path, pose_tol: float = 1e-9) -> bool:
    """Re-execute a saved log on a fresh simulator; True when every pose matches."""
    records = [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
    sim.reset()
    for rec in records:
        _, outcome = sim.step(Action.from_dict(rec["action"]))
        pose = sim.log[-1]["pose_after"]
        if any(abs(a - b) > pose_tol for a, b in zip(pose, rec["pose_after"])):
            return False
        if sim.log[-1]["reset_count"] != rec["reset_count"]:
            return False
        if outcome.terminated:
            break
    return True
