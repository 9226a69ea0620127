"""Evaluation metrics: SR, PL, SPL, RT, ECR, SCR and report aggregation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ContractViolation, UndefinedMetricError


@dataclass(frozen=True)
class EpisodeResult:
    episode_id: str
    task: str
    success: bool
    taken_path_length: float  # p
    shortest_path_length: float  # l, from the episode's ground-truth path
    reset_count: int = 0
    candidate_history: tuple[int, ...] = ()  # social dialogue set sizes
    condition_flags: tuple[bool, ...] = ()  # loco-manipulation
    dialogue_rounds: int = 0
    split: str = "validation"

    def __post_init__(self):
        if self.taken_path_length < 0:
            raise ContractViolation("taken path length must be >= 0")
        if self.shortest_path_length <= 0:
            raise ContractViolation("shortest path length must be > 0")
        if any(b > a for a, b in zip(self.candidate_history, self.candidate_history[1:])):
            raise ContractViolation("candidate history must be non-increasing")

    def to_dict(self) -> dict:
        return {
            "episode_id": self.episode_id,
            "task": self.task,
            "success": self.success,
            "taken_path_length": round(self.taken_path_length, 9),
            "shortest_path_length": round(self.shortest_path_length, 9),
            "reset_count": self.reset_count,
            "candidate_history": list(self.candidate_history),
            "condition_flags": list(self.condition_flags),
            "dialogue_rounds": self.dialogue_rounds,
            "split": self.split,
        }

    @staticmethod
    def from_dict(raw: dict) -> "EpisodeResult":
        return EpisodeResult(
            episode_id=raw["episode_id"],
            task=raw["task"],
            success=bool(raw["success"]),
            taken_path_length=float(raw["taken_path_length"]),
            shortest_path_length=float(raw["shortest_path_length"]),
            reset_count=int(raw.get("reset_count", 0)),
            candidate_history=tuple(raw.get("candidate_history", ())),
            condition_flags=tuple(bool(f) for f in raw.get("condition_flags", ())),
            dialogue_rounds=int(raw.get("dialogue_rounds", 0)),
            split=raw.get("split", "validation"),
        )


def save_results(results: list[EpisodeResult], path: str | Path) -> None:
    lines = [json.dumps(r.to_dict(), sort_keys=True) for r in results]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_results(path: str | Path) -> list[EpisodeResult]:
    return [
        EpisodeResult.from_dict(json.loads(line))
        for line in Path(path).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]


def spl(results: list[EpisodeResult]) -> float:
    """Mean of S_i * l_i / max(p_i, l_i)."""
    if not results:
        raise UndefinedMetricError("SPL over an empty result set")
    total = 0.0
    for r in results:
        if r.success:
            total += r.shortest_path_length / max(r.taken_path_length, r.shortest_path_length)
    return total / len(results)


def ecr(candidate_history: tuple[int, ...] | list[int]) -> float:
    """Excluded candidate rate over the dialogue's candidate-set sizes.

    A single-candidate start is already disambiguated, so the 0/0 limit is 1.
    """
    sizes = list(candidate_history)
    if not sizes or sizes[0] < 1:
        raise UndefinedMetricError("ECR needs a history starting at >= 1 candidate")
    if any(b > a for a, b in zip(sizes, sizes[1:])):
        raise ContractViolation("candidate history increased between rounds")
    if sizes[0] == 1:
        return 1.0
    excluded = sum(a - b for a, b in zip(sizes, sizes[1:]))
    return excluded / (sizes[0] - 1)


def scr(condition_flags) -> float:
    flags = list(condition_flags)
    if not flags:
        raise UndefinedMetricError("SCR over zero conditions")
    return sum(1 for f in flags if f) / len(flags)


@dataclass(frozen=True)
class Report:
    task: str
    split: str
    episodes: int
    pl_mean: float
    sr_pct: float
    spl_pct: float
    rt_mean: float | None
    ecr_mean: float | None = None
    scr_mean: float | None = None

    def to_dict(self) -> dict:
        def r2(v):
            return None if v is None else round(v, 2)

        return {
            "task": self.task,
            "split": self.split,
            "episodes": self.episodes,
            "PL": r2(self.pl_mean),
            "SR": r2(self.sr_pct),
            "SPL": r2(self.spl_pct),
            "ECR": r2(self.ecr_mean),
            "SCR": r2(self.scr_mean),
            "RT": r2(self.rt_mean),
        }

    def render(self) -> str:
        cols = self.to_dict()
        keys = ["PL", "SR", "SPL"]
        if self.task == "social_loconav":
            keys.append("ECR")
        if self.task == "loco_manip":
            keys.append("SCR")
        keys.append("RT")
        header = " | ".join(f"{k:>6}" for k in keys)
        row = " | ".join(
            f"{cols[k]:>6.2f}" if cols[k] is not None else f"{'-':>6}" for k in keys
        )
        title = f"{self.task} [{self.split}] over {self.episodes} episodes"
        return f"{title}\n{header}\n{row}"


def aggregate(results: list[EpisodeResult], split: str | None = None) -> Report:
    """Per-task report with the standard column semantics."""
    if split is not None:
        results = [r for r in results if r.split == split]
    if not results:
        raise UndefinedMetricError("aggregate over an empty result set")
    tasks = {r.task for r in results}
    if len(tasks) > 1:
        raise ContractViolation(f"mixed tasks in one aggregate: {sorted(tasks)}")
    task = tasks.pop()

    n = len(results)
    pl_mean = sum(r.taken_path_length for r in results) / n
    sr_pct = 100.0 * sum(1 for r in results if r.success) / n
    spl_pct = 100.0 * spl(results)
    rt_values = [r.reset_count for r in results]
    rt_mean: float | None = sum(rt_values) / n
    if task == "loco_manip" and all(v == 0 for v in rt_values):
        rt_mean = None  # rendered as "-" when no resets are defined

    ecr_mean = None
    if task == "social_loconav":
        ecr_values = [ecr(r.candidate_history) for r in results if r.candidate_history]
        ecr_mean = sum(ecr_values) / len(ecr_values) if ecr_values else None
    scr_mean = None
    if task == "loco_manip":
        scr_values = [scr(r.condition_flags) for r in results if r.condition_flags]
        scr_mean = sum(scr_values) / len(scr_values) if scr_values else None

    return Report(
        task=task,
        split=split or results[0].split,
        episodes=n,
        pl_mean=pl_mean,
        sr_pct=sr_pct,
        spl_pct=spl_pct,
        rt_mean=rt_mean,
        ecr_mean=ecr_mean,
        scr_mean=scr_mean,
    )
