"""Append-only event log backing the verification service.

Every mutation (round started, selection made, grounding attempt, dialogue
message) is one JSON line; restarting the service replays the log, so rounds
and accuracy counters survive restarts.
"""

from __future__ import annotations

import json
from pathlib import Path


class EventLog:
    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self.events: list[dict] = []
        if self.path and self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self.events.append(json.loads(line))

    def append(self, event: dict) -> None:
        self.events.append(event)
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")

    def of_type(self, event_type: str) -> list[dict]:
        return [e for e in self.events if e.get("type") == event_type]
