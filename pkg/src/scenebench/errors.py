"""Exception types shared across the toolkit."""


class SceneBenchError(Exception):
    """Base class for all toolkit errors."""


class SceneFormatError(SceneBenchError):
    """Scene file is malformed. Carries the offending field/record when known."""

    def __init__(self, message: str, *, record: str | None = None, field: str | None = None):
        self.record = record
        self.field = field
        where = "".join(f" [{k}={v}]" for k, v in (("record", record), ("field", field)) if v)
        super().__init__(message + where)


class SceneValidationError(SceneBenchError):
    """Scene content violates a structural invariant (duplicate ids, bad AABB, ...)."""


class ContractViolation(SceneBenchError):
    """A caller broke an operation precondition."""


class LookupError_(SceneBenchError):
    """Unknown instance or region id."""


class GroundingFailure(SceneBenchError):
    """Description could not be resolved to a unique instance.

    ``reason`` is one of ``anchor``, ``relation``, ``ambiguous``; ``ties`` lists
    the tied instance ids for the ambiguous case.
    """

    def __init__(self, reason: str, detail: str = "", ties: list[str] | None = None):
        self.reason = reason
        self.ties = ties or []
        tie_str = f" (ties: {', '.join(self.ties)})" if self.ties else ""
        super().__init__(f"grounding failed [{reason}] {detail}{tie_str}")


class GenerationFailure(SceneBenchError):
    """Episode or instruction generation could not produce a valid artifact."""


class TargetExcluded(GenerationFailure):
    """No qualifying collision-free path exists for the requested target."""


class UndefinedMetricError(SceneBenchError):
    """Metric requested over an empty or ill-formed result set."""


class EpisodeInvalidError(SceneBenchError):
    """Episode is inconsistent with the loaded scene (bad start cell, wrong scene)."""


class SizingError(SceneBenchError):
    """Scene extent does not fit the occupancy grid at the requested resolution."""


class TransportError(SceneBenchError):
    """External provider (embedding / LLM) was unreachable or misbehaved."""
