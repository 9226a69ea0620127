from .app import SCHEMA_VERSION, create_app
from .store import EventLog

__all__ = ["SCHEMA_VERSION", "create_app", "EventLog"]
