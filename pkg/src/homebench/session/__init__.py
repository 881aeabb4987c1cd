from .trajectory import LogRecord, TrajectoryLog
from .core import Session, SessionClosedError
from .replay import ReplayMismatchError, replay

__all__ = [
    "LogRecord",
    "TrajectoryLog",
    "Session",
    "SessionClosedError",
    "ReplayMismatchError",
    "replay",
]
