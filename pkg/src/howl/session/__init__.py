"""Session service: orchestration, persistence/replay, frame routing, sims."""

from .orchestrator import (
    Clock,
    LogicalClock,
    Orchestrator,
    SessionSettings,
    SystemClock,
    run_session,
)
from .record import (
    IncrementalWriter,
    SessionRecord,
    read_jsonl,
    replay,
    verify_replay,
    write_jsonl,
)
from .router import FrameRouter, NullRouter, RecordingRouter
from .sim import outcome_of, run_batch, run_one, scripted_bindings

__all__ = [
    "Clock",
    "FrameRouter",
    "IncrementalWriter",
    "LogicalClock",
    "NullRouter",
    "Orchestrator",
    "RecordingRouter",
    "SessionRecord",
    "SessionSettings",
    "SystemClock",
    "outcome_of",
    "read_jsonl",
    "replay",
    "run_batch",
    "run_one",
    "run_session",
    "scripted_bindings",
    "verify_replay",
    "write_jsonl",
]
