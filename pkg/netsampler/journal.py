"""
Run journal for netsampler.

Stores every progress note, warning and error raised while loading graphs,
drawing samples, computing statistics and writing reports. Entries are
forwarded to the stdlib logger `netsampler.<stage>` and can be streamed over
WebSocket by the API. Journal entries never enter report files.
"""

import asyncio
import logging
import threading
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import AsyncGenerator, Callable, Optional

_LEVELS = {
    "progress": logging.INFO,
    "result": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
}


class Stage(str, Enum):
    LOADER = "loader"
    SAMPLER = "sampler"
    STATS = "stats"
    REPORT = "report"
    HARNESS = "harness"
    API = "api"


class EventKind(str, Enum):
    PROGRESS = "progress"
    WARNING = "warning"
    ERROR = "error"
    RESULT = "result"


@dataclass
class JournalEntry:
    """A single journal event."""
    stage: Stage
    kind: EventKind
    content: str
    timestamp: datetime = field(default_factory=datetime.now)
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "type": "event",
            "stage": self.stage.value,
            "kind": self.kind.value,
            "content": self.content,
            "timestamp": self.timestamp.isoformat(),
            "metadata": self.metadata,
        }


class RunJournal:
    """
    Central event store shared by the harness, CLI and API.

    Thread-safe: harness workers append from pool threads while the API
    streams from the event loop.
    """

    def __init__(self, max_entries: int = 10_000):
        self.entries: list[JournalEntry] = []
        self._max_entries = max_entries
        self._dropped = 0
        self._lock = threading.Lock()
        self._callbacks: list[Callable[[JournalEntry], None]] = []

    def add_event(
        self,
        stage: Stage,
        content: str,
        kind: EventKind = EventKind.PROGRESS,
        metadata: Optional[dict] = None,
    ) -> JournalEntry:
        """Record an event and notify listeners."""
        entry = JournalEntry(stage=stage, kind=kind, content=content, metadata=metadata or {})
        with self._lock:
            self.entries.append(entry)
            if len(self.entries) > self._max_entries:
                overflow = len(self.entries) - self._max_entries
                del self.entries[:overflow]
                self._dropped += overflow
            callbacks = list(self._callbacks)

        logging.getLogger(f"netsampler.{stage.value}").log(_LEVELS[kind.value], content)

        for callback in callbacks:
            try:
                callback(entry)
            except Exception:
                pass
        return entry

    def progress(self, stage: Stage, content: str, **metadata) -> JournalEntry:
        return self.add_event(stage, content, EventKind.PROGRESS, metadata)

    def warning(self, stage: Stage, content: str, **metadata) -> JournalEntry:
        return self.add_event(stage, content, EventKind.WARNING, metadata)

    def error(self, stage: Stage, content: str, **metadata) -> JournalEntry:
        return self.add_event(stage, content, EventKind.ERROR, metadata)

    def result(self, stage: Stage, content: str, **metadata) -> JournalEntry:
        return self.add_event(stage, content, EventKind.RESULT, metadata)

    def on_event(self, callback: Callable[[JournalEntry], None]) -> None:
        """Register callback for every new entry."""
        with self._lock:
            self._callbacks.append(callback)

    def get_full_context(self, limit: int = 200) -> dict:
        """Recent entries plus counts by kind."""
        with self._lock:
            recent = list(self.entries[-limit:])
            counts: dict[str, int] = {}
            for entry in self.entries:
                counts[entry.kind.value] = counts.get(entry.kind.value, 0) + 1
            dropped = self._dropped
        return {
            "events": [e.to_dict() for e in recent],
            "counts": counts,
            "dropped": dropped,
        }

    def get_errors(self) -> list[dict]:
        with self._lock:
            return [e.to_dict() for e in self.entries if e.kind == EventKind.ERROR]

    async def stream(self, poll: float = 0.25, keepalive: float = 30.0) -> AsyncGenerator[dict, None]:
        """Async generator of new entries for WebSocket clients."""
        with self._lock:
            cursor = len(self.entries) + self._dropped
        idle = 0.0
        while True:
            with self._lock:
                start = max(cursor - self._dropped, 0)
                fresh = list(self.entries[start:])
                cursor = len(self.entries) + self._dropped
            if fresh:
                idle = 0.0
                for entry in fresh:
                    yield entry.to_dict()
                continue
            await asyncio.sleep(poll)
            idle += poll
            if idle >= keepalive:
                idle = 0.0
                yield {"type": "keepalive", "timestamp": datetime.now().isoformat()}

    def clear(self) -> None:
        with self._lock:
            self.entries.clear()
            self._dropped = 0


# Global journal instance
journal = RunJournal()
