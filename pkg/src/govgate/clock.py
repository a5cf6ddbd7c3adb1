"""Injectable time and id sources.

Traces carry timestamps and sessions carry generated ids; both come from
ports so that suite runs can be replayed byte-for-byte.
"""

from __future__ import annotations

import threading
import uuid
from datetime import datetime, timedelta, timezone
from typing import Callable, Protocol


class Clock(Protocol):
    def now(self) -> datetime: ...


class SystemClock:
    def now(self) -> datetime:
        return datetime.now(timezone.utc)


class TickClock:
    """Deterministic clock: starts at a fixed instant, advances a fixed step per call."""

    def __init__(self, start: datetime | None = None, step_seconds: float = 1.0):
        self._current = start or datetime(2030, 1, 1, tzinfo=timezone.utc)
        self._step = timedelta(seconds=step_seconds)
        self._lock = threading.Lock()

    def now(self) -> datetime:
        with self._lock:
            current = self._current
            self._current = current + self._step
            return current


IdFactory = Callable[[], str]


def random_ids() -> IdFactory:
    return lambda: str(uuid.uuid4())


def sequential_ids(prefix: str = "") -> IdFactory:
    """Deterministic UUID-format ids: 00000000-...-0001, -0002, ... per factory."""
    counter = 0
    lock = threading.Lock()

    def next_id() -> str:
        nonlocal counter
        with lock:
            counter += 1
            value = counter
        return prefix + str(uuid.UUID(int=value))

    return next_id
