"""In-process event bus backing the server-sent event stream.

Events get a monotone sequence number; a ring buffer supports
Last-Event-ID resume for reconnecting consumers.
"""

from __future__ import annotations

import json
import threading
from collections import deque
from typing import Iterator, Optional

EVENT_TYPES = ("SNAPSHOT_UPDATED", "ALERT_RAISED", "PLAN_TRANSITIONED", "SIM_COMPLETED")


class EventBus:
    def __init__(self, capacity: int = 4096):
        self._buffer: deque[tuple[int, str, dict]] = deque(maxlen=capacity)
        self._seq = 0
        self._cond = threading.Condition()

    def publish(self, event_type: str, payload: dict) -> int:
        if event_type not in EVENT_TYPES:
            raise ValueError(f"unknown event type {event_type}")
        with self._cond:
            self._seq += 1
            self._buffer.append((self._seq, event_type, payload))
            self._cond.notify_all()
            return self._seq

    @property
    def last_sequence(self) -> int:
        with self._cond:
            return self._seq

    def since(self, last_id: int) -> list[tuple[int, str, dict]]:
        with self._cond:
            return [e for e in self._buffer if e[0] > last_id]

    def wait(self, last_id: int, timeout: float) -> list[tuple[int, str, dict]]:
        with self._cond:
            ready = [e for e in self._buffer if e[0] > last_id]
            if ready:
                return ready
            self._cond.wait(timeout)
            return [e for e in self._buffer if e[0] > last_id]

    def sse_stream(
        self,
        last_event_id: int = 0,
        heartbeat_seconds: float = 15.0,
        stop: Optional[threading.Event] = None,
    ) -> Iterator[str]:
        """Yield SSE frames forever (until the connection drops)."""
        cursor = last_event_id
        while stop is None or not stop.is_set():
            batch = self.wait(cursor, timeout=heartbeat_seconds)
            if not batch:
                yield ": heartbeat\n\n"
                continue
            for seq, event_type, payload in batch:
                data = json.dumps({"sequence": seq, "event_type": event_type, "payload": payload})
                yield f"id: {seq}\nevent: {event_type}\ndata: {data}\n\n"
                cursor = seq
