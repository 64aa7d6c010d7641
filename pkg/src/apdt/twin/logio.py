"""Newline-delimited JSON telemetry log: append, dump, replay.

Line 1 is the header record ``{"apdt_log_version": 1}``; every following
line is one TelemetrySample. Replays abort on the first corrupt line with
its 1-based line number.
"""

from __future__ import annotations

import json
import os
from typing import Optional

from ..errors import CorruptRecord
from ..model import TelemetrySample
from .store import TwinStore

LOG_VERSION = 1
HEADER = {"apdt_log_version": LOG_VERSION}


class LogWriter:
    """Append-only sample log; flushed per record so the version published
    to readers is never ahead of durable state."""

    def __init__(self, path: str):
        self.path = path
        new = not os.path.exists(path) or os.path.getsize(path) == 0
        self._fh = open(path, "a", encoding="utf-8")
        if new:
            self._fh.write(json.dumps(HEADER, separators=(",", ":")) + "\n")
            self._fh.flush()

    def append(self, sample: TelemetrySample) -> None:
        self._fh.write(json.dumps(sample.to_log_json(), separators=(",", ":")) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def write_log(store: TwinStore, path: str) -> int:
    """Dump the store's retained window to a fresh log. Returns record count."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(HEADER, separators=(",", ":")) + "\n")
        for snap in store.iter_samples():
            sample = TelemetrySample(taken_at=snap.taken_at, aps=snap.aps, clients=snap.clients)
            fh.write(json.dumps(sample.to_log_json(), separators=(",", ":")) + "\n")
            n += 1
    return n


def replay_log(path: str, store: Optional[TwinStore] = None) -> TwinStore:
    """Rebuild a store by re-applying every logged sample in order."""
    if store is None:
        store = TwinStore()
    with open(path, encoding="utf-8") as fh:
        header_line = fh.readline()
        if not header_line.strip():
            raise CorruptRecord(1, "missing header")
        try:
            header = json.loads(header_line)
        except json.JSONDecodeError as e:
            raise CorruptRecord(1, f"bad header: {e}") from e
        if header.get("apdt_log_version") != LOG_VERSION:
            raise CorruptRecord(1, f"unsupported log version {header.get('apdt_log_version')!r}")
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                raise CorruptRecord(lineno, "blank record")
            try:
                record = json.loads(line)
                sample = TelemetrySample.from_log_json(record)
            except Exception as e:
                raise CorruptRecord(lineno, str(e)) from e
            store.apply_sample(sample)
    return store
