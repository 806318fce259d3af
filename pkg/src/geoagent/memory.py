"""Long-term key-value memory for agent workflows.

Flat string keys mapped to values with unit and provenance metadata.
Reads of absent keys are explicit misses (None), never exceptions.
When given a path the store writes through on every put, so values
survive process restarts; concurrent writers are serialized by a lock.
"""

from __future__ import annotations

import json
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import ValidationError


@dataclass(frozen=True)
class MemoryRecord:
    value: object
    units: str | None = None
    source: str | None = None
    timestamp: str | None = None


class MemoryStore:
    def __init__(self, path: str | Path | None = None):
        self._path = Path(path) if path is not None else None
        self._records: dict[str, MemoryRecord] = {}
        self._lock = threading.Lock()
        if self._path is not None and self._path.exists():
            self._load()

    def _load(self):
        data = json.loads(self._path.read_text())
        self._records = {k: MemoryRecord(**v) for k, v in data.items()}

    def _flush(self):
        if self._path is None:
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        data = {k: asdict(r) for k, r in self._records.items()}
        self._path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")

    def put(self, key: str, value, units: str | None = None, source: str | None = None):
        if not key:
            raise ValidationError("memory key must be non-empty")
        record = MemoryRecord(
            value=value,
            units=units,
            source=source,
            timestamp=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self._records[key] = record
            self._flush()

    def get(self, key: str) -> MemoryRecord | None:
        """Most recent record for the key, or None on a miss."""
        with self._lock:
            return self._records.get(key)

    def value(self, key: str, default=None):
        record = self.get(key)
        return default if record is None else record.value

    def keys(self) -> list[str]:
        with self._lock:
            return sorted(self._records)

    def items(self) -> list[tuple[str, MemoryRecord]]:
        with self._lock:
            return sorted(self._records.items())
