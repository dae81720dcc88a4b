"""Append-only JSON-lines cache of computed cells.

Each line is a CacheRecord whose checksum covers the key and the value, so a
damaged or hand-edited line is detected when the file is loaded.
"""

import hashlib
import json
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Union

from latdisc.logger import get_logger
from latdisc.models import CacheRecord

logger = get_logger(__name__)


class CacheCorruptedError(RuntimeError):
    """The cache file cannot be trusted."""


def canonical(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


def cache_key(**parts: Any) -> str:
    """Canonical text of the parts that determine a cell."""
    return canonical(parts)


def checksum(key: str, value: Any) -> str:
    return hashlib.sha256((key + "\n" + canonical(value)).encode("utf-8")).hexdigest()


class ResultCache:
    """Key/value cache backed by one JSON-lines file.

    With ``verify_fraction`` > 0 a deterministic, key-hashed share of hits is
    recomputed and compared with the stored value.
    """

    def __init__(self, path: Union[str, Path], verify_fraction: float = 0.0) -> None:
        if not 0.0 <= verify_fraction <= 1.0:
            raise ValueError(f"verify fraction must be in [0, 1], got {verify_fraction}")
        self.path = Path(path)
        self.verify_fraction = verify_fraction
        self._records: Dict[str, CacheRecord] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0
        self.verified = 0
        self._load()

    def _load(self) -> None:
        if not self.path.exists():
            return
        with open(self.path, "r", encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                if not line.strip():
                    continue
                try:
                    record = CacheRecord.model_validate(json.loads(line))
                except ValueError as e:
                    raise CacheCorruptedError(f"{self.path}:{lineno}: unreadable record: {e}") from e
                if record.checksum != checksum(record.key, record.value):
                    raise CacheCorruptedError(f"{self.path}:{lineno}: checksum mismatch for key {record.key}")
                self._records[record.key] = record
        logger.debug(f"Loaded {len(self._records)} cache records from {self.path}")

    def __len__(self) -> int:
        return len(self._records)

    def __contains__(self, key: str) -> bool:
        return key in self._records

    def get(self, key: str) -> Optional[Any]:
        record = self._records.get(key)
        return record.value if record is not None else None

    def put(self, key: str, value: Any) -> None:
        """Store a JSON-serializable value and append it to the file."""
        value = json.loads(canonical(value))
        record = CacheRecord(
            key=key,
            value=value,
            created_at=datetime.now(timezone.utc).isoformat(),
            checksum=checksum(key, value),
        )
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(canonical(record.model_dump()) + "\n")
            self._records[key] = record

    def should_verify(self, key: str) -> bool:
        if self.verify_fraction <= 0.0:
            return False
        digest = int(hashlib.sha256(key.encode("utf-8")).hexdigest()[:8], 16)
        return digest / 2 ** 32 < self.verify_fraction

    def get_or_compute(self, key: str, compute: Callable[[], Any]) -> Any:
        """Cached value for ``key``, computing and storing it on a miss.

        Raises:
            CacheCorruptedError: if a verified hit differs from a fresh computation.
        """
        if key in self._records:
            self.hits += 1
            cached = self._records[key].value
            if self.should_verify(key):
                fresh = json.loads(canonical(compute()))
                self.verified += 1
                if fresh != cached:
                    raise CacheCorruptedError(f"cached value for {key} differs from a fresh computation")
            return cached
        self.misses += 1
        value = compute()
        self.put(key, value)
        return json.loads(canonical(value))

    def compact(self) -> int:
        """Rewrite the file with one record per key; returns the number of dropped lines."""
        with self._lock:
            lines = 0
            if self.path.exists():
                with open(self.path, "r", encoding="utf-8") as handle:
                    lines = sum(1 for line in handle if line.strip())
            tmp = self.path.with_suffix(self.path.suffix + ".tmp")
            with open(tmp, "w", encoding="utf-8") as handle:
                for key in sorted(self._records):
                    handle.write(canonical(self._records[key].model_dump()) + "\n")
            tmp.replace(self.path)
        dropped = lines - len(self._records)
        logger.info(f"Compacted {self.path}: {len(self._records)} records, {dropped} stale lines dropped")
        return dropped
