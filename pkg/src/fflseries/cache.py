"""Persistent power-sum cache.

One JSON file per entry.  The key is a semantic descriptor (field moduli,
β, e, y and t as text); the file name is a digest of that descriptor and
the descriptor is stored inside, so entries remain readable by other
tools.  Writers take a per-entry file lock and publish with an atomic
rename, so readers never observe a partial file and need no lock.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from filelock import FileLock

from .rings import LaurentSeries

log = logging.getLogger(__name__)

ENGINE_VERSION = "fflseries-cache-1"


def descriptor_text(kind, key):
    return json.dumps({"kind": kind, "key": key}, sort_keys=True, ensure_ascii=False)


class PowerSumCache:
    def __init__(self, path, version=ENGINE_VERSION):
        self.path = Path(path)
        self.path.mkdir(parents=True, exist_ok=True)
        self.version = version
        self.hits = 0
        self.misses = 0

    def _file(self, kind, key):
        h = hashlib.sha256(descriptor_text(kind, key).encode()).hexdigest()[:40]
        return self.path / f"{h}.json"

    def _read(self, file, desc):
        try:
            with open(file, encoding="utf-8") as fh:
                entry = json.load(fh)
            if entry["descriptor"] != desc:
                raise ValueError("descriptor mismatch")
            if not {"prec", "exact", "coeffs", "val"} <= set(entry["value"]):
                raise ValueError("malformed value")
            return entry
        except FileNotFoundError:
            return None
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry %s: %s", file.name, exc)
            return None

    def get(self, kind, key, field, N):
        """The cached value truncated to O(θ^{-N}), or None."""
        desc = descriptor_text(kind, key)
        entry = self._read(self._file(kind, key), desc)
        if entry is None or entry.get("version") != self.version:
            self.misses += 1
            return None
        try:
            value = LaurentSeries.from_dict(field, entry["value"])
        except (ValueError, KeyError, TypeError) as exc:
            log.warning("ignoring corrupt cache entry for %s: %s", desc, exc)
            self.misses += 1
            return None
        if value.cap < N:
            self.misses += 1
            return None
        self.hits += 1
        return value.truncate(N)

    def put(self, kind, key, value):
        """Store ``value`` unless an entry of equal or higher precision exists."""
        desc = descriptor_text(kind, key)
        file = self._file(kind, key)
        with FileLock(str(file) + ".lock"):
            old = self._read(file, desc)
            if old is not None and old.get("version") == self.version:
                v = old["value"]
                old_cap = float("inf") if v["exact"] else v["prec"]
                if old_cap >= value.cap:
                    return False
            entry = {"version": self.version, "descriptor": desc, "value": value.to_dict()}
            fd, tmp = tempfile.mkstemp(dir=self.path, prefix=".tmp-", suffix=".json")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    json.dump(entry, fh, sort_keys=True, ensure_ascii=False)
                os.replace(tmp, file)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return True
