from __future__ import annotations

import csv
import json
import logging
from collections import OrderedDict
from pathlib import Path
from threading import Lock
from typing import Any, Dict

import numpy as np

from complexpath.errors import ArgumentError
from complexpath.observability import metrics_collector
from complexpath.order_conditions.schemes import SchemeDescriptor
from complexpath.paths.model import ComplexPath

logger = logging.getLogger(__name__)


class FixtureStore:
    KIND_DIRS = {
        "path": "paths",
        "scheme": "schemes",
        "reference": "references",
    }

    def __init__(self, root: Path, max_cache_size: int = 256) -> None:
        self.root = Path(root)
        self.max_cache_size = max_cache_size
        self._cache: "OrderedDict[str, Any]" = OrderedDict()
        self._lock = Lock()
        self._ensure_dirs()

    def _ensure_dirs(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        for folder in self.KIND_DIRS.values():
            (self.root / folder).mkdir(parents=True, exist_ok=True)

    def _file_for(self, kind: str, name: str) -> Path:
        if not name or any(sep in name for sep in ("/", "\\")) or name.startswith("."):
            raise ArgumentError(f"invalid fixture name {name!r}")
        suffix = ".csv" if kind == "reference" else ".json"
        return self.root / self.KIND_DIRS[kind] / f"{name}{suffix}"

    def _remember(self, key: str, value: Any) -> None:
        with self._lock:
            self._cache[key] = value
            self._cache.move_to_end(key)
            while len(self._cache) > self.max_cache_size:
                self._cache.popitem(last=False)

    def _cached(self, key: str) -> Any | None:
        with self._lock:
            cached = self._cache.get(key)
            if cached is not None:
                self._cache.move_to_end(key)
                metrics_collector.record_cache_hit()
                return cached
            metrics_collector.record_cache_miss()
            return None

    def save_document(self, kind: str, name: str, payload: Dict[str, Any]) -> Path:
        path = self._file_for(kind, name)
        path.write_text(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self._remember(f"{kind}:{name}", payload)
        return path

    def load_document(self, kind: str, name: str) -> tuple[Dict[str, Any] | None, str]:
        key = f"{kind}:{name}"
        cached = self._cached(key)
        if cached is not None:
            return cached, "cache"
        path = self._file_for(kind, name)
        if not path.exists():
            return None, "miss"
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            logger.warning("ignoring unreadable fixture %s: %s", path, exc)
            return None, "disk"
        self._remember(key, payload)
        return payload, "disk"

    def save_path(self, path: ComplexPath) -> Path:
        if not path.name:
            raise ArgumentError("only named paths can be stored")
        return self.save_document("path", path.name, path.to_dict())

    def load_path(self, name: str) -> ComplexPath | None:
        payload, _ = self.load_document("path", name)
        return ComplexPath.from_dict(payload) if payload is not None else None

    def save_scheme(self, name: str, scheme: SchemeDescriptor) -> Path:
        return self.save_document("scheme", name, scheme.to_dict())

    def load_scheme(self, name: str) -> SchemeDescriptor | None:
        payload, _ = self.load_document("scheme", name)
        return SchemeDescriptor.from_dict(payload) if payload is not None else None

    def save_reference(self, name: str, times: np.ndarray, states: np.ndarray, header: Dict[str, Any]) -> Path:
        """Write a trajectory as CSV with ``# key=value`` generator lines on top."""
        path = self._file_for("reference", name)
        states = np.atleast_2d(np.asarray(states, dtype=complex))
        dim = states.shape[1]
        with path.open("w", newline="", encoding="utf-8") as handle:
            for key in sorted(header):
                handle.write(f"# {key}={header[key]}\n")
            writer = csv.writer(handle)
            writer.writerow(["t", *[f"re_{i + 1}" for i in range(dim)], *[f"im_{i + 1}" for i in range(dim)]])
            for t, row in zip(times, states):
                writer.writerow(
                    [format(float(t), ".17g")]
                    + [format(v, ".17g") for v in row.real]
                    + [format(v, ".17g") for v in row.imag]
                )
        self._remember(f"reference:{name}", (dict(header), np.asarray(times, dtype=float), states))
        return path

    def load_reference(self, name: str) -> tuple[Dict[str, str], np.ndarray, np.ndarray] | None:
        key = f"reference:{name}"
        cached = self._cached(key)
        if cached is not None:
            header, times, states = cached
            return {k: str(v) for k, v in header.items()}, times, states
        path = self._file_for("reference", name)
        if not path.exists():
            return None
        header: Dict[str, str] = {}
        rows: list[list[float]] = []
        with path.open(newline="", encoding="utf-8") as handle:
            lines = [line for line in handle]
        body = []
        for line in lines:
            if line.startswith("#"):
                key_value = line[1:].strip()
                if "=" in key_value:
                    k, v = key_value.split("=", 1)
                    header[k.strip()] = v.strip()
            else:
                body.append(line)
        reader = csv.reader(body)
        next(reader, None)
        for record in reader:
            if record:
                rows.append([float(value) for value in record])
        data = np.array(rows, dtype=float)
        dim = (data.shape[1] - 1) // 2
        times = data[:, 0]
        states = data[:, 1 : 1 + dim] + 1j * data[:, 1 + dim :]
        self._remember(key, (dict(header), times, states))
        return header, times, states
