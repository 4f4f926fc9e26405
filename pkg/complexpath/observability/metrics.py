from __future__ import annotations

import time
from threading import Lock
from typing import Any, Dict


class MetricsCollector:
    def __init__(self) -> None:
        self._lock = Lock()
        self._state: Dict[str, Any] = {}
        self.reset()

    def reset(self) -> None:
        with self._lock:
            self._state = {
                "function_evaluations": 0,
                "newton_iterations": 0,
                "integrations": 0,
                "macro_steps": 0,
                "blow_ups": 0,
                "solver_starts": 0,
                "solver_successes": 0,
                "cache_hits": 0,
                "cache_misses": 0,
                "last_integration_latency_ms": 0,
                "avg_integration_latency_ms": 0.0,
                "last_updated_epoch_ms": int(time.time() * 1000),
            }

    def record_integration(
        self, macro_steps: int, function_evaluations: int, newton_iterations: int, latency_ms: int
    ) -> None:
        with self._lock:
            self._state["integrations"] += 1
            self._state["macro_steps"] += macro_steps
            self._state["function_evaluations"] += function_evaluations
            self._state["newton_iterations"] += newton_iterations
            self._state["last_integration_latency_ms"] = latency_ms
            count = self._state["integrations"]
            prev_avg = float(self._state["avg_integration_latency_ms"])
            self._state["avg_integration_latency_ms"] = ((prev_avg * (count - 1)) + latency_ms) / count
            self._touch()

    def record_blow_up(self) -> None:
        with self._lock:
            self._state["blow_ups"] += 1
            self._touch()

    def record_solver_start(self, converged: bool) -> None:
        with self._lock:
            self._state["solver_starts"] += 1
            if converged:
                self._state["solver_successes"] += 1
            self._touch()

    def record_cache_hit(self) -> None:
        with self._lock:
            self._state["cache_hits"] += 1
            self._touch()

    def record_cache_miss(self) -> None:
        with self._lock:
            self._state["cache_misses"] += 1
            self._touch()

    def snapshot(self) -> Dict[str, Any]:
        with self._lock:
            hits = int(self._state["cache_hits"])
            misses = int(self._state["cache_misses"])
            lookups = hits + misses
            starts = int(self._state["solver_starts"])
            successes = int(self._state["solver_successes"])
            return {
                **self._state,
                "cache_hit_rate": round(hits / lookups, 4) if lookups else 0.0,
                "solver_success_rate": round(successes / starts, 4) if starts else 0.0,
            }

    def _touch(self) -> None:
        self._state["last_updated_epoch_ms"] = int(time.time() * 1000)


metrics_collector = MetricsCollector()
