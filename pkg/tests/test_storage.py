from __future__ import annotations

import numpy as np
import pytest

from complexpath.errors import ArgumentError
from complexpath.observability import metrics_collector
from complexpath.observability.metrics import MetricsCollector
from complexpath.paths import ComplexPath, lookup
from complexpath.storage import FixtureStore


def test_store_creates_its_folders(tmp_path):
    FixtureStore(tmp_path / "fixtures")
    assert sorted(p.name for p in (tmp_path / "fixtures").iterdir()) == ["paths", "references", "schemes"]


def test_saved_document_is_served_from_the_cache(tmp_path):
    store = FixtureStore(tmp_path)
    store.save_document("path", "pair", {"weights": [[1.0, 0.0]]})
    payload, source = store.load_document("path", "pair")
    assert payload == {"weights": [[1.0, 0.0]]}
    assert source == "cache"
    assert metrics_collector.snapshot()["cache_hits"] == 1


def test_fresh_store_reads_from_disk(tmp_path):
    FixtureStore(tmp_path).save_path(lookup("complex-2-linear"))
    store = FixtureStore(tmp_path)
    _, source = store.load_document("path", "complex-2-linear")
    assert source == "disk"
    assert store.load_path("complex-2-linear") == lookup("complex-2-linear")
    assert metrics_collector.snapshot()["cache_misses"] == 1


def test_missing_document(tmp_path):
    store = FixtureStore(tmp_path)
    assert store.load_document("scheme", "nothing") == (None, "miss")
    assert store.load_scheme("nothing") is None
    assert store.load_reference("nothing") is None


def test_unreadable_document_is_skipped(tmp_path):
    store = FixtureStore(tmp_path)
    (tmp_path / "schemes" / "broken.json").write_text("{not json", encoding="utf-8")
    assert store.load_document("scheme", "broken") == (None, "disk")


@pytest.mark.parametrize("name", ["", "../escape", "a/b", ".hidden"])
def test_fixture_names_stay_inside_the_store(tmp_path, name):
    with pytest.raises(ArgumentError):
        FixtureStore(tmp_path).save_document("path", name, {})


def test_cache_evicts_the_oldest_entry(tmp_path):
    store = FixtureStore(tmp_path, max_cache_size=1)
    store.save_document("path", "first", {"n": 1})
    store.save_document("path", "second", {"n": 2})
    assert store.load_document("path", "first")[1] == "disk"


def test_reference_round_trip_keeps_complex_states(tmp_path):
    times = np.array([0.0, 0.5, 1.0])
    states = np.array([[1.0 + 0.5j, 2.0], [0.1 / 3.0, -1.0j], [np.pi, np.e + 1j]])
    FixtureStore(tmp_path).save_reference("traj", times, states, {"generator": "rk4", "dt": 0.5})
    header, loaded_times, loaded_states = FixtureStore(tmp_path).load_reference("traj")
    assert header == {"dt": "0.5", "generator": "rk4"}
    assert np.array_equal(loaded_times, times)
    assert np.array_equal(loaded_states, states)


def test_unnamed_paths_cannot_be_stored(tmp_path):
    with pytest.raises(ArgumentError):
        FixtureStore(tmp_path).save_path(ComplexPath((1.0,)))


def test_metrics_averages_and_rates():
    metrics = MetricsCollector()
    metrics.record_integration(10, 30, 0, 4)
    metrics.record_integration(20, 60, 5, 8)
    metrics.record_solver_start(True)
    metrics.record_solver_start(False)
    snapshot = metrics.snapshot()
    assert snapshot["integrations"] == 2
    assert snapshot["macro_steps"] == 30
    assert snapshot["function_evaluations"] == 90
    assert snapshot["newton_iterations"] == 5
    assert snapshot["avg_integration_latency_ms"] == pytest.approx(6.0)
    assert snapshot["solver_success_rate"] == 0.5
    assert snapshot["cache_hit_rate"] == 0.0
    metrics.reset()
    assert metrics.snapshot()["integrations"] == 0
