from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))


def pytest_configure(config: pytest.Config) -> None:
    config.addinivalue_line("markers", "slow: long-running searches and fine-grid runs (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def _fresh_metrics():
    from complexpath.observability import metrics_collector

    metrics_collector.reset()
    yield
