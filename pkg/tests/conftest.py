# conftest.py
# ----------------------------------------------------------------
# shared fixtures: repository root on sys.path, corpus access,
# simulate-then-analyze helper
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

import os
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.analysis.pipeline import IccAnalyzer  # noqa: E402
from src.domain.catalog import default_catalog  # noqa: E402
from src.monitor.simulator import Monitor  # noqa: E402
from src.scenario.corpus import builtin_corpus, corpus_files  # noqa: E402
from src.scenario.parser import parse_scenario  # noqa: E402

GOLDEN_DIR = os.path.join(ROOT, "tests", "golden")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running property and scaling checks")


@pytest.fixture(autouse=True)
def _test_mode(monkeypatch):
    monkeypatch.setenv("ICCTAINT_TEST_MODE", "1")


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def corpus():
    return {s.name: s for s in builtin_corpus()}


def simulate(scenario):
    """(log bytes, metadata, monitor) of one deterministic run."""
    monitor = Monitor(scenario)
    return monitor.run(test_mode=True).to_bytes(), monitor.metadata(), monitor


def analyze_scenario(scenario, **kwargs):
    data, meta, _ = simulate(scenario)
    return IccAnalyzer(**kwargs).run(data, meta)


def scenario_from(text):
    return parse_scenario(text)


def corpus_paths():
    return corpus_files()


def golden(name, mode="r"):
    with open(os.path.join(GOLDEN_DIR, name), mode) as f:
        return f.read()
