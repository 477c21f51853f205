import os
import time

import pytest

from main import EXIT_OK, main
from src.analysis.pipeline import IccAnalyzer
from src.analysis.stats import ScalingStats
from src.domain.generators.scaling import ScalingWorldGenerator
from src.monitor.simulator import Monitor


def test_pair_patterns_cover_every_threat():
    monitor = Monitor(ScalingWorldGenerator().generate_world(8))
    data = monitor.run(test_mode=True).to_bytes()
    threats = [v.threat.value for v in IccAnalyzer().run(data, monitor.metadata()).verdicts]
    assert threats == ["hijacking", "collusion", "collusion", "spoofing"] * 2


def test_stats_frames():
    stats = ScalingStats([2, 1], repeats=2)
    runs = stats.measure()
    assert len(runs) == 2 * 2 * 5
    summary = stats.summary()
    assert list(summary.index) == [1, 2]
    assert list(summary["models"]) == [1, 2]
    assert len(stats.stage_ratios()) == 1
    assert stats.per_model_ratio() >= 1.0


def test_scaling_command_writes_outputs(tmp_path):
    out = str(tmp_path / "scaling")
    assert main(["scaling", "--sizes", "1,2", "--repeats", "1", "--out", out]) == EXIT_OK
    for name in ("scaling_summary.txt", "scaling_summary.csv", "scaling_runs.csv",
                 "1_stage_times.png", "2_per_model.png"):
        assert os.path.exists(os.path.join(out, name))


@pytest.mark.slow
def test_two_hundred_models_within_two_seconds():
    monitor = Monitor(ScalingWorldGenerator().generate_world(200))
    data = monitor.run(test_mode=True).to_bytes()
    start = time.perf_counter()
    result = IccAnalyzer().run(data, monitor.metadata())
    assert len(result.verdicts) == 200
    assert time.perf_counter() - start < 2.0


@pytest.mark.slow
def test_build_stage_grows_linearly():
    stats = ScalingStats([100, 200, 400], repeats=3)
    assert all(ratio <= 2.5 for ratio in stats.stage_ratios("build"))
