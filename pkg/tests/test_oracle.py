import pytest

from oracle import oracle_verdicts
from src.analysis.pipeline import IccAnalyzer
from src.domain.generators.random_worlds import RandomWorldGenerator
from src.domain.model import ThreatType
from src.monitor.simulator import Monitor


def _agree(scenario):
    monitor = Monitor(scenario)
    data = monitor.run(test_mode=True).to_bytes()
    result = IccAnalyzer().run(data, monitor.metadata())

    delivered = set()
    for verdict in result.verdicts:
        model = verdict.model
        if model.receiver.delivered:
            delivered.add((model.intent.intent_id, model.receiver.package, verdict.threat.value))
        else:
            assert verdict.threat is ThreatType.NONE, scenario.name
    assert delivered == oracle_verdicts(monitor), scenario.name


@pytest.mark.parametrize("seed", [1, 2])
def test_analyzer_agrees_with_ledger(seed):
    for world in RandomWorldGenerator(seed).generate_all(range(50)):
        _agree(world)


@pytest.mark.slow
def test_analyzer_agrees_with_ledger_many():
    for world in RandomWorldGenerator(2024).generate_all(range(1000)):
        _agree(world)


def test_oracle_on_corpus(corpus):
    # every corpus flow is one hop and goes through a delivery
    for name in ("hijack_location", "collusion_deviceid_file", "spoof_write", "topgood_hijack",
                 "broadcast_multi", "same_app_leak", "ourdev_receiver_shareference",
                 "ourdev_receiver_application"):
        _agree(corpus[name])


def test_random_worlds_are_reproducible():
    first = RandomWorldGenerator(5).generate_world(3)
    again = RandomWorldGenerator(5).generate_world(3)
    assert first == again
    assert first != RandomWorldGenerator(6).generate_world(3)
