import pytest

from conftest import analyze_scenario
from src.analysis.pipeline import verdict_triples
from src.analysis.report import Report, build_report
from src.scenario.corpus import builtin_corpus

SCENARIOS = builtin_corpus()


@pytest.mark.parametrize("scenario", SCENARIOS, ids=[s.name for s in SCENARIOS])
def test_scenario_verdicts_match_expectations(scenario):
    triples = verdict_triples(analyze_scenario(scenario).verdicts)
    for expected in scenario.expected_verdicts:
        assert (str(expected.sender), str(expected.receiver), expected.threat.value) in triples

    planted = {(str(e.sender), str(e.receiver), e.threat.value) for e in scenario.expected_verdicts}
    false_alarms = [t for t in triples if t[2] != "none" and t not in planted]
    assert false_alarms == []


def test_whole_corpus_accuracy():
    reports = [build_report(analyze_scenario(s), s.name, s.dataset, s.expected_verdicts, test_mode=True)
               for s in SCENARIOS]
    s = Report.merge(reports).score()
    assert s.precision == 1.0 and s.recall == 1.0
    assert s.tp == sum(1 for sc in SCENARIOS for e in sc.expected_verdicts if e.threat.is_threat)


def test_corpus_covers_every_threat():
    threats = {e.threat.value for s in SCENARIOS for e in s.expected_verdicts}
    assert threats == {"hijacking", "spoofing", "collusion", "none"}
