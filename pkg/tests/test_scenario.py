import pytest

from conftest import corpus_paths
from src.domain.generators.random_worlds import RandomWorldGenerator
from src.domain.model import ComponentId, ComponentKind, ThreatType
from src.errors import ScenarioError
from src.scenario.corpus import DATASETS, builtin_corpus, find_scenario, load_file
from src.scenario.parser import parse_scenario, serialize_scenario
from src.scenario.script import StepKind, Trigger, ValueRef

MINIMAL = """\
%icc-scenario 1
scenario solo
app com.solo pid=7
  component Main activity exported
    on launch
      acquire getLatitude -> lat
      sink Log $lat
launch com.solo/Main
"""


def _with(line, base=MINIMAL):
    return base + line + "\n"


def _in_script(line):
    return MINIMAL.replace("launch com.solo/Main", line + "\nlaunch com.solo/Main")


def test_minimal_document():
    scenario = parse_scenario(MINIMAL)
    assert scenario.name == "solo"
    assert scenario.expected_verdicts == ()
    assert scenario.dataset == "extra"
    app = scenario.apps[0]
    assert app.process_id == 7
    comp = app.component("Main")
    assert comp.kind is ComponentKind.ACTIVITY and comp.exported
    steps = comp.script_for(Trigger.ON_LAUNCH).steps
    assert [s.kind for s in steps] == [StepKind.ACQUIRE_SOURCE, StepKind.CALL_SINK]


def test_hijack_location(corpus):
    scenario = corpus["hijack_location"]
    assert [a.package for a in scenario.apps] == ["com.victim", "com.malware1"]
    victim = scenario.apps[0].component("MainActivity")
    send = [s for s in victim.script_for(Trigger.ON_LAUNCH).steps if s.kind is StepKind.SEND_INTENT][0]
    assert send.intent.target is None and send.intent.action == "com.victim.SHOW"
    steal = scenario.apps[1].component("StealActivity")
    assert "com.victim.SHOW" in steal.filters[0].actions
    assert steal.script_for(Trigger.ON_RECEIVE_INTENT).steps[-1].method == "Log"


@pytest.mark.parametrize("text, line, field", [
    ("%icc-scenario 2\nscenario x\n", 1, "version"),
    (_in_script("      sink NoSuchSink $lat"), 8, "method"),
    (_in_script("      acquire readMind -> y"), 8, "method"),
    (_in_script("      acquire getDeviceId -> $y"), 8, "register"),
    (_with("launch com.solo/Missing"), 9, "launch"),
    (_with("expect com.solo/Main -> com.solo/Main maybe"), 9, "threat"),
    (_with("app com.solo pid=8"), 9, "package"),
    (_with("app com.other pid=7"), 9, "pid"),
    (_with("      frobnicate"), 9, "frobnicate"),
])
def test_schema_errors_are_positioned(text, line, field):
    with pytest.raises(ScenarioError) as info:
        parse_scenario(text)
    assert info.value.line == line
    assert info.value.field == field


def test_register_used_before_assignment():
    text = MINIMAL.replace("sink Log $lat", "sink Log $nope")
    with pytest.raises(ScenarioError, match="before assignment") as info:
        parse_scenario(text)
    assert info.value.line == 7


def test_register_assigned_twice():
    text = MINIMAL.replace("sink Log $lat", "acquire getDeviceId -> lat")
    with pytest.raises(ScenarioError, match="assigned twice"):
        parse_scenario(text)


def test_dangling_start_target():
    text = MINIMAL.replace("sink Log $lat", "start com.solo/Ghost")
    with pytest.raises(ScenarioError, match="dangling") as info:
        parse_scenario(text)
    assert info.value.field == "target"


def test_bad_validate_pattern():
    text = MINIMAL.replace("acquire getLatitude -> lat", "validate key '(unclosed'\n      acquire getLatitude -> lat")
    with pytest.raises(ScenarioError, match="bad pattern"):
        parse_scenario(text)


def test_missing_header():
    with pytest.raises(ScenarioError, match="header"):
        parse_scenario("scenario x\n")


def test_file_errors_name_the_file(tmp_path):
    path = tmp_path / "broken.icc"
    path.write_text("%icc-scenario 1\nscenario broken\nlaunch com.a/B\n")
    with pytest.raises(ScenarioError, match="broken.icc"):
        load_file(str(path))


@pytest.mark.parametrize("path", corpus_paths())
def test_corpus_round_trips(path):
    scenario = load_file(path)
    assert parse_scenario(serialize_scenario(scenario)) == scenario


def test_literal_starting_with_dollar():
    scenario = parse_scenario(_in_script("      sink Log $$5.00 $lat"))
    step = scenario.apps[0].component("Main").script_for(Trigger.ON_LAUNCH).steps[-1]
    assert step.values == (ValueRef.lit("$5.00"), ValueRef.reg("lat"))
    assert parse_scenario(serialize_scenario(scenario)) == scenario


@pytest.mark.parametrize("n", range(25))
def test_random_worlds_round_trip(n):
    scenario = RandomWorldGenerator(seed=7).generate_world(n)
    assert parse_scenario(serialize_scenario(scenario)) == scenario


def test_corpus_contents(corpus):
    assert len(corpus) >= 20
    assert {s.dataset for s in corpus.values()} <= set(DATASETS)
    assert sum(1 for s in corpus.values() if s.dataset == "droidbench") == 9
    assert sum(1 for s in corpus.values() if s.dataset == "iccta") == 3
    for name in ("collusion_deviceid_file", "spoof_write", "coincidental_format", "relay_chain",
                 "resolver_chooser", "ourdev_receiver_shareference", "ourdev_receiver_application",
                 "fotoalbum_none", "lowlevel_none"):
        assert name in corpus
    threats = [v.threat for s in corpus.values() for v in s.expected_verdicts]
    for threat in (ThreatType.HIJACKING, ThreatType.SPOOFING, ThreatType.COLLUSION, ThreatType.NONE):
        assert threat in threats


def test_corpus_expectations(corpus):
    verdict = corpus["collusion_deviceid_file"].expected_verdicts[0]
    assert verdict.threat is ThreatType.COLLUSION
    assert corpus["spoof_write"].expected_verdicts[0].threat is ThreatType.SPOOFING
    assert corpus["coincidental_format"].expected_verdicts[0].threat is ThreatType.NONE
    chooser = corpus["resolver_chooser"].launch_order[0].chooser_selection
    assert chooser == ComponentId("com.share.notes", "NotesActivity")


def test_corpus_dir_override(tmp_path, monkeypatch):
    (tmp_path / "solo.icc").write_text(MINIMAL)
    monkeypatch.setenv("ICCTAINT_CORPUS_DIR", str(tmp_path))
    assert [s.name for s in builtin_corpus()] == ["solo"]
    assert find_scenario("solo").endswith("solo.icc")
    assert find_scenario("absent") is None
