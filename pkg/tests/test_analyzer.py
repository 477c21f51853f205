import itertools
from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import analyze_scenario, scenario_from, simulate
from src.analysis.bypass import trace_bypass_sources
from src.analysis.deflation import RESOLVER, condense_chains, deflate_models, elide_choosers
from src.analysis.models import build_models
from src.analysis.pipeline import STAGES, IccAnalyzer, analyze, verdict_triples
from src.analysis.threats import ThreatVerdict, classify
from src.domain.model import AppSpec, ComponentId, LabelSet, ThreatType
from src.errors import StageError, StructuralError
from src.logformat.events import EventKind
from src.logformat.metadata import AppMetadata
from src.logformat.reader import parse_log


def _raw(scenario):
    data, meta, _ = simulate(scenario)
    return build_models(parse_log(data, meta), meta)


def _only(result):
    assert len(result.verdicts) == 1
    return result.verdicts[0]


def test_no_icc_gives_no_models(corpus):
    result = analyze_scenario(corpus["benign_no_icc"])
    assert result.verdicts == [] and result.raw_models == 0
    assert result.events == 3


def test_one_raw_model_per_send(corpus):
    for scenario in corpus.values():
        data, meta, _ = simulate(scenario)
        sends = sum(1 for e in parse_log(data, meta) if e.kind is EventKind.SEND_INTENT)
        assert len(build_models(parse_log(data, meta), meta)) == sends, scenario.name


def test_hijack_location_model(corpus):
    verdict = _only(analyze_scenario(corpus["hijack_location"]))
    model = verdict.model
    assert model.sender.component == ComponentId("com.victim", "MainActivity")
    assert model.receiver.components == (ComponentId("com.malware1", "StealActivity"),)
    assert model.sender.permissions_required == frozenset({"ACCESS_FINE_LOCATION"})
    assert model.sender.source_methods == ("getLatitude",)
    assert model.receiver.sink_methods == ("Log",)
    assert model.receiver.taint_leak
    assert (verdict.threat, verdict.matched_case) == (ThreatType.HIJACKING, 2)


def test_chain_condenses_to_head_and_tail(corpus):
    raw = _raw(corpus["relay_chain"])
    assert len(raw) == 3
    deflated = deflate_models(raw)
    assert len(deflated) == 1
    model = deflated[0]
    assert model.sender.component == ComponentId("com.chain.one", "C1")
    assert model.receiver.components == (ComponentId("com.chain.four", "C4"),)
    assert model.chain == (1, 2, 3)
    assert [c.name for c in model.hops] == ["C2", "C3"]
    assert model.model_id == "1..3"
    assert classify(model).threat is ThreatType.COLLUSION


def test_unrelated_sends_are_not_chained(corpus):
    raw = _raw(corpus["ourdev_receiver_shareference"])
    assert len(condense_chains(raw)) == 2


@st.composite
def relay_trees(draw):
    """Parent index of every relay node; node 0 is the launcher."""
    size = draw(st.integers(min_value=1, max_value=8))
    return [draw(st.integers(min_value=0, max_value=i - 1)) for i in range(1, size + 1)]


def _relay_scenario(parents):
    children = {i: [] for i in range(len(parents) + 1)}
    for child, parent in enumerate(parents, start=1):
        children[parent].append(child)

    lines = ["%icc-scenario 1", "scenario relay_tree"]
    for node, kids in children.items():
        if node == 0:
            lines += ["app com.relay.n0 pid=200 perms=ACCESS_FINE_LOCATION",
                      "  component N activity exported", "    on launch",
                      "      acquire getLatitude -> x"]
        else:
            lines += [f"app com.relay.n{node} pid={200 + node}",
                      "  component N service exported", "    on receive",
                      "      get_extra d -> x"]
        for kid in kids:
            lines += ["      put_extra d $x", f"      send service target=com.relay.n{kid}/N"]
        if not kids and node:
            lines.append("      sink Log $x")
    lines.append("launch com.relay.n0/N")
    leaves = sum(1 for node, kids in children.items() if node and not kids)
    return scenario_from("\n".join(lines) + "\n"), leaves


def _source_sink_pairs(models):
    pairs = Counter()
    for m in models:
        for use in m.consumed():
            for label in use.labels:
                if label in m.intent.sensitive:
                    pairs[(label.token(), use.seq, str(use.component), use.method)] += 1
    return pairs


@settings(max_examples=60, deadline=None)
@given(relay_trees())
def test_deflation_keeps_source_sink_pairs_on_fan_out(parents):
    scenario, leaves = _relay_scenario(parents)
    raw = _raw(scenario)
    assert len(raw) == len(parents)
    deflated = deflate_models(raw)
    # every chain ends at a node that forwards nothing
    assert len(deflated) == leaves
    assert _source_sink_pairs(deflated) == _source_sink_pairs(raw)
    assert sum(_source_sink_pairs(raw).values()) == leaves


def test_second_forward_starts_a_new_chain():
    scenario, _ = _relay_scenario([0, 1, 1, 2])
    deflated = deflate_models(_raw(scenario))
    assert [m.chain for m in deflated] == [(1, 2, 4), (3,)]
    assert [m.sender.component.package for m in deflated] == ["com.relay.n0", "com.relay.n1"]
    assert [m.delivered_to()[0].package for m in deflated] == ["com.relay.n4", "com.relay.n3"]


def test_chooser_is_elided(corpus):
    raw = _raw(corpus["resolver_chooser"])
    assert len(raw) == 2
    assert RESOLVER in raw[0].receiver.components
    elided = elide_choosers(raw)
    assert len(elided) == 1
    model = elided[0]
    assert model.sender.package == "com.share.sender"
    assert model.intent.chooser_for == 1
    assert model.receiver.components == (ComponentId("com.share.notes", "NotesActivity"),)
    verdict = _only(analyze_scenario(corpus["resolver_chooser"]))
    assert verdict.threat is ThreatType.HIJACKING


def test_collusion_lacked_permissions(corpus):
    verdict = _only(analyze_scenario(corpus["collusion_deviceid_file"]))
    assert verdict.model.sender.permissions_lacked == frozenset({"WRITE_EXTERNAL_STORAGE"})
    assert verdict.model.receiver.permissions_lacked == frozenset({"READ_PHONE_STATE"})
    assert (verdict.threat, verdict.matched_case) == (ThreatType.COLLUSION, 5)


def test_spoofing_by_lacked_permission(corpus):
    verdict = _only(analyze_scenario(corpus["spoof_write"]))
    assert verdict.model.sender.permissions_lacked == frozenset({"WRITE_EXTERNAL_STORAGE"})
    assert (verdict.threat, verdict.matched_case) == (ThreatType.SPOOFING, 3)


def test_spoofing_by_private_start(corpus):
    verdict = _only(analyze_scenario(corpus["spoof_startcompt"]))
    assert verdict.model.receiver.start_compt
    assert (verdict.threat, verdict.matched_case) == (ThreatType.SPOOFING, 4)


def test_sender_app_candidate_is_hijacked(corpus):
    verdict = _only(analyze_scenario(corpus["topgood_hijack"]))
    assert (verdict.threat, verdict.matched_case) == (ThreatType.HIJACKING, 1)
    assert dict(verdict.evidence)["sender.candidates"] == "com.topgoodnightimages/ShareActivity"


def test_shared_bypass_needs_tracing(corpus):
    data, meta, _ = simulate(corpus["ourdev_receiver_shareference"])
    untraced = deflate_models(build_models(parse_log(data, meta), meta))
    assert [classify(m).threat for m in untraced] == [ThreatType.NONE, ThreatType.NONE]
    assert all(len(m.receiver.pending) == 1 for m in untraced)

    verdicts = analyze(data, meta)
    assert [v.threat for v in verdicts] == [ThreatType.HIJACKING, ThreatType.HIJACKING]
    first = verdicts[0].model
    assert first.receiver.pending == ()
    assert "Log" in first.receiver.sink_methods
    assert first.provenance()[-1] == (
        "com.ourdev.sender0/Sender0 -> intent#1 -> com.ourdev.receiver_shareference/Component_A"
        " -> shared:settings/deviceId -> com.ourdev.receiver_shareference/Component_B:Log")


def test_appobj_bypass(corpus):
    verdicts = analyze_scenario(corpus["ourdev_receiver_application"]).verdicts
    assert [v.threat for v in verdicts] == [ThreatType.HIJACKING, ThreatType.HIJACKING]
    for verdict, sender in zip(verdicts, ("Sender0", "Sender1")):
        assert verdict.model.sender.component.name == sender
        assert any("appobj:leakData" in line and line.startswith(f"com.ourdev.{sender.lower()}/")
                   for line in verdict.model.provenance())


def test_unresolved_pending_use_stays_pending(corpus):
    model = _raw(corpus["ourdev_receiver_shareference"])[0]
    label = next(iter(model.receiver.pending[0].labels))
    foreign = replace(model.receiver.pending[0], labels=LabelSet.of(
        replace(label, origin_component=ComponentId("com.elsewhere", "X"))))
    orphan = replace(model, intent=replace(model.intent, taint_data=()),
                     receiver=replace(model.receiver, pending=(foreign,)))
    traced = trace_bypass_sources(orphan, [])
    assert traced.receiver.pending == (foreign,)
    assert any(d.startswith("unresolved-source:") for d in traced.diagnostics)


def test_degraded_mode_flags_coincidental_handler(corpus):
    scenario = corpus["coincidental_format"]
    assert _only(analyze_scenario(scenario)).threat is ThreatType.NONE
    verdict = _only(analyze_scenario(scenario, ignore_sinks=True))
    assert (verdict.threat, verdict.matched_case) == (ThreatType.HIJACKING, 2)


def test_validate_failure_is_a_model_diagnostic(corpus):
    result = analyze_scenario(corpus["coincidental_format"])
    assert any(d.startswith("validate-failed:") for d in result.diagnostics)


def test_same_app_leak_goes_through_the_cases(corpus):
    verdict = _only(analyze_scenario(corpus["same_app_leak"]))
    assert verdict.model.receiver.package == verdict.model.sender.package
    # the service is a candidate of the sender app, but case 1 needs another app
    assert (verdict.threat, verdict.matched_case) == (ThreatType.HIJACKING, 2)


def test_broadcast_is_one_model_classified_per_app(corpus):
    raw = _raw(corpus["broadcast_multi"])
    assert len(raw) == 1
    model = raw[0]
    assert [r.package for r in model.receivers] == ["com.widget.alpha", "com.widget.beta"]
    assert [c.name for c in model.delivered_to()] == ["AlphaReceiver", "BetaReceiver"]
    assert [m.receiver.taint_leak for m in model.per_receiving_app()] == [True, False]

    result = analyze_scenario(corpus["broadcast_multi"])
    assert result.raw_models == 1
    assert [v.model.model_id for v in result.verdicts] == ["1@com.widget.alpha", "1@com.widget.beta"]
    assert verdict_triples(result.verdicts) == [
        ("com.weather/UpdateActivity", "com.widget.alpha/AlphaReceiver", "hijacking"),
        ("com.weather/UpdateActivity", "com.widget.beta/BetaReceiver", "none"),
    ]


def test_undelivered_intent_is_none():
    scenario = scenario_from("""\
%icc-scenario 1
scenario lonely
app com.a pid=1 perms=READ_PHONE_STATE
  component Main activity exported
    on launch
      acquire getDeviceId -> id
      put_extra id $id
      send activity action=nobody.LISTENS
launch com.a/Main
""")
    verdict = _only(analyze_scenario(scenario))
    assert not verdict.model.receiver.delivered
    assert verdict.threat is ThreatType.NONE
    assert verdict_triples([verdict]) == [("com.a/Main", "", "none")]


def test_focus_drops_receiver_events(corpus):
    data, meta, _ = simulate(corpus["hijack_location"])
    result = IccAnalyzer().run(data, meta, focus={101})
    assert _only(result).threat is ThreatType.NONE
    assert result.events == 5


def test_irrelevant_permissions_do_not_change_verdicts(corpus):
    extra = frozenset({"VIBRATE", "WAKE_LOCK"})
    for scenario in corpus.values():
        data, meta, _ = simulate(scenario)
        widened = AppMetadata(tuple(replace(a, permissions=a.permissions | extra) for a in meta.apps))
        before = [(v.threat, v.matched_case) for v in analyze(data, meta)]
        after = [(v.threat, v.matched_case) for v in analyze(data, widened)]
        assert before == after, scenario.name


def test_receiver_holding_everything_cannot_collude(corpus):
    data, meta, _ = simulate(corpus["collusion_deviceid_file"])
    granted = AppMetadata(tuple(
        replace(a, permissions=a.permissions | {"READ_PHONE_STATE"}) if a.package == "com.notepad" else a
        for a in meta.apps))
    assert analyze(data, granted)[0].threat is ThreatType.SPOOFING


def test_stage_failures_are_labelled():
    meta = AppMetadata((AppSpec("com.a", 1),))
    data = b"ICCTAINT-LOG\t1\ttimestamp=0\n1\t1\tCANDIDATES\tintent=7\tcomps[]=com.a/X\n"
    with pytest.raises(StageError) as err:
        IccAnalyzer().run(data, meta)
    assert err.value.stage == "build"
    assert isinstance(err.value.cause, StructuralError)
    assert str(err.value).startswith("[build] ")

    with pytest.raises(StageError) as err:
        IccAnalyzer().run(b"garbage\n", meta)
    assert err.value.stage == "parse"


@pytest.mark.parametrize("kind, line", [
    ("DELIVER", "6\t102\tDELIVER\tintent=1\tact=2\n"),
    ("SEND_INTENT", "4\t101\tSEND_INTENT\tact=1\tintent=1\tvia=activity\n"),
    ("SINK_CALL", "7\t102\tSINK_CALL\tact=2\tcomp=com.malware1/StealActivity\n"),
])
def test_records_missing_required_fields(corpus, kind, line):
    data, meta, _ = simulate(corpus["hijack_location"])
    seq = line.split("\t")[0]
    records = [l for l in data.decode("utf-8").splitlines(keepends=True) if l.split("\t")[0] != seq]
    records.insert(int(seq), line)
    with pytest.raises(StageError) as err:
        IccAnalyzer().run("".join(records), meta)
    assert err.value.stage == "build"
    assert isinstance(err.value.cause, StructuralError)
    assert f"{kind} record without" in str(err.value)


def test_every_stage_is_timed(corpus):
    ticks = itertools.count()
    data, meta, _ = simulate(corpus["hijack_location"])
    result = IccAnalyzer(clock=lambda: float(next(ticks))).run(data, meta)
    assert tuple(result.timings) == STAGES
    assert all(ms == 1000.0 for ms in result.timings.values())
    assert result.per_model_ms == result.total_ms == 5000.0


def test_verdict_rejects_inconsistent_case(corpus):
    model = _only(analyze_scenario(corpus["hijack_location"])).model
    with pytest.raises(ValueError):
        ThreatVerdict(model, ThreatType.COLLUSION, 2)
