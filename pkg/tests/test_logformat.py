import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import golden, simulate
from src.errors import LogFormatError, VersionError
from src.logformat.events import EventKind, LogEvent
from src.logformat.metadata import AppMetadata, read_metadata, write_metadata
from src.logformat.reader import LogReader, parse_log
from src.logformat.writer import dump_log, header_line, write_log

names = st.text(alphabet="abcdefghijklmnopqrstuvwxyz_.", min_size=1, max_size=12)
scalars = st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=20)
lists = st.lists(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=10),
                 max_size=4).map(tuple)


@st.composite
def event_streams(draw):
    count = draw(st.integers(min_value=0, max_value=12))
    seq = 0
    events = []
    for _ in range(count):
        seq += draw(st.integers(min_value=1, max_value=5))
        fields = draw(st.lists(st.tuples(names, st.one_of(scalars, lists)), max_size=6))
        events.append(LogEvent(seq, draw(st.integers(min_value=0, max_value=2**31)),
                               draw(st.sampled_from(list(EventKind))), tuple(fields)))
    return events


def _event(seq, pid, kind=EventKind.SINK_CALL, **fields):
    return LogEvent.make(seq, pid, kind, fields.items())


def _log(*records, head=None):
    return ((head or header_line()) + "".join(records)).encode("utf-8")


@given(event_streams(), st.integers(min_value=0, max_value=2**40))
def test_written_streams_parse_back(events, timestamp):
    data = write_log(events, timestamp)
    reader = LogReader(data)
    assert list(reader) == events
    assert reader.timestamp == timestamp


@pytest.mark.slow
@settings(max_examples=10_000, deadline=None)
@given(event_streams())
def test_written_streams_parse_back_many(events):
    assert list(parse_log(write_log(events))) == events


def test_golden_log_parses(corpus):
    data = golden("hijack_location.log", "rb")
    events = list(parse_log(data))
    assert [e.kind for e in events] == [
        EventKind.LAUNCH, EventKind.SET_TAINT, EventKind.CHECK_INTENT, EventKind.SEND_INTENT,
        EventKind.CANDIDATES, EventKind.DELIVER, EventKind.SINK_CALL]
    assert write_log(events) == data == simulate(corpus["hijack_location"])[0]


def test_escaped_values_survive():
    event = _event(1, 5, method="a\tb=c,d%e\nf", labels=("x,y", "tab\there"))
    data = write_log([event])
    assert data.count(b"\n") == 2
    assert list(parse_log(data)) == [event]


def test_empty_stream_is_header_only():
    assert write_log([]) == header_line().encode("utf-8")
    assert list(parse_log(write_log([]))) == []


def test_dump_log_counts_records():
    stream = io.BytesIO()
    assert dump_log([_event(1, 1), _event(2, 1)], stream, 7) == 2
    assert stream.getvalue().startswith(b"ICCTAINT-LOG\t1\ttimestamp=7\n")


def test_focus_filtering():
    events = [_event(i, pid) for i, pid in enumerate([1, 2, 3, 99, 4, 2], start=1)]
    data = write_log(events)
    kept = list(parse_log(data, focus_pids={1, 2, 99}))
    assert [e.pid for e in kept] == [1, 2, 99, 2]
    assert [e.seq for e in kept] == [1, 2, 4, 6]


def test_metadata_pids_are_the_default_focus(corpus):
    scenario = corpus["hijack_location"]
    data, meta, _ = simulate(scenario)
    victim_only = AppMetadata(tuple(a for a in meta.apps if a.package == "com.victim"))
    assert {e.pid for e in parse_log(data, victim_only)} == {101}
    assert {e.pid for e in parse_log(data, victim_only, focus_pids={102})} == {102}


def test_unknown_kinds_are_counted_and_skipped():
    data = _log("1\t1\tLAUNCH\tcomp=a/B\n", "2\t1\tFUTURE_KIND\tx=1\n", "3\t1\tSINK_CALL\tmethod=Log\n")
    reader = LogReader(data)
    assert [e.seq for e in reader] == [1, 3]
    assert reader.skipped == 1 and reader.total == 2


@pytest.mark.parametrize("data, line", [
    (_log("1\t1\tLAUNCH\tcomp=a/B"), 2),
    (_log("1\t1\tLAUNCH\n", "1\t1\tLAUNCH\n"), 3),
    (_log("2\t1\tLAUNCH\n", "1\t1\tLAUNCH\n"), 3),
    (_log("1\t1\n"), 2),
    (_log("x\t1\tLAUNCH\n"), 2),
    (_log("1\t1\tLAUNCH\tnoequals\n"), 2),
    (_log("1\t1\tSINK_CALL\tlabels[]=a,,b\n"), 2),
    (b"NOT-A-LOG\n", 1),
    (b"ICCTAINT-LOG\t1\twhen=0\n", 1),
    (b"ICCTAINT-LOG\t1\ttimestamp=soon\n", 1),
    (b"", 1),
    (b"ICCTAINT-LOG\t1\ttimestamp=0\n1\t1\tLAUNCH\tcomp=\xff\n", 2),
])
def test_malformed_logs_are_positioned(data, line):
    with pytest.raises(LogFormatError) as err:
        list(parse_log(data))
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_empty_list_elements_are_rejected():
    event = LogEvent(1, 1, EventKind.SEND_INTENT, (("categories", ("",)),))
    with pytest.raises(LogFormatError):
        write_log([event])
    empty = LogEvent(1, 1, EventKind.SEND_INTENT, (("categories", ()),))
    assert tuple(parse_log(write_log([empty]))) == (empty,)


def test_unsupported_version():
    with pytest.raises(VersionError):
        list(parse_log(b"ICCTAINT-LOG\t2\ttimestamp=0\n"))


def test_metadata_round_trip(corpus, tmp_path):
    for scenario in corpus.values():
        meta = AppMetadata.from_apps(scenario.apps)
        assert AppMetadata.loads(meta.dumps()) == meta
    path = str(tmp_path / "m.meta.yaml")
    write_metadata(meta, path)
    assert read_metadata(path) == meta


def test_metadata_drops_scripts(corpus):
    meta = AppMetadata.from_apps(corpus["hijack_location"].apps)
    assert all(not c.scripts for a in meta.apps for c in a.components)
    assert meta.by_pid(102).package == "com.malware1"
    assert meta.permissions_of("com.victim") == frozenset({"ACCESS_FINE_LOCATION"})
    assert meta.permissions_of("com.unknown") == frozenset()


@pytest.mark.parametrize("text, error", [
    ("format: other\nversion: 1\n", LogFormatError),
    ("format: icc-meta\nversion: 9\n", VersionError),
    ("format: icc-meta\nversion: 1\napps:\n  - package: a\n", LogFormatError),
    ("format: [unclosed\n", LogFormatError),
])
def test_malformed_metadata(text, error):
    with pytest.raises(error):
        AppMetadata.loads(text)
