import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.domain.model import (EMPTY, ComponentId, ComponentKind, LabelSet, TaintLabel, ThreatType,
                              union_labels)

MAIN = ComponentId("com.victim", "MainActivity")

labels = st.builds(
    TaintLabel,
    st.integers(min_value=0, max_value=0xFFFFFFFF),
    st.sampled_from(["getLatitude", "getDeviceId", "putExtra", "queryContacts"]),
    st.builds(ComponentId, st.sampled_from(["com.a", "com.b.c"]), st.sampled_from(["X", "Main_1"])),
)
label_sets = st.frozensets(labels, max_size=6).map(LabelSet)


def test_component_id_parse_and_str():
    cid = ComponentId.parse("com.victim/MainActivity")
    assert cid == MAIN
    assert str(cid) == "com.victim/MainActivity"


@pytest.mark.parametrize("text", ["com.victim", "/Main", "com.victim/", ""])
def test_component_id_rejects_malformed(text):
    with pytest.raises(ValueError):
        ComponentId.parse(text)


def test_label_token_format():
    label = TaintLabel(0x00010004, "getLatitude", MAIN)
    assert label.token() == "0x00010004@getLatitude@com.victim/MainActivity"
    assert TaintLabel.from_token(label.token()) == label


@given(label_sets, label_sets, label_sets)
def test_union_is_a_semilattice(a, b, c):
    assert union_labels(a, b) == union_labels(b, a)
    assert union_labels(union_labels(a, b), c) == union_labels(a, union_labels(b, c))
    assert union_labels(a, a) == a
    assert union_labels(a, EMPTY) == a


@given(label_sets, label_sets)
def test_union_contains_both_sides(a, b):
    joined = a | b
    assert a.issubset(joined) and b.issubset(joined)
    assert len(joined) <= len(a) + len(b)


@given(label_sets)
def test_tokens_round_trip(a):
    assert LabelSet.from_tokens(a.tokens()) == a


def test_label_set_is_iterated_in_order():
    high = TaintLabel(0x20001, "putExtra", MAIN)
    low = TaintLabel(0x10004, "getLatitude", MAIN)
    assert list(LabelSet.of(high, low)) == [low, high]
    assert LabelSet.of(high).intersects(LabelSet.of(low, high))
    assert not LabelSet.of(high).intersects(LabelSet.of(low))


def test_component_kind_for_via():
    assert ComponentKind.for_via("activity") is ComponentKind.ACTIVITY
    assert ComponentKind.for_via("service") is ComponentKind.SERVICE
    assert ComponentKind.for_via("broadcast") is ComponentKind.RECEIVER


def test_threat_type_is_threat():
    assert ThreatType.HIJACKING.is_threat
    assert not ThreatType.NONE.is_threat
