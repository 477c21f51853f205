# threats.py
# ----------------------------------------------------------------
# threat classification of an attributed ICC model:
# five ordered cases, the first match wins
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

from src.analysis.models import IccModel
from src.domain.model import ThreatType

CASE_THREATS = {
    1: ThreatType.HIJACKING,
    2: ThreatType.HIJACKING,
    3: ThreatType.SPOOFING,
    4: ThreatType.SPOOFING,
    5: ThreatType.COLLUSION,
}


@dataclass(frozen=True)
class ThreatVerdict:
    model: IccModel
    threat: ThreatType
    matched_case: Optional[int] = None
    evidence: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        expected = CASE_THREATS.get(self.matched_case, ThreatType.NONE)
        if expected is not self.threat:
            raise ValueError(f"case {self.matched_case} cannot yield {self.threat.value}")


def _fmt(values) -> str:
    return ",".join(sorted(str(v) for v in values)) or "-"


def classify(model: IccModel, ignore_sinks: bool = False) -> ThreatVerdict:
    """
    Case 1 hijacking: a sender-app component was a candidate, yet another app received;
    Case 2 hijacking: taint leaked and the sender lacks nothing;
    Case 3 spoofing: the sender lacks permissions the receiver holds;
    Case 4 spoofing: the receiver starts a private component and lacks nothing;
    Case 5 collusion: each side lacks what the other holds.
    With `ignore_sinks` any delivered sensitive intent counts as a leak. A model that reached
    several apps is classified per app, see `IccModel.per_receiving_app`.
    """
    sender, receiver = model.sender, model.receiver

    if not receiver.delivered:
        return ThreatVerdict(model, ThreatType.NONE, None, (("receiver", "-"),))

    taint_leak = bool(model.intent.sensitive) if ignore_sinks else receiver.taint_leak
    sender_lacked = sender.permissions_lacked
    receiver_lacked = receiver.permissions_lacked

    hijacked = set(sender.components) & set(sender.candidates)
    if hijacked and receiver.package != sender.package:
        return ThreatVerdict(model, ThreatType.HIJACKING, 1, (
            ("sender.candidates", _fmt(hijacked)),
            ("receiver.components", _fmt(receiver.components))))
    if taint_leak and not sender_lacked:
        return ThreatVerdict(model, ThreatType.HIJACKING, 2, (
            ("receiver.taint_leak", "true"),
            ("receiver.sink_methods", _fmt(receiver.sink_methods)),
            ("sender.permissions_lacked", "-")))
    if sender_lacked and not receiver_lacked:
        return ThreatVerdict(model, ThreatType.SPOOFING, 3, (
            ("sender.permissions_lacked", _fmt(sender_lacked)),
            ("receiver.permissions_lacked", "-")))
    if receiver.start_compt and not receiver_lacked:
        return ThreatVerdict(model, ThreatType.SPOOFING, 4, (
            ("receiver.start_compt", "true"),
            ("receiver.permissions_lacked", "-")))
    if sender_lacked and receiver_lacked:
        return ThreatVerdict(model, ThreatType.COLLUSION, 5, (
            ("sender.permissions_lacked", _fmt(sender_lacked)),
            ("receiver.permissions_lacked", _fmt(receiver_lacked))))
    return ThreatVerdict(model, ThreatType.NONE, None, (
        ("receiver.taint_leak", str(taint_leak).lower()),
        ("sender.permissions_lacked", _fmt(sender_lacked)),
        ("receiver.permissions_lacked", _fmt(receiver_lacked))))
