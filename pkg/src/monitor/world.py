# world.py
# ----------------------------------------------------------------
# mutable world state of one simulation: per-app stores, the
# pending delivery queue, counters and the ground-truth ledger
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, FrozenSet, List, Optional, Tuple

from src.domain.model import AppSpec, ComponentId, ComponentSpec, IntentRecord, LabelSet, index_components
from src.taint.engine import TaintedValue

# a value together with the ids of the delivered intents it was derived from
Traced = Tuple[TaintedValue, FrozenSet[int]]


@dataclass(frozen=True)
class ActivationFact:
    act_id: int
    pid: int
    component: ComponentId
    intent_id: Optional[int] = None
    parent: Optional[int] = None


@dataclass(frozen=True)
class SendFact:
    intent_id: int
    sender: ComponentId
    labels: LabelSet
    candidates: Tuple[ComponentId, ...] = ()


@dataclass(frozen=True)
class DeliveryFact:
    """`logical_id` is the intent the user-level sender issued; it differs from
    `intent_id` only for the second hop of a chooser."""
    intent_id: int
    logical_id: int
    sender: ComponentId
    receiver: ComponentId
    act_id: int
    labels: LabelSet


@dataclass(frozen=True)
class SinkFact:
    act_id: int
    pid: int
    component: ComponentId
    method: str
    labels: LabelSet
    fed_by: FrozenSet[int] = frozenset()


@dataclass(frozen=True)
class StartFact:
    act_id: int
    pid: int
    component: ComponentId
    target: ComponentId
    child: int


@dataclass
class Ledger:
    activations: List[ActivationFact] = field(default_factory=list)
    sends: List[SendFact] = field(default_factory=list)
    deliveries: List[DeliveryFact] = field(default_factory=list)
    sinks: List[SinkFact] = field(default_factory=list)
    starts: List[StartFact] = field(default_factory=list)


@dataclass
class Activation:
    act_id: int
    app: AppSpec
    component: ComponentSpec
    intent: Optional[IntentRecord] = None
    parent: Optional[int] = None
    registers: Dict[str, Traced] = field(default_factory=dict)
    extras: Dict[str, Traced] = field(default_factory=dict)


class WorldState:
    """
    Everything a run mutates. Not thread-safe: one WorldState per run.
    """

    def __init__(self, apps: Tuple[AppSpec, ...]):
        self.apps = tuple(apps)
        self.components = index_components(self.apps)
        self.shared_stores: Dict[int, Dict[Tuple[str, str], Traced]] = {a.process_id: {} for a in self.apps}
        self.app_objects: Dict[int, Dict[str, Traced]] = {a.process_id: {} for a in self.apps}
        self.pending_queue: Deque[Activation] = deque()
        self.event_seq = 0
        self.ledger = Ledger()
        self._next_intent = 0
        self._next_act = 0

    def next_seq(self) -> int:
        self.event_seq += 1
        return self.event_seq

    def next_intent_id(self) -> int:
        self._next_intent += 1
        return self._next_intent

    def next_act_id(self) -> int:
        self._next_act += 1
        return self._next_act

    def lookup(self, cid: ComponentId) -> Optional[Tuple[AppSpec, ComponentSpec]]:
        return self.components.get(cid)
