# simulator.py
# ----------------------------------------------------------------
# the Monitor: interprets behavior scripts over a world, performs
# intent resolution and emits the taint log
#   set taint -> check intent -> send -> receive -> check taint
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
import os
import re
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Tuple

from src import config
from src.domain.catalog import MethodCatalog, default_catalog
from src.domain.model import ComponentId, ComponentKind, IntentRecord
from src.errors import IccError, ResolutionError, ScenarioError
from src.logformat.events import EXTRA_PREFIX, EventKind, LogEvent
from src.logformat.metadata import AppMetadata
from src.logformat.writer import write_log
from src.monitor.resolver import find_all_candidates, find_receiver
from src.monitor.world import (Activation, ActivationFact, DeliveryFact, SendFact, SinkFact,
                               StartFact, Traced, WorldState)
from src.scenario.script import Scenario, Step, StepKind, Trigger, ValueRef
from src.taint.engine import OpKind, TaintEngine, TaintedValue, untainted

log = logging.getLogger(__name__)

RESOLVER = ComponentId(config.SYSTEM_PACKAGE, config.RESOLVER_NAME)
NO_FEED = frozenset()


class ScriptAbort(Exception):
    """Stops the current activation after its diagnostic has been logged."""


def is_test_mode(test_mode: Optional[bool] = None) -> bool:
    if test_mode is not None:
        return test_mode
    return os.environ.get(config.TEST_MODE_ENV, "") not in ("", "0")


@dataclass(frozen=True)
class TaintLog:
    events: Tuple[LogEvent, ...]
    timestamp: int = 0

    def to_bytes(self) -> bytes:
        return write_log(self.events, self.timestamp)

    def count(self, kind: EventKind) -> int:
        return sum(1 for e in self.events if e.kind is kind)


class Monitor:
    """
    Deterministic single-threaded interpreter of one scenario.
    Step failures become DIAG records and end the failing activation only.
    """

    def __init__(self, scenario: Scenario, catalog: Optional[MethodCatalog] = None):
        self.scenario = scenario
        self.catalog = catalog or default_catalog()
        self.engine = TaintEngine(self.catalog)
        self.world = WorldState(scenario.apps)
        self.events: List[LogEvent] = []
        self._chooser: Optional[ComponentId] = None

    def run(self, test_mode: Optional[bool] = None) -> TaintLog:
        for entry in self.scenario.launch_order:
            self._chooser = entry.chooser_selection
            found = self.world.lookup(entry.component)
            if found is None:
                self._diag(0, "launch", f"no component {entry.component}")
                continue
            app, comp = found
            self.world.pending_queue.append(Activation(self.world.next_act_id(), app, comp))
            self._drain()
        timestamp = 0 if is_test_mode(test_mode) else int(time.time())
        log.debug("scenario %s: %d events", self.scenario.name, len(self.events))
        return TaintLog(tuple(self.events), timestamp)

    def metadata(self) -> AppMetadata:
        return AppMetadata.from_apps(self.scenario.apps)

    # -----------------------------------------------------------------------------------------

    def _emit(self, pid: int, kind: EventKind, fields: Iterable[Tuple[str, object]]):
        self.events.append(LogEvent.make(self.world.next_seq(), pid, kind, fields))

    def _diag(self, pid: int, code: str, message: str, act: Optional[Activation] = None):
        log.debug("diag %s: %s", code, message)
        self._emit(pid, EventKind.DIAG, [
            ("code", code), ("message", message),
            ("act", act.act_id if act else None), ("comp", act.component.id if act else None)])

    def _drain(self):
        while self.world.pending_queue:
            self._activate(self.world.pending_queue.popleft())

    def _activate(self, act: Activation):
        pid = act.app.process_id
        cid = act.component.id
        self.world.ledger.activations.append(
            ActivationFact(act.act_id, pid, cid, act.intent.intent_id if act.intent else None, act.parent))

        if act.intent is None:
            self._emit(pid, EventKind.LAUNCH, [("act", act.act_id), ("comp", cid), ("by", act.parent)])
            trigger = Trigger.ON_LAUNCH
        else:
            trigger = Trigger.ON_RECEIVE_INTENT

        script = act.component.script_for(trigger)
        if script is None:
            return
        for step in script.steps:
            try:
                self._step(act, step)
            except ScriptAbort:
                return
            except ScenarioError as e:
                self._diag(pid, "step-error", str(e), act)
                return
            except IccError as e:
                self._diag(pid, "step-error", f"line {step.line}: {e}", act)
                return

    # -----------------------------------------------------------------------------------------

    def _value(self, act: Activation, ref: ValueRef, step: Step) -> Traced:
        if ref.register is not None:
            traced = act.registers.get(ref.register)
            if traced is None:
                raise ScenarioError(f"register ${ref.register} is not assigned", step.line, "value")
            return traced
        return untainted(ref.literal), NO_FEED

    def _step(self, act: Activation, step: Step):
        pid = act.app.process_id
        cid = act.component.id
        kind = step.kind

        if kind is StepKind.ACQUIRE_SOURCE:
            spec = self.catalog.source(step.method)
            if spec is None:
                raise ScenarioError(f"source {step.method!r} is not in the catalog", step.line, "method")
            value = self.engine.add_taint_to_data(f"{step.method}@{cid}", spec.tag, step.method, cid)
            act.registers[step.into] = (value, NO_FEED)
            self._emit(pid, EventKind.SET_TAINT, [
                ("act", act.act_id), ("comp", cid), ("method", step.method),
                ("tag", f"{spec.tag:#010x}"), ("labels", value.labels)])

        elif kind is StepKind.PUT_EXTRA:
            value, feed = self._value(act, step.values[0], step)
            value = self.engine.retaint_for_intent(value, cid)
            act.extras[step.key] = (value, feed)
            self._emit(pid, EventKind.CHECK_INTENT, [
                ("act", act.act_id), ("comp", cid), ("key", step.key), ("labels", value.labels)])

        elif kind is StepKind.SEND_INTENT:
            self._send(act, step)

        elif kind is StepKind.CALL_SINK:
            traced = [self._value(act, ref, step) for ref in step.values]
            if traced:
                value = self.engine.propagate(OpKind.CONCAT, [v for v, _ in traced])
            else:
                value = untainted("")
            fed_by = frozenset().union(*(f for _, f in traced)) if traced else NO_FEED
            self.world.ledger.sinks.append(SinkFact(act.act_id, pid, cid, step.method, value.labels, fed_by))
            self._emit(pid, EventKind.SINK_CALL, [
                ("act", act.act_id), ("comp", cid), ("method", step.method), ("labels", value.labels)])

        elif kind is StepKind.STORE_SHARED:
            value, feed = self._value(act, step.values[0], step)
            stored = self.engine.propagate(OpKind.STORE_SHARED, [value])
            self.world.shared_stores[pid][(step.store, step.key)] = (stored, feed)
            self._emit(pid, EventKind.STORE_SHARED, [
                ("act", act.act_id), ("comp", cid), ("store", step.store), ("key", step.key),
                ("labels", stored.labels)])

        elif kind is StepKind.LOAD_SHARED:
            stored, feed = self.world.shared_stores[pid].get((step.store, step.key), (untainted("default"), NO_FEED))
            value = self.engine.propagate(OpKind.LOAD_SHARED, [stored])
            act.registers[step.into] = (value, feed)
            self._emit(pid, EventKind.LOAD_SHARED, [
                ("act", act.act_id), ("comp", cid), ("store", step.store), ("key", step.key),
                ("labels", value.labels)])

        elif kind is StepKind.STORE_APPOBJ:
            value, feed = self._value(act, step.values[0], step)
            stored = self.engine.propagate(OpKind.STORE_APPOBJ, [value])
            self.world.app_objects[pid][step.key] = (stored, feed)
            self._emit(pid, EventKind.STORE_APPOBJ, [
                ("act", act.act_id), ("comp", cid), ("field", step.key), ("labels", stored.labels)])

        elif kind is StepKind.LOAD_APPOBJ:
            stored, feed = self.world.app_objects[pid].get(step.key, (untainted("default"), NO_FEED))
            value = self.engine.propagate(OpKind.LOAD_APPOBJ, [stored])
            act.registers[step.into] = (value, feed)
            self._emit(pid, EventKind.LOAD_APPOBJ, [
                ("act", act.act_id), ("comp", cid), ("field", step.key), ("labels", value.labels)])

        elif kind is StepKind.START_COMPONENT:
            self._start(act, step.target)

        elif kind is StepKind.GET_EXTRA:
            extra = act.intent.extras.get(step.key) if act.intent else None
            if extra is None:
                act.registers[step.into] = (untainted(""), NO_FEED)
            else:
                payload, labels = extra
                value = self.engine.propagate(OpKind.LOAD_EXTRA, [TaintedValue(payload, labels)])
                act.registers[step.into] = (value, frozenset({act.intent.intent_id}))

        elif kind is StepKind.VALIDATE:
            extra = act.intent.extras.get(step.key) if act.intent else None
            if extra is None or re.search(step.pattern, extra[0]) is None:
                self._diag(pid, "validate-failed", f"extra {step.key!r} rejected by {step.pattern!r}", act)
                raise ScriptAbort()

    # -----------------------------------------------------------------------------------------

    def _start(self, act: Activation, target: ComponentId):
        pid = act.app.process_id
        found = self.world.lookup(target)
        if found is None:
            raise ResolutionError(f"no component {target}")
        app, comp = found
        if app.package != act.app.package and not comp.exported:
            self._diag(pid, "resolution", f"{target} is not exported", act)
            return
        child = Activation(self.world.next_act_id(), app, comp, parent=act.act_id)
        self.world.ledger.starts.append(StartFact(act.act_id, pid, act.component.id, target, child.act_id))
        self._emit(pid, EventKind.START_COMPONENT, [
            ("act", act.act_id), ("comp", act.component.id), ("target", target), ("child", child.act_id)])
        self.world.pending_queue.append(child)

    def _send_fields(self, intent: IntentRecord, act_id: Optional[int]):
        fields = [("act", act_id), ("comp", intent.sender), ("intent", intent.intent_id), ("via", intent.via),
                  ("target", intent.explicit_target), ("action", intent.action),
                  ("categories", intent.categories), ("type", intent.mime_type), ("scheme", intent.scheme),
                  ("chooser_for", intent.chooser_for)]
        for key in sorted(intent.extras):
            fields.append((EXTRA_PREFIX + key, intent.extras[key][1]))
        return fields

    def _send(self, act: Activation, step: Step):
        pid = act.app.process_id
        template = step.intent
        extras = dict(act.extras)
        act.extras = {}
        intent = IntentRecord(
            intent_id=self.world.next_intent_id(), sender=act.component.id, via=template.via,
            explicit_target=template.target, action=template.action, categories=template.categories,
            mime_type=template.mime_type, scheme=template.scheme,
            extras={key: (value.value, value.labels) for key, (value, _) in extras.items()})
        self._emit(pid, EventKind.SEND_INTENT, self._send_fields(intent, act.act_id))

        try:
            candidates = find_all_candidates(intent, self.world.apps)
        except ResolutionError as e:
            self.world.ledger.sends.append(SendFact(intent.intent_id, intent.sender, intent.labels()))
            self._diag(pid, "resolution", str(e), act)
            return

        self.world.ledger.sends.append(SendFact(intent.intent_id, intent.sender, intent.labels(), tuple(candidates)))
        self._emit(pid, EventKind.CANDIDATES, [("intent", intent.intent_id), ("comps", candidates)])
        if not candidates:
            self._diag(pid, "no-receiver", f"intent {intent.intent_id} matched no component", act)
            return

        kind = ComponentKind.for_via(intent.via)
        chooser = self._chooser if kind is ComponentKind.ACTIVITY and len(candidates) > 1 else None
        try:
            receivers = find_receiver(intent, candidates, kind, chooser)
        except ScenarioError as e:
            self._diag(pid, "chooser", str(e), act)
            return

        if chooser is not None:
            self._resolver_hop(pid, intent, receivers[0])
        else:
            for receiver in receivers:
                self._deliver(intent, intent, receiver)

    def _resolver_hop(self, pid: int, intent: IntentRecord, selection: ComponentId):
        """The chooser: intent a goes to the ResolverActivity, which re-sends it as b."""
        self._emit(pid, EventKind.DELIVER, [("intent", intent.intent_id), ("comp", RESOLVER)])
        hop = IntentRecord(
            intent_id=self.world.next_intent_id(), sender=RESOLVER, via=intent.via,
            explicit_target=selection, action=intent.action, categories=intent.categories,
            mime_type=intent.mime_type, scheme=intent.scheme, extras=dict(intent.extras),
            chooser_for=intent.intent_id)
        self._emit(pid, EventKind.SEND_INTENT, self._send_fields(hop, None))
        self._emit(pid, EventKind.CANDIDATES, [("intent", hop.intent_id), ("comps", [selection])])
        self._deliver(hop, intent, selection)

    def _deliver(self, intent: IntentRecord, logical: IntentRecord, receiver: ComponentId):
        app, comp = self.world.lookup(receiver)
        act = Activation(self.world.next_act_id(), app, comp, intent=intent)
        self.world.ledger.deliveries.append(DeliveryFact(
            intent.intent_id, logical.intent_id, logical.sender, receiver, act.act_id, intent.labels()))
        self._emit(app.process_id, EventKind.DELIVER, [
            ("intent", intent.intent_id), ("comp", receiver), ("act", act.act_id)])
        self.world.pending_queue.append(act)


def run_scenario(scenario: Scenario, catalog: Optional[MethodCatalog] = None,
                 test_mode: Optional[bool] = None) -> TaintLog:
    return Monitor(scenario, catalog).run(test_mode)
