# models.py
# ----------------------------------------------------------------
# ICC models (sender / intent / receiver attribute triples) and
# their single-pass, first-in-first-out construction from a log
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Tuple

from src import config
from src.domain.catalog import MethodCatalog, default_catalog
from src.domain.model import EMPTY, ComponentId, LabelSet, TaintLabel
from src.errors import StructuralError
from src.logformat.events import LogEvent
from src.logformat.metadata import AppMetadata

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SinkUse:
    """A sink call (or Shareference write) that a receiver performed on data."""
    seq: int
    component: ComponentId
    method: str
    labels: LabelSet
    permission: Optional[str] = None
    exfiltrating: bool = True
    via: Tuple[str, ...] = ()


@dataclass(frozen=True)
class SenderView:
    process_id: int
    package: str
    component: ComponentId
    components: Tuple[ComponentId, ...] = ()
    permissions: frozenset = frozenset()
    permissions_required: frozenset = frozenset()
    permissions_lacked: frozenset = frozenset()
    source_methods: Tuple[str, ...] = ()
    candidates: Tuple[ComponentId, ...] = ()


@dataclass(frozen=True)
class IntentView:
    intent_id: int
    via: str
    explicit_target: Optional[ComponentId] = None
    action: Optional[str] = None
    categories: frozenset = frozenset()
    mime_type: Optional[str] = None
    scheme: Optional[str] = None
    taint_data: Tuple[Tuple[str, LabelSet], ...] = ()
    chooser_for: Optional[int] = None
    sensitive: LabelSet = EMPTY

    def labels(self) -> LabelSet:
        result = EMPTY
        for _, labels in self.taint_data:
            result = result | labels
        return result


@dataclass(frozen=True)
class ReceiverView:
    process_id: Optional[int] = None
    package: Optional[str] = None
    components: Tuple[ComponentId, ...] = ()
    permissions: frozenset = frozenset()
    permissions_required: frozenset = frozenset()
    permissions_lacked: frozenset = frozenset()
    sink_methods: Tuple[str, ...] = ()
    start_compt: bool = False
    taint_leak: bool = False
    uses: Tuple[SinkUse, ...] = ()
    pending: Tuple[SinkUse, ...] = ()

    @property
    def delivered(self) -> bool:
        return bool(self.components)


@dataclass(frozen=True)
class IccModel:
    model_id: str
    sender: SenderView
    intent: IntentView
    receiver: ReceiverView
    # permission of each sensitive source method carried by the intent
    source_permissions: Tuple[Tuple[str, Optional[str]], ...] = ()
    # label -> component the label entered the receiver from
    sources: Tuple[Tuple[TaintLabel, ComponentId], ...] = ()
    chain: Tuple[int, ...] = ()
    hops: Tuple[ComponentId, ...] = ()
    diagnostics: Tuple[str, ...] = ()
    # receiving apps after the first one (a broadcast reaching several apps)
    fanout: Tuple[ReceiverView, ...] = ()

    @property
    def receivers(self) -> Tuple[ReceiverView, ...]:
        return (self.receiver,) + self.fanout

    def delivered_to(self) -> Tuple[ComponentId, ...]:
        return tuple(c for r in self.receivers for c in r.components)

    def per_receiving_app(self) -> List["IccModel"]:
        """One model per receiving app, each attributed against that app alone."""
        if not self.fanout:
            return [self]
        return [replace(self, model_id=f"{self.model_id}@{r.package}", receiver=r, fanout=()).attribute()
                for r in self.receivers]

    def source_of(self, label: TaintLabel) -> Optional[ComponentId]:
        for known, comp in self.sources:
            if known == label:
                return comp
        return None

    def _consumed(self, receiver: ReceiverView) -> List[SinkUse]:
        labels = self.intent.labels()
        return [u for u in receiver.uses if u.labels.intersects(labels)]

    def consumed(self) -> List[SinkUse]:
        """Effective uses that touched data carried by the intent."""
        return [u for r in self.receivers for u in self._consumed(r)]

    def _attribute_receiver(self, receiver: ReceiverView, sender_required: frozenset) -> ReceiverView:
        consumed = self._consumed(receiver)
        sensitive = self.intent.sensitive
        return replace(
            receiver,
            permissions_required=frozenset(u.permission for u in consumed if u.permission),
            permissions_lacked=sender_required - receiver.permissions,
            sink_methods=tuple(sorted({u.method for u in consumed})),
            taint_leak=any(u.exfiltrating and u.labels.intersects(sensitive) for u in consumed))

    def attribute(self) -> "IccModel":
        """Recomputes every derived sender/receiver attribute from uses and permissions."""
        sender_required = frozenset(p for _, p in self.source_permissions if p)
        receivers = [self._attribute_receiver(r, sender_required) for r in self.receivers]
        receiver_required = frozenset().union(*(r.permissions_required for r in receivers))

        sender = replace(
            self.sender,
            permissions_required=sender_required,
            permissions_lacked=receiver_required - self.sender.permissions,
            source_methods=tuple(sorted({label.source_method for label in self.intent.sensitive.labels})))
        return replace(self, sender=sender, receiver=receivers[0], fanout=tuple(receivers[1:]))

    def provenance(self) -> Tuple[str, ...]:
        """One line per consumed use: original source, hops, intermediaries, sink."""
        lines = []
        intent_labels = self.intent.labels()
        for use in self.consumed():
            carried = [label for label in use.labels if label in intent_labels]
            origin = None
            for label in sorted(carried, key=lambda l: (l not in self.intent.sensitive, l)):
                origin = self.source_of(label)
                if origin is not None:
                    break
            steps = [str(origin or self.sender.component), f"intent#{self.intent.intent_id}"]
            steps += [str(hop) for hop in self.hops]
            steps += [",".join(str(c) for c in self.delivered_to())]
            steps += list(use.via)
            steps.append(f"{use.component}:{use.method}")
            lines.append(" -> ".join(steps))
        return tuple(lines)


# -----------------------------------------------------------------------------------------

class _ReceiverDraft:
    def __init__(self, pid: int, package: str):
        self.pid = pid
        self.package = package
        self.components: List[ComponentId] = []
        self.uses: List[SinkUse] = []
        self.pending: List[SinkUse] = []
        self.start_compt = False
        self.diagnostics: List[str] = []


class _IntentDraft:
    def __init__(self, event: LogEvent):
        self.event = event
        self.intent_id = event.int("intent")
        self.candidates: Tuple[ComponentId, ...] = ()
        self.receivers: Dict[str, _ReceiverDraft] = {}


class ModelBuilder:
    """
    Consumes a focused event stream once. Exactly one model opens at every SEND_INTENT,
    with one receiver view per receiving app;
    deliveries, sinks, stores, loads and component starts are attributed through the
    activation each event names. Activations not opened by a delivery are detached:
    their sinks become pending bypass uses of the model whose data they loaded.
    """

    def __init__(self, meta: AppMetadata, catalog: Optional[MethodCatalog] = None):
        self.meta = meta
        self.catalog = catalog or default_catalog()
        self.intents: Dict[int, _IntentDraft] = {}
        self.order: List[_IntentDraft] = []
        self.act_owner: Dict[int, _ReceiverDraft] = {}
        self.shared_writer: Dict[Tuple[int, str, str], int] = {}
        self.appobj_writes: Dict[int, List[Tuple[LabelSet, int, str]]] = {}
        self.act_loads: Dict[int, List[Tuple[LabelSet, str, List[_ReceiverDraft]]]] = {}
        self.diagnostics: List[str] = []

    def feed(self, event: LogEvent):
        handler = getattr(self, f"_on_{event.kind.value.lower()}", None)
        if handler is not None:
            handler(event)

    def build(self, events: Iterable[LogEvent]) -> List[IccModel]:
        for event in events:
            self.feed(event)
        return self.finish()

    # -----------------------------------------------------------------------------------------

    def _intent(self, event: LogEvent) -> _IntentDraft:
        intent_id = event.int("intent")
        draft = self.intents.get(intent_id)
        if draft is None:
            raise StructuralError(f"seq {event.seq}: {event.kind.value} references unknown intent {intent_id}")
        return draft

    def _on_send_intent(self, event: LogEvent):
        event.required_component()
        intent_id = int(event.require("intent"))
        if intent_id in self.intents:
            raise StructuralError(f"seq {event.seq}: intent {intent_id} sent twice")
        draft = _IntentDraft(event)
        self.intents[intent_id] = draft
        self.order.append(draft)

    def _on_candidates(self, event: LogEvent):
        self._intent(event).candidates = event.components("comps")

    def _on_deliver(self, event: LogEvent):
        draft = self._intent(event)
        comp = event.required_component()
        receiver = draft.receivers.get(comp.package)
        if receiver is None:
            receiver = draft.receivers[comp.package] = _ReceiverDraft(event.pid, comp.package)
        if comp not in receiver.components:
            receiver.components.append(comp)
        act = event.int("act")
        if act is not None:
            self.act_owner[act] = receiver

    def _use(self, event: LogEvent, method: str, labels: LabelSet, via=()) -> SinkUse:
        comp = event.required_component()
        spec = self.catalog.sink(method)
        if spec is None:
            log.warning("seq %d: sink %r is not in the catalog, treated as exfiltrating", event.seq, method)
            return SinkUse(event.seq, comp, method, labels, None, True, tuple(via))
        return SinkUse(event.seq, comp, method, labels, spec.permission, spec.exfiltrating, tuple(via))

    def _on_sink_call(self, event: LogEvent):
        act = event.int("act")
        labels = event.labels()
        method = event.require("method")
        owner = self.act_owner.get(act)
        if owner is not None:
            owner.uses.append(self._use(event, method, labels))
            return

        # detached activation: attribute through the loads that fed this sink
        vias: Dict[int, Tuple[_ReceiverDraft, List[str]]] = {}
        for loaded, via, drafts in self.act_loads.get(act, ()):
            if not loaded or not loaded.issubset(labels):
                continue
            for draft in drafts:
                vias.setdefault(id(draft), (draft, []))[1].append(via)
        for draft, paths in vias.values():
            draft.pending.append(self._use(event, method, labels, paths))

    def _on_store_shared(self, event: LogEvent):
        act = event.int("act")
        store, key = event.text("store"), event.text("key")
        self.shared_writer[(event.pid, store, key)] = act
        owner = self.act_owner.get(act)
        if owner is not None:
            owner.uses.append(self._use(event, config.SHARED_WRITE_METHOD, event.labels()))

    def _on_load_shared(self, event: LogEvent):
        act = event.int("act")
        store, key = event.text("store"), event.text("key")
        writer = self.shared_writer.get((event.pid, store, key))
        owner = self.act_owner.get(writer) if writer is not None else None
        if owner is not None and act not in self.act_owner:
            self.act_loads.setdefault(act, []).append((event.labels(), f"shared:{store}/{key}", [owner]))

    def _on_store_appobj(self, event: LogEvent):
        self.appobj_writes.setdefault(event.pid, []).append(
            (event.labels(), event.int("act"), event.text("field")))

    def _on_load_appobj(self, event: LogEvent):
        # matched on the label set itself: the latest store of exactly these labels
        act = event.int("act")
        loaded = event.labels()
        if act in self.act_owner or not loaded:
            return
        for labels, writer, fld in reversed(self.appobj_writes.get(event.pid, ())):
            if labels == loaded:
                owner = self.act_owner.get(writer)
                if owner is not None:
                    self.act_loads.setdefault(act, []).append((loaded, f"appobj:{fld}", [owner]))
                return

    def _on_start_component(self, event: LogEvent):
        owner = self.act_owner.get(event.int("act"))
        if owner is None:
            return
        target = event.required_component("target")
        spec = self.meta.component(target)
        if target.package == owner.package and spec is not None and not spec.exported:
            owner.start_compt = True

    def _on_diag(self, event: LogEvent):
        message = f"{event.text('code')}: {event.text('message')}"
        owner = self.act_owner.get(event.int("act"))
        if owner is not None:
            owner.diagnostics.append(message)
        else:
            self.diagnostics.append(message)

    # -----------------------------------------------------------------------------------------

    def _sender(self, draft: _IntentDraft) -> SenderView:
        event = draft.event
        comp = event.required_component()
        app = self.meta.by_package(comp.package)
        return SenderView(
            process_id=event.pid, package=comp.package, component=comp,
            components=tuple(c.id for c in app.components) if app else (comp,),
            permissions=app.permissions if app else frozenset(),
            candidates=draft.candidates)

    def _intent_view(self, draft: _IntentDraft) -> Tuple[IntentView, Tuple[Tuple[str, Optional[str]], ...]]:
        event = draft.event
        extras = event.extras()
        taint_data = tuple((key, extras[key]) for key in sorted(extras))
        sensitive = LabelSet(frozenset(
            label for _, labels in taint_data for label in labels.labels
            if self.catalog.is_source(label.source_method)))
        permissions = tuple(sorted(
            {(label.source_method, self.catalog.source_permission(label.source_method))
             for label in sensitive.labels}, key=lambda p: p[0]))
        chooser_for = event.int("chooser_for")
        view = IntentView(
            intent_id=draft.intent_id, via=event.text("via"), explicit_target=event.component("target"),
            action=event.text("action"), categories=frozenset(event.values("categories")),
            mime_type=event.text("type"), scheme=event.text("scheme"),
            taint_data=taint_data, chooser_for=chooser_for, sensitive=sensitive)
        return view, permissions

    def _receiver(self, draft: _ReceiverDraft) -> ReceiverView:
        return ReceiverView(
            process_id=draft.pid, package=draft.package, components=tuple(draft.components),
            permissions=self.meta.permissions_of(draft.package), start_compt=draft.start_compt,
            uses=tuple(draft.uses), pending=tuple(draft.pending))

    def finish(self) -> List[IccModel]:
        models = []
        for draft in self.order:
            sender = self._sender(draft)
            intent, permissions = self._intent_view(draft)
            receivers = [self._receiver(r) for r in draft.receivers.values()] or [ReceiverView()]
            diagnostics = tuple(d for r in draft.receivers.values() for d in r.diagnostics)
            model = IccModel(str(draft.intent_id), sender, intent, receivers[0], permissions,
                             chain=(draft.intent_id,), diagnostics=diagnostics, fanout=tuple(receivers[1:]))
            models.append(model.attribute())
        log.debug("built %d model(s)", len(models))
        return models


def build_models(events: Iterable[LogEvent], meta: AppMetadata,
                 catalog: Optional[MethodCatalog] = None) -> List[IccModel]:
    return ModelBuilder(meta, catalog).build(events)
