# worlds.py
# ----------------------------------------------------------------
# base for synthetic world generators: builds scenarios (apps,
# components, behavior scripts) without going through the parser
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Iterable, List, Optional, Sequence

from src.domain.model import AppSpec, ComponentId, ComponentKind, ComponentSpec, FilterSpec
from src.scenario.script import (BehaviorScript, IntentTemplate, LaunchEntry, Scenario, Step,
                                 StepKind, Trigger, ValueRef)


class WorldGenerator(ABC):
    """Generates synthetic scenarios for the property tests and the scaling sweep."""

    def __init__(self, prefix: str):
        self.prefix = prefix

    def generate_all(self, ns: Iterable[int]) -> List[Scenario]:
        return [self.generate_world(n) for n in ns]

    @abstractmethod
    def generate_world(self, n: int) -> Scenario:
        """`n` is a world index or a world size, depending on the generator."""
        pass

    # -----------------------------------------------------------------------------------------

    def _make_scenario(self, name: str, apps: Sequence[AppSpec], launches: Sequence[ComponentId]) -> Scenario:
        return Scenario(name=name, apps=tuple(apps),
                        launch_order=tuple(LaunchEntry(c) for c in launches),
                        dataset="extra", description=f"generated by {type(self).__name__}")

    @staticmethod
    def _make_app(package: str, pid: int, permissions: Iterable[str], components: Sequence[ComponentSpec]) -> AppSpec:
        return AppSpec(package, pid, frozenset(permissions), tuple(components))

    @staticmethod
    def _make_component(cid: ComponentId, kind: ComponentKind, exported: bool,
                        actions: Iterable[str] = (), priority: int = 0,
                        on_launch: Sequence[Step] = (), on_receive: Sequence[Step] = ()) -> ComponentSpec:
        actions = frozenset(actions)
        filters = (FilterSpec(actions=actions, priority=priority),) if actions else ()
        scripts = []
        if on_launch:
            scripts.append(BehaviorScript(Trigger.ON_LAUNCH, tuple(on_launch)))
        if on_receive:
            scripts.append(BehaviorScript(Trigger.ON_RECEIVE_INTENT, tuple(on_receive)))
        return ComponentSpec(cid, kind, exported, filters, tuple(scripts))

    # step shorthands

    @staticmethod
    def acquire(method: str, into: str) -> Step:
        return Step(StepKind.ACQUIRE_SOURCE, method=method, into=into)

    @staticmethod
    def put_extra(key: str, value: ValueRef) -> Step:
        return Step(StepKind.PUT_EXTRA, key=key, values=(value,))

    @staticmethod
    def send(via: str, target: Optional[ComponentId] = None, action: Optional[str] = None) -> Step:
        return Step(StepKind.SEND_INTENT, intent=IntentTemplate(via, target, action))

    @staticmethod
    def get_extra(key: str, into: str) -> Step:
        return Step(StepKind.GET_EXTRA, key=key, into=into)

    @staticmethod
    def sink(method: str, *values: ValueRef) -> Step:
        return Step(StepKind.CALL_SINK, method=method, values=tuple(values))

    @staticmethod
    def store_shared(store: str, key: str, value: ValueRef) -> Step:
        return Step(StepKind.STORE_SHARED, store=store, key=key, values=(value,))

    @staticmethod
    def load_shared(store: str, key: str, into: str) -> Step:
        return Step(StepKind.LOAD_SHARED, store=store, key=key, into=into)

    @staticmethod
    def store_appobj(fld: str, value: ValueRef) -> Step:
        return Step(StepKind.STORE_APPOBJ, key=fld, values=(value,))

    @staticmethod
    def load_appobj(fld: str, into: str) -> Step:
        return Step(StepKind.LOAD_APPOBJ, key=fld, into=into)

    @staticmethod
    def start(target: ComponentId) -> Step:
        return Step(StepKind.START_COMPONENT, target=target)

    @staticmethod
    def validate(key: str, pattern: str) -> Step:
        return Step(StepKind.VALIDATE, key=key, pattern=pattern)
