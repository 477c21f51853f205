# script.py
# ----------------------------------------------------------------
# behavior scripts and scenarios: the declarative world the
# monitor simulator interprets
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from src.domain.model import AppSpec, ComponentId, ThreatType


class Trigger(str, Enum):
    ON_LAUNCH = "launch"
    ON_RECEIVE_INTENT = "receive"


class StepKind(str, Enum):
    ACQUIRE_SOURCE = "acquire"
    PUT_EXTRA = "put_extra"
    SEND_INTENT = "send"
    CALL_SINK = "sink"
    STORE_SHARED = "store_shared"
    LOAD_SHARED = "load_shared"
    STORE_APPOBJ = "store_appobj"
    LOAD_APPOBJ = "load_appobj"
    START_COMPONENT = "start"
    GET_EXTRA = "get_extra"
    VALIDATE = "validate"


@dataclass(frozen=True)
class ValueRef:
    """Either a register (`$name`) or a literal string."""
    register: Optional[str] = None
    literal: Optional[str] = None

    @classmethod
    def reg(cls, name: str) -> "ValueRef":
        return cls(register=name)

    @classmethod
    def lit(cls, text: str) -> "ValueRef":
        return cls(literal=text)


@dataclass(frozen=True)
class IntentTemplate:
    via: str
    target: Optional[ComponentId] = None
    action: Optional[str] = None
    categories: frozenset = frozenset()
    mime_type: Optional[str] = None
    scheme: Optional[str] = None


@dataclass(frozen=True)
class Step:
    kind: StepKind
    method: Optional[str] = None
    key: Optional[str] = None
    store: Optional[str] = None
    values: Tuple[ValueRef, ...] = ()
    into: Optional[str] = None
    target: Optional[ComponentId] = None
    intent: Optional[IntentTemplate] = None
    pattern: Optional[str] = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BehaviorScript:
    trigger: Trigger
    steps: Tuple[Step, ...] = ()


@dataclass(frozen=True)
class LaunchEntry:
    component: ComponentId
    chooser_selection: Optional[ComponentId] = None


@dataclass(frozen=True)
class ExpectedVerdict:
    sender: ComponentId
    receiver: ComponentId
    threat: ThreatType


@dataclass(frozen=True)
class Scenario:
    name: str
    apps: Tuple[AppSpec, ...] = ()
    launch_order: Tuple[LaunchEntry, ...] = ()
    expected_verdicts: Tuple[ExpectedVerdict, ...] = ()
    dataset: str = "extra"
    description: str = ""

    def app_by_pid(self, pid: int) -> Optional[AppSpec]:
        for app in self.apps:
            if app.process_id == pid:
                return app
        return None
