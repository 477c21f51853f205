# model.py
# ----------------------------------------------------------------
# domain types shared by the monitor and the analyzer:
# components, apps, intent filters, intents and taint labels
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Dict, Iterable, Iterator, Mapping, Optional, Tuple

if TYPE_CHECKING:
    from src.scenario.script import BehaviorScript

IDENTIFIER = re.compile(r"^[A-Za-z0-9_.$-]+$")


class ComponentKind(str, Enum):
    ACTIVITY = "activity"
    SERVICE = "service"
    RECEIVER = "receiver"

    @classmethod
    def for_via(cls, via: str) -> "ComponentKind":
        """Maps a sending API family (startActivity/startService/sendBroadcast) to the kind it reaches."""
        return {"activity": cls.ACTIVITY, "service": cls.SERVICE, "broadcast": cls.RECEIVER}[via]


VIAS = ("activity", "service", "broadcast")


@dataclass(frozen=True, order=True)
class ComponentId:
    package: str
    name: str

    def __str__(self):
        return f"{self.package}/{self.name}"

    @classmethod
    def parse(cls, text: str) -> "ComponentId":
        package, sep, name = text.partition("/")
        if not sep or not package or not name:
            raise ValueError(f"component id must be 'package/Name': {text!r}")
        return cls(package, name)


@dataclass(frozen=True, order=True)
class TaintLabel:
    """Provenance unit: which tag, which source method, which component produced it."""
    tag: int
    source_method: str
    origin_component: ComponentId

    def token(self) -> str:
        return f"{self.tag:#010x}@{self.source_method}@{self.origin_component}"

    @classmethod
    def from_token(cls, token: str) -> "TaintLabel":
        tag, method, origin = token.split("@", 2)
        return cls(int(tag, 16), method, ComponentId.parse(origin))

    def __str__(self):
        return self.token()


@dataclass(frozen=True)
class LabelSet:
    labels: frozenset = frozenset()

    @classmethod
    def of(cls, *labels: TaintLabel) -> "LabelSet":
        return cls(frozenset(labels))

    def __iter__(self) -> Iterator[TaintLabel]:
        return iter(sorted(self.labels))

    def __len__(self):
        return len(self.labels)

    def __bool__(self):
        return bool(self.labels)

    def __contains__(self, label):
        return label in self.labels

    def __or__(self, other: "LabelSet") -> "LabelSet":
        return union_labels(self, other)

    def __and__(self, other: "LabelSet") -> "LabelSet":
        return LabelSet(self.labels & other.labels)

    def intersects(self, other: "LabelSet") -> bool:
        return not self.labels.isdisjoint(other.labels)

    def issubset(self, other: "LabelSet") -> bool:
        return self.labels <= other.labels

    def tags(self) -> Tuple[int, ...]:
        return tuple(sorted({label.tag for label in self.labels}))

    def tokens(self) -> Tuple[str, ...]:
        return tuple(label.token() for label in self)

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "LabelSet":
        return cls(frozenset(TaintLabel.from_token(t) for t in tokens))


EMPTY = LabelSet()


def union_labels(a: LabelSet, b: LabelSet) -> LabelSet:
    """Join of two label sets. Union is the only way labels combine."""
    if not b.labels:
        return a
    if not a.labels:
        return b
    return LabelSet(a.labels | b.labels)


@dataclass(frozen=True)
class FilterSpec:
    actions: frozenset = frozenset()
    categories: frozenset = frozenset()
    data_schemes: frozenset = frozenset()
    mime_types: frozenset = frozenset()
    priority: int = 0


@dataclass(frozen=True)
class ComponentSpec:
    id: ComponentId
    kind: ComponentKind
    exported: bool = False
    filters: Tuple[FilterSpec, ...] = ()
    scripts: Tuple["BehaviorScript", ...] = ()

    def script_for(self, trigger) -> Optional["BehaviorScript"]:
        for script in self.scripts:
            if script.trigger == trigger:
                return script
        return None


@dataclass(frozen=True)
class AppSpec:
    package: str
    process_id: int
    permissions: frozenset = frozenset()
    components: Tuple[ComponentSpec, ...] = ()

    def component(self, name: str) -> Optional[ComponentSpec]:
        for comp in self.components:
            if comp.id.name == name:
                return comp
        return None


@dataclass(frozen=True)
class IntentRecord:
    """An in-flight intent. `extras` maps key -> (payload, labels)."""
    intent_id: int
    sender: ComponentId
    via: str
    explicit_target: Optional[ComponentId] = None
    action: Optional[str] = None
    categories: frozenset = frozenset()
    mime_type: Optional[str] = None
    scheme: Optional[str] = None
    extras: Mapping[str, Tuple[str, LabelSet]] = field(default_factory=dict)
    chooser_for: Optional[int] = None

    @property
    def is_explicit(self) -> bool:
        return self.explicit_target is not None

    def labels(self) -> LabelSet:
        result = EMPTY
        for _, labels in self.extras.values():
            result = result | labels
        return result


def index_components(apps: Iterable[AppSpec]) -> Dict[ComponentId, Tuple[AppSpec, ComponentSpec]]:
    return {comp.id: (app, comp) for app in apps for comp in app.components}


class ThreatType(str, Enum):
    HIJACKING = "hijacking"
    SPOOFING = "spoofing"
    COLLUSION = "collusion"
    NONE = "none"

    @property
    def is_threat(self) -> bool:
        return self is not ThreatType.NONE
