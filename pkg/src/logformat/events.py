# events.py
# ----------------------------------------------------------------
# log events: kinds and the ordered name/value payload every
# record carries
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Optional, Tuple, Union

from src.domain.model import ComponentId, LabelSet
from src.errors import StructuralError

EXTRA_PREFIX = "extra."

FieldValue = Union[str, Tuple[str, ...]]


class EventKind(str, Enum):
    LAUNCH = "LAUNCH"
    SET_TAINT = "SET_TAINT"
    CHECK_INTENT = "CHECK_INTENT"
    SEND_INTENT = "SEND_INTENT"
    CANDIDATES = "CANDIDATES"
    DELIVER = "DELIVER"
    SINK_CALL = "SINK_CALL"
    STORE_SHARED = "STORE_SHARED"
    LOAD_SHARED = "LOAD_SHARED"
    STORE_APPOBJ = "STORE_APPOBJ"
    LOAD_APPOBJ = "LOAD_APPOBJ"
    START_COMPONENT = "START_COMPONENT"
    DIAG = "DIAG"


def _normalize(value) -> Optional[FieldValue]:
    if value is None:
        return None
    if isinstance(value, LabelSet):
        return value.tokens()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (frozenset, set)):
        return tuple(sorted(str(v) for v in value))
    if isinstance(value, (list, tuple)):
        return tuple(str(v) for v in value)
    return str(value)


@dataclass(frozen=True)
class LogEvent:
    """One log record. `fields` keeps the payload in emission order."""
    seq: int
    pid: int
    kind: EventKind
    fields: Tuple[Tuple[str, FieldValue], ...] = ()

    @classmethod
    def make(cls, seq: int, pid: int, kind: EventKind, fields: Iterable[Tuple[str, object]] = ()) -> "LogEvent":
        """Builds an event; None values are dropped, labels become token lists."""
        payload = []
        for name, value in fields:
            value = _normalize(value)
            if value is not None:
                payload.append((name, value))
        return cls(seq, pid, EventKind(kind), tuple(payload))

    def get(self, name: str, default=None):
        for key, value in self.fields:
            if key == name:
                return value
        return default

    def text(self, name: str) -> Optional[str]:
        value = self.get(name)
        return value if isinstance(value, str) else None

    def int(self, name: str) -> Optional[int]:
        value = self.text(name)
        return int(value) if value is not None else None

    def require(self, name: str) -> str:
        value = self.text(name)
        if value is None:
            raise StructuralError(f"seq {self.seq}: {self.kind.value} record without '{name}'")
        return value

    def component(self, name: str = "comp") -> Optional[ComponentId]:
        value = self.text(name)
        return ComponentId.parse(value) if value is not None else None

    def required_component(self, name: str = "comp") -> ComponentId:
        return ComponentId.parse(self.require(name))

    def components(self, name: str) -> Tuple[ComponentId, ...]:
        return tuple(ComponentId.parse(v) for v in self.get(name, ()))

    def values(self, name: str) -> Tuple[str, ...]:
        value = self.get(name, ())
        return value if isinstance(value, tuple) else (value,)

    def labels(self, name: str = "labels") -> LabelSet:
        return LabelSet.from_tokens(self.get(name, ()))

    def extras(self) -> Dict[str, LabelSet]:
        """Extras of a SEND_INTENT record: key -> labels."""
        return {name[len(EXTRA_PREFIX):]: LabelSet.from_tokens(value)
                for name, value in self.fields
                if name.startswith(EXTRA_PREFIX) and isinstance(value, tuple)}
