# engine.py
# ----------------------------------------------------------------
# taint primitives of the monitor: taint at sources, retaint on
# intent insertion, identify at sinks, explicit-flow propagation
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from src import config
from src.domain.catalog import MethodCatalog, default_catalog
from src.domain.model import EMPTY, ComponentId, LabelSet, TaintLabel, union_labels
from src.errors import UnknownTagError


class OpKind(str, Enum):
    COPY = "copy"
    CONCAT = "concat"
    STORE_EXTRA = "store_extra"
    LOAD_EXTRA = "load_extra"
    STORE_SHARED = "store_shared"
    LOAD_SHARED = "load_shared"
    STORE_APPOBJ = "store_appobj"
    LOAD_APPOBJ = "load_appobj"


@dataclass(frozen=True)
class TaintedValue:
    value: str
    labels: LabelSet = EMPTY

    @property
    def tainted(self) -> bool:
        return bool(self.labels)


def untainted(value: str) -> TaintedValue:
    return TaintedValue(value, EMPTY)


class TaintEngine:
    """Stateless taint operations bound to a tag/method catalog."""

    def __init__(self, catalog: Optional[MethodCatalog] = None):
        self.catalog = catalog or default_catalog()

    def add_taint_to_data(self, value, tag: int, source_method: str, component: ComponentId) -> TaintedValue:
        """Attaches (tag, source_method, component) to `value`, keeping any labels it already had."""
        if tag not in self.catalog.tags:
            raise UnknownTagError(f"{tag:#010x}")
        label = TaintLabel(tag, source_method, component)
        if isinstance(value, TaintedValue):
            return TaintedValue(value.value, union_labels(value.labels, LabelSet.of(label)))
        return TaintedValue(str(value), LabelSet.of(label))

    def retaint_for_intent(self, value: TaintedValue, sender: ComponentId) -> TaintedValue:
        """T-data' <- T-data: marks a value as carried by an intent of `sender`."""
        return self.add_taint_to_data(value, self.catalog.intent_extra_tag,
                                      config.INTENT_EXTRA_METHOD, sender)

    @staticmethod
    def identify_taint_data(value: TaintedValue) -> LabelSet:
        return value.labels

    @staticmethod
    def propagate(op_kind: OpKind, inputs: Sequence[TaintedValue]) -> TaintedValue:
        if not inputs:
            raise ValueError("propagate needs at least one input")
        labels = EMPTY
        for v in inputs:
            labels = union_labels(labels, v.labels)
        if OpKind(op_kind) is OpKind.CONCAT:
            payload = "".join(v.value for v in inputs)
        else:
            payload = inputs[0].value
        return TaintedValue(payload, labels)

    def is_sensitive(self, label: TaintLabel) -> bool:
        """True when the label was produced by a catalog source (not only by intent insertion)."""
        return self.catalog.is_source(label.source_method)
