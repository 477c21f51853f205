# bypass.py
# ----------------------------------------------------------------
# original-source identification for data that left a receiver
# through a Shareference entry or an Application object field
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, Optional, Sequence

from src.analysis.models import IccModel
from src.domain.model import ComponentId, TaintLabel

log = logging.getLogger(__name__)


def find_original_source(label: TaintLabel, m: IccModel, prior: Sequence[IccModel]) -> Optional[ComponentId]:
    """
    1. the label travelled in m's own intent: m's sender;
    2. the latest prior model that delivered the label to m's sender: its recorded source;
    3. any prior model whose intent carried the label: its recorded source.
    """
    if label in m.intent.labels():
        return m.sender.component
    for p in reversed(prior):
        if m.sender.component in p.delivered_to() and label in p.intent.labels():
            return p.source_of(label) or p.sender.component
    for p in reversed(prior):
        if label in p.intent.labels():
            return p.source_of(label) or p.sender.component
    return None


def trace_bypass_sources(m: IccModel, prior: Sequence[IccModel]) -> IccModel:
    """
    Resolves the origin of every foreign label consumed by m's receiver. Pending bypass
    uses with at least one resolved label become effective uses; the rest stay pending
    with an unresolved-source diagnostic.
    """
    sources: Dict[TaintLabel, ComponentId] = dict(m.sources)
    carried = m.intent.labels()

    for receiver in m.receivers:
        for use in receiver.uses + receiver.pending:
            for label in use.labels:
                if label in sources:
                    continue
                if label.origin_component.package == receiver.package and label not in carried:
                    continue
                origin = find_original_source(label, m, prior)
                if origin is not None:
                    sources[label] = origin

    receivers, diagnostics = [], list(m.diagnostics)
    for receiver in m.receivers:
        promoted, pending = list(receiver.uses), []
        for use in receiver.pending:
            if any(label in sources for label in use.labels):
                promoted.append(use)
            else:
                pending.append(use)
                message = f"unresolved-source: {use.component}:{use.method} (seq {use.seq})"
                diagnostics.append(message)
                log.warning("model %s: %s", m.model_id, message)
        receivers.append(replace(receiver, uses=tuple(promoted), pending=tuple(pending)))

    traced = replace(
        m,
        receiver=receivers[0],
        fanout=tuple(receivers[1:]),
        sources=tuple(sorted(sources.items())),
        diagnostics=tuple(diagnostics))
    return traced.attribute()
