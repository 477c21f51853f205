# deflation.py
# ----------------------------------------------------------------
# models deflation: chooser elision and chain condensation
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
from dataclasses import replace
from typing import Dict, List, Sequence

from src import config
from src.analysis.models import IccModel
from src.domain.model import ComponentId

log = logging.getLogger(__name__)

RESOLVER = ComponentId(config.SYSTEM_PACKAGE, config.RESOLVER_NAME)


def elide_choosers(models: Sequence[IccModel]) -> List[IccModel]:
    """
    Intent a reached the ResolverActivity, which sent intent b to the chosen component.
    The pair becomes one model: sender of a, intent b, receiver of b; a is discarded.
    """
    to_resolver: Dict[int, IccModel] = {
        m.intent.intent_id: m for m in models if RESOLVER in m.receiver.components}
    merged_away = set()
    result = []
    for m in models:
        first = to_resolver.get(m.intent.chooser_for) if m.intent.chooser_for is not None else None
        if first is None:
            result.append(m)
            continue
        merged_away.add(first.model_id)
        result.append(replace(
            m, sender=first.sender, chain=first.chain + m.chain,
            diagnostics=first.diagnostics + m.diagnostics).attribute())
    return [m for m in result if m.model_id not in merged_away]


def _condense(chain: List[IccModel]) -> IccModel:
    head, tail = chain[0], chain[-1]
    hops = []
    for m, following in zip(chain, chain[1:]):
        hops.extend(m.hops)
        hops.append(following.sender.component)
    hops.extend(tail.hops)
    return replace(
        head,
        model_id="..".join((head.model_id, tail.model_id)),
        receiver=tail.receiver,
        fanout=tail.fanout,
        chain=tuple(i for m in chain for i in m.chain),
        hops=tuple(hops),
        diagnostics=tuple(d for m in chain for d in m.diagnostics),
    ).attribute()


def condense_chains(models: Sequence[IccModel]) -> List[IccModel]:
    """
    Model i+1 extends the chain ending in model i when the sender of i+1 is a receiver
    of i and a label of i's intent reappears in i+1's intent. The condensed model keeps the
    head's sender and intent and the tail's receiver.
    """
    chains: List[List[IccModel]] = []
    by_tail: Dict[ComponentId, List[int]] = {}

    for m in models:
        joined = None
        labels = m.intent.labels()
        for idx in reversed(by_tail.get(m.sender.component, ())):
            tail = chains[idx][-1]
            if m.sender.component in tail.delivered_to() and tail.intent.labels().intersects(labels):
                joined = idx
                break
        if joined is None:
            joined = len(chains)
            chains.append([m])
        else:
            chains[joined].append(m)
        for comp in m.delivered_to():
            by_tail.setdefault(comp, []).append(joined)

    result = [chain[0] if len(chain) == 1 else _condense(chain) for chain in chains]
    log.debug("condensed %d model(s) into %d", len(models), len(result))
    return result


def deflate_models(models: Sequence[IccModel]) -> List[IccModel]:
    return condense_chains(elide_choosers(models))
