# resolver.py
# ----------------------------------------------------------------
# intent resolution: filter matching, candidate lookup across all
# installed apps and per-kind receiver selection
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from src.domain.model import AppSpec, ComponentId, ComponentKind, FilterSpec, IntentRecord
from src.errors import ResolutionError, ScenarioError


def filter_matches(intent: IntentRecord, flt: FilterSpec) -> bool:
    """Action, category and data test of one intent filter. An empty action set matches nothing."""
    if intent.action is None or intent.action not in flt.actions:
        return False
    if not intent.categories <= flt.categories:
        return False
    if intent.mime_type is None:
        mime_ok = not flt.mime_types
    else:
        mime_ok = intent.mime_type in flt.mime_types
    if intent.scheme is None:
        scheme_ok = not flt.data_schemes
    else:
        scheme_ok = intent.scheme in flt.data_schemes
    return mime_ok and scheme_ok


def _visible(sender: ComponentId, app: AppSpec, exported: bool) -> bool:
    # private components are reachable from their own app only
    return exported or app.package == sender.package


def find_all_candidates(intent: IntentRecord, apps: Iterable[AppSpec]) -> List[ComponentId]:
    """
    Candidates for `intent`, in canonical order (priority desc, package asc, name asc).
    An explicit target dominates filter matching.
    """
    kind = ComponentKind.for_via(intent.via)
    apps = list(apps)

    if intent.is_explicit:
        target = intent.explicit_target
        for app in apps:
            comp = app.component(target.name) if app.package == target.package else None
            if comp is None:
                continue
            if comp.kind is not kind:
                raise ResolutionError(f"{target} is a {comp.kind.value}, not reachable via {intent.via}")
            if not _visible(intent.sender, app, comp.exported):
                raise ResolutionError(f"{target} is not exported")
            return [target]
        raise ResolutionError(f"no component {target}")

    ranked = []
    for app in apps:
        for comp in app.components:
            if comp.kind is not kind or not _visible(intent.sender, app, comp.exported):
                continue
            priorities = [f.priority for f in comp.filters if filter_matches(intent, f)]
            if priorities:
                ranked.append((-max(priorities), comp.id.package, comp.id.name))
    ranked.sort()
    return [ComponentId(package, name) for _, package, name in ranked]


def find_receiver(intent: IntentRecord, candidates: Sequence[ComponentId], kind: ComponentKind,
                  chooser_selection: Optional[ComponentId] = None) -> List[ComponentId]:
    if not candidates:
        raise ResolutionError(f"intent {intent.intent_id} has no candidates")

    if kind is ComponentKind.ACTIVITY:
        if chooser_selection is not None:
            if chooser_selection not in candidates:
                raise ScenarioError(f"chooser selection {chooser_selection} is not a candidate "
                                    f"of intent {intent.intent_id}", field="chooser")
            return [chooser_selection]
        return [candidates[0]]
    if kind is ComponentKind.SERVICE:
        return [candidates[0]]
    return list(candidates)
