# metadata.py
# ----------------------------------------------------------------
# app metadata sidecar: packages, pids, permissions and component
# declarations, standing in for what APK analysis would extract
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Set, Tuple

import yaml

from src import config
from src.domain.model import AppSpec, ComponentId, ComponentKind, ComponentSpec, FilterSpec
from src.errors import LogFormatError, VersionError


@dataclass(frozen=True)
class AppMetadata:
    apps: Tuple[AppSpec, ...] = ()

    @classmethod
    def from_apps(cls, apps: Iterable[AppSpec]) -> "AppMetadata":
        """Static view of a world: behavior scripts are dropped."""
        return cls(tuple(
            AppSpec(app.package, app.process_id, app.permissions,
                    tuple(ComponentSpec(c.id, c.kind, c.exported, c.filters) for c in app.components))
            for app in apps))

    def pids(self) -> Set[int]:
        return {app.process_id for app in self.apps}

    def by_pid(self, pid: int) -> Optional[AppSpec]:
        for app in self.apps:
            if app.process_id == pid:
                return app
        return None

    def by_package(self, package: str) -> Optional[AppSpec]:
        for app in self.apps:
            if app.package == package:
                return app
        return None

    def component(self, cid: ComponentId) -> Optional[ComponentSpec]:
        app = self.by_package(cid.package)
        return app.component(cid.name) if app else None

    def permissions_of(self, package: str) -> frozenset:
        app = self.by_package(package)
        return app.permissions if app else frozenset()

    # -----------------------------------------------------------------------------------------

    def to_dict(self) -> Dict:
        return {
            "format": config.META_MAGIC,
            "version": config.META_VERSION,
            "apps": [{
                "package": app.package,
                "pid": app.process_id,
                "permissions": sorted(app.permissions),
                "components": [{
                    "name": comp.id.name,
                    "kind": comp.kind.value,
                    "exported": comp.exported,
                    "filters": [{
                        "actions": sorted(f.actions),
                        "categories": sorted(f.categories),
                        "schemes": sorted(f.data_schemes),
                        "types": sorted(f.mime_types),
                        "priority": f.priority,
                    } for f in comp.filters],
                } for comp in app.components],
            } for app in self.apps],
        }

    def dumps(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=False)

    @classmethod
    def from_dict(cls, doc) -> "AppMetadata":
        if not isinstance(doc, dict) or doc.get("format") != config.META_MAGIC:
            raise LogFormatError(f"metadata: expected format '{config.META_MAGIC}'")
        if doc.get("version") != config.META_VERSION:
            raise VersionError(f"metadata: unsupported version {doc.get('version')!r}")
        apps = []
        try:
            for entry in doc.get("apps") or []:
                package = entry["package"]
                components = tuple(
                    ComponentSpec(ComponentId(package, c["name"]), ComponentKind(c["kind"]),
                                  bool(c.get("exported", False)),
                                  tuple(FilterSpec(frozenset(f.get("actions") or ()),
                                                   frozenset(f.get("categories") or ()),
                                                   frozenset(f.get("schemes") or ()),
                                                   frozenset(f.get("types") or ()),
                                                   int(f.get("priority", 0)))
                                        for f in c.get("filters") or ()))
                    for c in entry.get("components") or ())
                apps.append(AppSpec(package, int(entry["pid"]),
                                    frozenset(entry.get("permissions") or ()), components))
        except (KeyError, TypeError, ValueError) as e:
            raise LogFormatError(f"metadata: malformed app entry ({e})") from None
        return cls(tuple(apps))

    @classmethod
    def loads(cls, text: str) -> "AppMetadata":
        try:
            return cls.from_dict(yaml.safe_load(text))
        except yaml.YAMLError as e:
            raise LogFormatError(f"metadata: not valid YAML ({e})") from None


def read_metadata(path: str) -> AppMetadata:
    with open(path, "r", encoding="utf-8") as f:
        return AppMetadata.loads(f.read())


def write_metadata(meta: AppMetadata, path: str):
    with open(path, "w", encoding="utf-8") as f:
        f.write(meta.dumps())
