# catalog.py
# ----------------------------------------------------------------
# taint tag catalog and source/sink method catalog
# (embedded defaults from config, optional YAML override)
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Mapping, Optional

import yaml

from src import config
from src.errors import CatalogError, UnknownTagError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SourceSpec:
    tag: int
    tag_name: str
    permission: Optional[str] = None


@dataclass(frozen=True)
class SinkSpec:
    permission: Optional[str] = None
    exfiltrating: bool = True


@dataclass(frozen=True)
class TagCatalog:
    tags: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        seen = {}
        for name, value in self.tags.items():
            if not 0 <= value <= 0xFFFFFFFF:
                raise CatalogError(f"tag {name} is not a 32-bit value: {value:#x}")
            if value in seen:
                raise CatalogError(f"tags {seen[value]} and {name} share value {value:#010x}")
            seen[value] = name
        object.__setattr__(self, "_names", seen)

    def lookup_tag(self, name: str) -> int:
        try:
            return self.tags[name]
        except KeyError:
            raise UnknownTagError(name) from None

    def name_of(self, tag: int) -> str:
        try:
            return self._names[tag]
        except KeyError:
            raise UnknownTagError(f"{tag:#010x}") from None

    def __contains__(self, tag: int) -> bool:
        return tag in self._names

    def __len__(self):
        return len(self.tags)


@dataclass(frozen=True)
class MethodCatalog:
    tags: TagCatalog
    sources: Mapping[str, SourceSpec] = field(default_factory=dict)
    sinks: Mapping[str, SinkSpec] = field(default_factory=dict)

    def lookup_tag(self, name: str) -> int:
        return self.tags.lookup_tag(name)

    def source(self, method: str) -> Optional[SourceSpec]:
        return self.sources.get(method)

    def sink(self, method: str) -> Optional[SinkSpec]:
        return self.sinks.get(method)

    def is_source(self, method: str) -> bool:
        return method in self.sources

    def source_permission(self, method: str) -> Optional[str]:
        spec = self.sources.get(method)
        return spec.permission if spec else None

    @property
    def intent_extra_tag(self) -> int:
        return self.tags.lookup_tag(config.INTENT_EXTRA_TAG)


def _build(tags: Dict[str, int], sources: Dict[str, tuple], sinks: Dict[str, tuple]) -> MethodCatalog:
    tag_catalog = TagCatalog(dict(tags))
    source_specs = {}
    for method, (tag_name, permission) in sources.items():
        if tag_name not in tag_catalog.tags:
            raise CatalogError(f"source {method} references unregistered tag {tag_name}")
        source_specs[method] = SourceSpec(tag_catalog.tags[tag_name], tag_name, permission)
    sink_specs = {method: SinkSpec(permission, bool(exfil)) for method, (permission, exfil) in sinks.items()}
    return MethodCatalog(tag_catalog, source_specs, sink_specs)


@lru_cache(maxsize=1)
def default_catalog() -> MethodCatalog:
    return _build(config.TAINT_TAGS, config.SOURCE_METHODS, config.SINK_METHODS)


def lookup_tag(name: str, catalog: Optional[MethodCatalog] = None) -> int:
    """Returns the 32-bit tag registered under `name`."""
    return (catalog or default_catalog()).lookup_tag(name)


def load_catalog(path: str) -> MethodCatalog:
    """Loads a catalog YAML file; entries extend (and may override) the embedded defaults."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise CatalogError(f"{path}: not valid YAML ({e})") from e

    if doc.get("format") != config.CATALOG_MAGIC:
        raise CatalogError(f"{path}: expected format '{config.CATALOG_MAGIC}'")
    if doc.get("version") != config.CATALOG_VERSION:
        raise CatalogError(f"{path}: unsupported catalog version {doc.get('version')}")

    tags = dict(config.TAINT_TAGS)
    sources = dict(config.SOURCE_METHODS)
    sinks = dict(config.SINK_METHODS)

    for name, value in (doc.get("tags") or {}).items():
        tags[name] = int(value)
    for method, entry in (doc.get("sources") or {}).items():
        if "tag" not in entry:
            raise CatalogError(f"{path}: source '{method}' has no tag")
        sources[method] = (entry["tag"], entry.get("permission"))
    for method, entry in (doc.get("sinks") or {}).items():
        sinks[method] = (entry.get("permission"), entry.get("exfiltrating", True))

    catalog = _build(tags, sources, sinks)
    log.debug("loaded catalog %s: %d tags, %d sources, %d sinks",
              path, len(catalog.tags), len(catalog.sources), len(catalog.sinks))
    return catalog
