# pipeline.py
# ----------------------------------------------------------------
# the Analyzer: parse -> build -> deflate -> trace -> classify,
# each stage timed and its failures labelled
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

from src.analysis.bypass import trace_bypass_sources
from src.analysis.deflation import deflate_models
from src.analysis.models import IccModel, ModelBuilder
from src.analysis.threats import ThreatVerdict, classify
from src.domain.catalog import MethodCatalog, default_catalog
from src.errors import IccError, StageError
from src.logformat.events import LogEvent
from src.logformat.metadata import AppMetadata
from src.logformat.reader import LogReader, LogSource

log = logging.getLogger(__name__)

STAGES = ("parse", "build", "deflate", "trace", "classify")


@dataclass
class AnalysisResult:
    verdicts: List[ThreatVerdict] = field(default_factory=list)
    raw_models: int = 0
    events: int = 0
    skipped_records: int = 0
    timings: Dict[str, float] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)

    @property
    def models(self) -> List[IccModel]:
        return [v.model for v in self.verdicts]

    @property
    def total_ms(self) -> float:
        return sum(self.timings.values())

    @property
    def per_model_ms(self) -> float:
        return self.total_ms / len(self.verdicts) if self.verdicts else 0.0


class IccAnalyzer:
    """Runs the analysis stages over one log. Stateless between calls."""

    def __init__(self, catalog: Optional[MethodCatalog] = None, ignore_sinks: bool = False,
                 clock: Callable[[], float] = time.perf_counter):
        self.catalog = catalog or default_catalog()
        self.ignore_sinks = ignore_sinks
        self.clock = clock

    def _stage(self, name: str, timings: Dict[str, float], fn):
        start = self.clock()
        try:
            result = fn()
        except (IccError, ValueError, KeyError) as e:
            if isinstance(e, StageError):
                raise
            raise StageError(name, e) from e
        timings[name] = (self.clock() - start) * 1000.0
        log.debug("stage %s: %.3f ms", name, timings[name])
        return result

    def run(self, source: LogSource, meta: AppMetadata, focus: Optional[Set[int]] = None) -> AnalysisResult:
        timings: Dict[str, float] = {}
        reader = LogReader(source, focus if focus is not None else meta.pids())

        events: List[LogEvent] = self._stage("parse", timings, lambda: list(reader))
        builder = ModelBuilder(meta, self.catalog)
        raw = self._stage("build", timings, lambda: builder.build(events))
        deflated = self._stage("deflate", timings, lambda: deflate_models(raw))
        traced = self._stage("trace", timings, lambda: self._trace(deflated))
        verdicts = self._stage("classify", timings,
                               lambda: [classify(part, self.ignore_sinks)
                                        for m in traced for part in m.per_receiving_app()])

        return AnalysisResult(
            verdicts=verdicts, raw_models=len(raw), events=len(events),
            skipped_records=reader.skipped, timings=timings,
            diagnostics=list(builder.diagnostics) + [d for m in traced for d in m.diagnostics])

    @staticmethod
    def _trace(models: List[IccModel]) -> List[IccModel]:
        traced: List[IccModel] = []
        for m in models:
            traced.append(trace_bypass_sources(m, traced))
        return traced


def analyze(source: LogSource, meta: AppMetadata, focus: Optional[Set[int]] = None,
            catalog: Optional[MethodCatalog] = None, ignore_sinks: bool = False) -> List[ThreatVerdict]:
    return IccAnalyzer(catalog, ignore_sinks).run(source, meta, focus).verdicts


def verdict_triples(verdicts: List[ThreatVerdict]) -> List[Tuple[str, str, str]]:
    """(sender, receiver, threat) per verdict and receiving component, in model order."""
    triples = []
    for v in verdicts:
        receivers = v.model.receiver.components or (None,)
        for receiver in receivers:
            triples.append((str(v.model.sender.component), str(receiver) if receiver else "", v.threat.value))
    return triples
