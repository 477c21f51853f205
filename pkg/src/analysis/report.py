# report.py
# ----------------------------------------------------------------
# analysis report: per-verdict records, threat counts, accuracy
# against ground truth, stage timings; table and JSON renderings
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd
import yaml

from src import config
from src.analysis.pipeline import STAGES, AnalysisResult
from src.domain.model import ComponentId, ThreatType
from src.errors import IccError
from src.scenario.script import ExpectedVerdict


@dataclass(frozen=True)
class VerdictRecord:
    scenario: str
    dataset: str
    model_id: str
    sender_app: str
    sender_component: str
    receiver_app: str
    receiver_component: str
    threat: str
    case: Optional[int] = None
    evidence: Tuple[str, ...] = ()
    provenance: Tuple[str, ...] = ()

    def key(self) -> Tuple[str, str, str, str]:
        return self.scenario, self.sender_component, self.receiver_component, self.threat


@dataclass(frozen=True)
class ExpectedRecord:
    scenario: str
    dataset: str
    sender: str
    receiver: str
    threat: str

    def key(self) -> Tuple[str, str, str, str]:
        return self.scenario, self.sender, self.receiver, self.threat


@dataclass(frozen=True)
class Score:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_measure: float


def score(flagged: Iterable[Tuple], expected: Iterable[Tuple]) -> Score:
    """precision = TP/(TP+FP), 1.0 when nothing is flagged; recall = TP/|expected|, 1.0 when nothing is expected."""
    flagged, expected = set(flagged), set(expected)
    tp = len(flagged & expected)
    fp = len(flagged - expected)
    fn = len(expected - flagged)
    precision = tp / (tp + fp) if flagged else 1.0
    recall = tp / len(expected) if expected else 1.0
    f_measure = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Score(tp, fp, fn, precision, recall, f_measure)


@dataclass(frozen=True)
class Report:
    records: Tuple[VerdictRecord, ...] = ()
    expected: Optional[Tuple[ExpectedRecord, ...]] = None
    timings: Tuple[Tuple[str, float], ...] = ()
    models: int = 0

    # -----------------------------------------------------------------------------------------

    def counts(self) -> Dict[str, int]:
        counts = {t.value: 0 for t in ThreatType}
        for record in self.records:
            counts[record.threat] += 1
        return counts

    def threats(self) -> List[VerdictRecord]:
        return [r for r in self.records if r.threat != ThreatType.NONE.value]

    def score(self) -> Optional[Score]:
        if self.expected is None:
            return None
        return score((r.key() for r in self.threats()),
                     (e.key() for e in self.expected if e.threat != ThreatType.NONE.value))

    @property
    def total_ms(self) -> float:
        return sum(ms for _, ms in self.timings)

    @property
    def per_model_ms(self) -> float:
        return self.total_ms / self.models if self.models else 0.0

    @property
    def within_budget(self) -> bool:
        return self.per_model_ms <= config.MODEL_BUDGET_MS

    @classmethod
    def merge(cls, reports: Sequence["Report"]) -> "Report":
        timings: Dict[str, float] = {}
        for report in reports:
            for stage, ms in report.timings:
                timings[stage] = round(timings.get(stage, 0.0) + ms, 3)
        has_truth = any(r.expected is not None for r in reports)
        return cls(
            records=tuple(rec for r in reports for rec in r.records),
            expected=tuple(e for r in reports for e in (r.expected or ())) if has_truth else None,
            timings=tuple(timings.items()),
            models=sum(r.models for r in reports))

    # -----------------------------------------------------------------------------------------

    def summary(self) -> Dict:
        summary = {
            "counts": self.counts(),
            "models": self.models,
            "timings_ms": {stage: ms for stage, ms in self.timings},
            "per_model_ms": round(self.per_model_ms, 3),
            "budget_ms": config.MODEL_BUDGET_MS,
            "within_budget": self.within_budget,
        }
        s = self.score()
        if s is not None:
            summary["accuracy"] = {k: (round(v, 4) if isinstance(v, float) else v) for k, v in asdict(s).items()}
        return summary

    def to_dict(self) -> Dict:
        return {
            "format": config.REPORT_MAGIC,
            "version": config.REPORT_VERSION,
            "records": [asdict(r) for r in self.records],
            "expected": [asdict(e) for e in self.expected] if self.expected is not None else None,
            "timings": [[stage, ms] for stage, ms in self.timings],
            "models": self.models,
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        """Inverse of to_json; the summary is recomputed, never read back."""
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise IccError(f"report is not valid JSON ({e})") from None
        if doc.get("format") != config.REPORT_MAGIC or doc.get("version") != config.REPORT_VERSION:
            raise IccError(f"expected a '{config.REPORT_MAGIC}' v{config.REPORT_VERSION} document")
        records = tuple(
            VerdictRecord(**{**r, "evidence": tuple(r["evidence"]), "provenance": tuple(r["provenance"])})
            for r in doc["records"])
        expected = doc.get("expected")
        return cls(
            records=records,
            expected=tuple(ExpectedRecord(**e) for e in expected) if expected is not None else None,
            timings=tuple((stage, float(ms)) for stage, ms in doc.get("timings", ())),
            models=int(doc.get("models", 0)))

    # -----------------------------------------------------------------------------------------

    def records_frame(self) -> pd.DataFrame:
        columns = ["scenario", "sender_component", "receiver_component", "threat", "case"]
        df = pd.DataFrame([asdict(r) for r in self.records], columns=columns + ["dataset"])
        df["case"] = df["case"].map(lambda c: "-" if c is None or pd.isna(c) else str(int(c)))
        return df[columns].rename(columns={"sender_component": "sender", "receiver_component": "receiver"})

    def dataset_frame(self) -> pd.DataFrame:
        """Per-dataset accuracy: planted paths, hits, misses, false alarms, precision, recall."""
        datasets = sorted({r.dataset for r in self.records} | {e.dataset for e in (self.expected or ())})
        rows = []
        for dataset in datasets:
            records = [r for r in self.threats() if r.dataset == dataset]
            expected = [e for e in (self.expected or ())
                        if e.dataset == dataset and e.threat != ThreatType.NONE.value]
            s = score((r.key() for r in records), (e.key() for e in expected))
            rows.append({
                "dataset": dataset,
                "scenarios": len({r.scenario for r in self.records if r.dataset == dataset}),
                "paths": len(expected), "detected": s.tp, "false": s.fp, "missed": s.fn,
                "precision": round(s.precision, 2), "recall": round(s.recall, 2),
            })
        return pd.DataFrame(rows, columns=["dataset", "scenarios", "paths", "detected", "false",
                                           "missed", "precision", "recall"])

    def to_table(self, per_dataset: bool = False) -> str:
        lines = ["=" * 80, f"{'ICC THREAT REPORT':^80}", "=" * 80]
        if self.records:
            lines.append(self.records_frame().to_string(index=False))
        else:
            lines.append("(no ICC models)")
        lines.append("-" * 80)

        row_fmt = "{:<30} | {:<12}"
        for threat, count in self.counts().items():
            lines.append(row_fmt.format(threat, count))
        s = self.score()
        if s is not None:
            lines.append("-" * 80)
            lines.append(row_fmt.format("precision", f"{s.precision:.2f}"))
            lines.append(row_fmt.format("recall", f"{s.recall:.2f}"))
            lines.append(row_fmt.format("f-measure", f"{s.f_measure:.2f}"))
        lines.append("-" * 80)
        for stage, ms in self.timings:
            lines.append(row_fmt.format(f"time {stage} (ms)", f"{ms:.3f}"))
        budget = "within budget" if self.within_budget else "over budget"
        lines.append(row_fmt.format("per model (ms)", f"{self.per_model_ms:.3f} ({budget} {config.MODEL_BUDGET_MS})"))
        if per_dataset:
            lines.append("-" * 80)
            lines.append(self.dataset_frame().to_string(index=False))
        lines.append("=" * 80)
        return "\n".join(lines) + "\n"


# -----------------------------------------------------------------------------------------

def build_report(result: AnalysisResult, scenario: str, dataset: str = "extra",
                 expected: Optional[Sequence[ExpectedVerdict]] = None, test_mode: bool = False) -> Report:
    records = []
    for verdict in result.verdicts:
        model = verdict.model
        evidence = tuple(f"{name}={value}" for name, value in verdict.evidence)
        provenance = model.provenance()
        for receiver in model.receiver.components or (None,):
            records.append(VerdictRecord(
                scenario=scenario, dataset=dataset, model_id=model.model_id,
                sender_app=model.sender.package, sender_component=str(model.sender.component),
                receiver_app=model.receiver.package or "", receiver_component=str(receiver) if receiver else "",
                threat=verdict.threat.value, case=verdict.matched_case,
                evidence=evidence, provenance=provenance))
    truth = None
    if expected is not None:
        truth = tuple(ExpectedRecord(scenario, dataset, str(e.sender), str(e.receiver), e.threat.value)
                      for e in expected)
    timings = tuple((stage, 0.0 if test_mode else round(result.timings.get(stage, 0.0), 3))
                    for stage in STAGES)
    return Report(tuple(records), truth, timings, len(result.verdicts))


def load_expected(path: str) -> List[ExpectedVerdict]:
    """Expected verdicts file: a YAML list of {sender, receiver, threat}."""
    with open(path, "r", encoding="utf-8") as f:
        doc = yaml.safe_load(f) or []
    try:
        return [ExpectedVerdict(ComponentId.parse(e["sender"]), ComponentId.parse(e["receiver"]),
                                ThreatType(e["threat"]))
                for e in doc]
    except (KeyError, TypeError, ValueError) as e:
        raise IccError(f"{path}: malformed expected verdict ({e})") from None


def dump_expected(expected: Sequence[ExpectedVerdict]) -> str:
    return yaml.safe_dump([{"sender": str(e.sender), "receiver": str(e.receiver), "threat": e.threat.value}
                           for e in expected], sort_keys=False)
