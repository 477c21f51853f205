# stats.py
# ----------------------------------------------------------------
# scaling statistics: analyzer stage timings over synthetic
# worlds of growing numbers of app pairs
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

import logging
import os
from typing import Iterable, List, Optional

import pandas as pd

from src import config
from src.analysis.pipeline import STAGES, IccAnalyzer
from src.domain.catalog import MethodCatalog
from src.domain.generators.scaling import ScalingWorldGenerator
from src.monitor.simulator import Monitor

log = logging.getLogger(__name__)


class ScalingStats:
    """Times every analyzer stage for each world size; the median over repeats is reported."""

    def __init__(self, sizes: Iterable[int], repeats: int = 3, catalog: Optional[MethodCatalog] = None):
        self.sizes = sorted(set(sizes))
        self.repeats = max(1, repeats)
        self.catalog = catalog
        self.generator = ScalingWorldGenerator()
        self._runs: Optional[pd.DataFrame] = None

    def measure(self) -> pd.DataFrame:
        """One row per (pairs, repeat, stage)."""
        analyzer = IccAnalyzer(self.catalog)
        rows = []
        for pairs in self.sizes:
            monitor = Monitor(self.generator.generate_world(pairs), self.catalog)
            data = monitor.run(test_mode=True).to_bytes()
            meta = monitor.metadata()
            for repeat in range(self.repeats):
                result = analyzer.run(data, meta)
                for stage in STAGES:
                    rows.append({"pairs": pairs, "repeat": repeat, "stage": stage,
                                 "ms": result.timings.get(stage, 0.0),
                                 "models": len(result.verdicts), "events": result.events})
            log.debug("scaling: %d pair(s) measured", pairs)
        self._runs = pd.DataFrame(rows, columns=["pairs", "repeat", "stage", "ms", "models", "events"])
        return self._runs

    @property
    def runs(self) -> pd.DataFrame:
        if self._runs is None:
            self.measure()
        return self._runs

    def summary(self) -> pd.DataFrame:
        """Median stage times per world size, plus total and per-model time."""
        runs = self.runs
        table = runs.pivot_table(index="pairs", columns="stage", values="ms", aggfunc="median")
        table = table.reindex(columns=list(STAGES)).fillna(0.0)
        table["total"] = table[list(STAGES)].sum(axis=1)
        table["models"] = runs.groupby("pairs")["models"].max()
        table["per_model"] = table["total"] / table["models"].clip(lower=1)
        return table.round(3)

    def per_model_ratio(self) -> float:
        """Largest over smallest per-model time; close to 1 when analysis time is linear."""
        per_model = self.summary()["per_model"]
        smallest = per_model.min()
        return float(per_model.max() / smallest) if smallest > 0 else 1.0

    def stage_ratios(self, stage: str = "build") -> List[float]:
        """Median time of `stage` at each size over the one before it."""
        medians = self.summary()[stage].tolist()
        return [b / a if a > 0 else 1.0 for a, b in zip(medians, medians[1:])]

    def report(self, output_dir: str) -> str:
        summary = self.summary()
        os.makedirs(output_dir, exist_ok=True)

        lines = ["=" * 80, f"{'ANALYZER SCALING':^80}", "=" * 80]
        row_fmt = "{:<12} | {:<8} | {:<12} | {:<12} | {:<12}"
        lines.append(row_fmt.format("App pairs", "Models", "Total (ms)", "Model (ms)", "Budget"))
        lines.append("-" * 80)
        for pairs, row in summary.iterrows():
            budget = "ok" if row["per_model"] <= config.MODEL_BUDGET_MS else "over"
            lines.append(row_fmt.format(pairs, int(row["models"]), f"{row['total']:.3f}",
                                        f"{row['per_model']:.3f}", budget))
        lines.append("-" * 80)
        lines.append(f"PER-MODEL RATIO (max/min): {self.per_model_ratio():.2f}")
        lines.append("=" * 80)

        report_str = "\n".join(lines)
        with open(os.path.join(output_dir, "scaling_summary.txt"), "w", encoding="utf-8") as f:
            f.write(report_str + "\n")
        summary.to_csv(os.path.join(output_dir, "scaling_summary.csv"), index=True)
        self.runs.to_csv(os.path.join(output_dir, "scaling_runs.csv"), index=False)
        return report_str
