# plot.py
# ----------------------------------------------------------------
# plots analyzer timings against the number of app pairs
# ----------------------------------------------------------------
# adriana r.f. (@adrmisty)
# oct-2026

import matplotlib
import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from src import config

matplotlib.use('Agg')


class ScalingPlots:
    """Plots for the scaling sweep: per-stage time and per-model time against world size."""

    def __init__(self, runs: pd.DataFrame):
        self.df = runs.copy()
        sns.set_theme(style="whitegrid")

    def plot_stage_times(self, output_path):
        """Median time of each analyzer stage as app pairs grow."""
        plt.figure(figsize=(10, 6))
        sns.lineplot(data=self.df, x="pairs", y="ms", hue="stage", estimator="median",
                     marker="o", palette="viridis")
        plt.title("Analyzer time per stage")
        plt.xlabel("App pairs")
        plt.ylabel("Time (ms)")
        plt.tight_layout()
        plt.savefig(output_path)
        plt.close()

    def plot_per_model(self, output_path):
        totals = self.df.groupby(["pairs", "repeat"], as_index=False).agg(ms=("ms", "sum"), models=("models", "max"))
        totals["per_model"] = totals["ms"] / totals["models"].clip(lower=1)

        plt.figure(figsize=(8, 6))
        ax = sns.lineplot(data=totals, x="pairs", y="per_model", estimator="median", marker="o", color="teal")
        ax.axhline(config.MODEL_BUDGET_MS, linestyle="--", color="crimson", label="budget")
        plt.title("Analyzer time per ICC model")
        plt.xlabel("App pairs")
        plt.ylabel("Time per model (ms)")
        plt.legend()
        plt.tight_layout()
        plt.savefig(output_path)
        plt.close()
