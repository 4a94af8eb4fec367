"""Figure rendering for evaluation reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def plot_classification(report, out_path):
    """Micro/macro F1 means with std error bars across train ratios."""
    ratios = sorted({c.ratio for c in report.cells if c.task == "classify"})
    fig, ax = plt.subplots(figsize=(6, 4))
    for metric, marker in (("micro_f1", "o"), ("macro_f1", "s")):
        means = [report.mean(metric, r) for r in ratios]
        stds = [report.std(metric, r) for r in ratios]
        ax.errorbar(ratios, means, yerr=stds, marker=marker, capsize=3,
                    label=metric.replace("_", " "))
    ax.set_xlabel("train ratio")
    ax.set_ylabel("F1")
    ax.set_ylim(0, 1)
    ax.grid(alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_reconstruction(ap_values, map_score, out_path):
    """Histogram of per-node average precision with the MAP marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(np.asarray(ap_values), bins=20, range=(0, 1),
            color="steelblue", edgecolor="white")
    ax.axvline(map_score, color="crimson", linestyle="--",
               label=f"MAP = {map_score:.3f}")
    ax.set_xlabel("per-node average precision")
    ax.set_ylabel("nodes")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
