"""Matplotlib rendering of curves and histograms to image files."""

from __future__ import annotations

from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .analysis import IrdHistogram
from .cachesim import HitRatioCurve


def plot_hrc(
    curves: Sequence[HitRatioCurve],
    path: str,
    labels: Optional[Sequence[str]] = None,
    log_x: bool = True,
    title: Optional[str] = None,
) -> None:
    """Draw hit-ratio curves over normalized cache size and save the figure."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, curve in enumerate(curves):
        label = labels[i] if labels else curve.policy
        ax.step(curve.normalized_sizes, curve.hit_ratios, where="post", label=label)
    ax.set_xlabel("cache size / footprint")
    ax.set_ylabel("hit ratio")
    ax.set_ylim(-0.02, 1.02)
    if log_x:
        ax.set_xscale("log")
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _draw_hist(ax, hist: IrdHistogram, label: str) -> None:
    edges = hist.bin_edges
    counts = hist.bin_counts.astype(np.float64)
    widths = np.diff(edges)
    ax.bar(edges[:-1], counts, width=widths, align="edge", alpha=0.75)
    ax.set_xscale("log")
    ax.set_xlabel("inter-reference distance")
    ax.set_ylabel("references")
    total = max(hist.total, 1)
    ax.set_title(f"{label} (inf: {hist.inf_count}, {100.0 * hist.inf_count / total:.1f}%)", fontsize=10)


def plot_ird(
    hists: Sequence[tuple[str, IrdHistogram]],
    path: str,
    title: Optional[str] = None,
) -> None:
    """Draw one panel per labeled histogram, side by side, and save."""
    count = max(len(hists), 1)
    fig, axes = plt.subplots(1, count, figsize=(4.2 * count, 3.4), squeeze=False)
    for ax, (label, hist) in zip(axes[0], hists):
        _draw_hist(ax, hist, label)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
