"""Matplotlib rendering of the report outputs. Figures are written to
files next to the delimited data; no interactive backend is touched."""
from __future__ import annotations

import math
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .plotdata import AggregateRow, HistogramRow, SeriesPoint

_AXIS_LABELS = {"n": "number of vertices", "rho": "happiness proportion", "k": "number of colours"}


def render_series(points: Sequence[SeriesPoint], axis: str, path) -> None:
    """Binned mean happiness ratio and detection accuracy per algorithm."""
    fig, (ax_alpha, ax_acd) = plt.subplots(1, 2, figsize=(11, 4.2), sharex=True)
    algos = sorted({p.algo for p in points})
    for algo in algos:
        mine = [p for p in points if p.algo == algo and p.count > 0]
        xs = [p.bin_center for p in mine]
        ax_alpha.plot(xs, [p.alpha_mean for p in mine], marker="o", markersize=3, label=algo)
        acd_pts = [(p.bin_center, p.acd_mean) for p in mine if p.acd_mean is not None]
        if acd_pts:
            ax_acd.plot(*zip(*acd_pts), marker="o", markersize=3, label=algo)
    label = _AXIS_LABELS.get(axis, axis)
    for ax, title in ((ax_alpha, "mean happiness ratio"), (ax_acd, "mean detection accuracy")):
        ax.set_xlabel(label)
        ax.set_ylabel(title)
        ax.set_ylim(-0.02, 1.02)
        ax.grid(True, alpha=0.3)
    ax_alpha.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_histograms(rows: Sequence[HistogramRow], path) -> None:
    """Grid of happiness-ratio histograms, one panel per algorithm, with a
    dotted vertical line at each algorithm's mean."""
    algos = sorted({r.algo for r in rows})
    ncols = 2
    nrows = math.ceil(len(algos) / ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(9, 2.6 * nrows), squeeze=False)
    for i, algo in enumerate(algos):
        ax = axes[i // ncols][i % ncols]
        mine = [r for r in rows if r.algo == algo]
        ax.bar(
            [r.bin_left for r in mine],
            [r.count for r in mine],
            width=mine[0].bin_right - mine[0].bin_left if mine else 0.01,
            align="edge",
        )
        if mine:
            ax.axvline(mine[0].alpha_mean, linestyle=":", color="black")
        ax.set_title(algo, fontsize=9)
        ax.set_xlim(0, 1)
    for j in range(len(algos), nrows * ncols):
        axes[j // ncols][j % ncols].axis("off")
    fig.supxlabel("happiness ratio")
    fig.supylabel("outputs")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_mean_bars(rows: Sequence[AggregateRow], path) -> None:
    """Horizontal bars of mean happiness ratio per algorithm and regime."""
    regimes = sorted({r.regime for r in rows})
    algos = sorted({r.algo for r in rows})
    fig, ax = plt.subplots(figsize=(8, 0.5 * len(algos) * max(len(regimes), 1) + 1.5))
    height = 0.8 / max(len(regimes), 1)
    for ri, regime in enumerate(regimes):
        ys, widths = [], []
        for ai, algo in enumerate(algos):
            match = [r for r in rows if r.algo == algo and r.regime == regime]
            if match:
                ys.append(ai + ri * height)
                widths.append(match[0].alpha_mean)
        ax.barh(ys, widths, height=height, label=regime)
    ax.set_yticks(range(len(algos)))
    ax.set_yticklabels(algos)
    ax.set_xlabel("mean happiness ratio")
    ax.set_xlim(0, 1)
    if regimes != ["all"]:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
