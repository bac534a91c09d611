"""Matplotlib rendering of experiment outputs, written next to their CSV files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = ["save_series_plot"]


def save_series_plot(path, series, title: str = "", ylabel: str = "", xlabel: str = "t") -> None:
    """Plot labelled sample sequences on one axes and save to ``path``.

    ``series`` is an iterable of (label, samples) pairs; samples are
    plotted against their index.
    """
    fig, ax = plt.subplots(figsize=(8, 4))
    for label, samples in series:
        ax.plot(range(len(samples)), samples, label=label, linewidth=1.0)
    ax.set_xlabel(xlabel)
    if ylabel:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best", fontsize=9)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=150)
    plt.close(fig)
