"""Evaluation figures written next to the JSON metric output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def savefig(fig, path: str | Path, dpi: int = 150) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path


def plot_precision_recall(
    precision: Sequence[float], recall: Sequence[float], path: str | Path, ap: float | None = None
) -> Path:
    """Raw precision/recall points and the interpolated envelope used for AP."""
    fig, ax = plt.subplots(figsize=(4.5, 4))
    if precision:
        envelope = list(precision)
        for k in range(len(envelope) - 2, -1, -1):
            envelope[k] = max(envelope[k], envelope[k + 1])
        ax.plot(recall, precision, ".", ms=3, color="0.6", label="ranked detections")
        ax.step(recall, envelope, where="post", color="C0", label="interpolated")
    title = "Precision-recall @ IoU 0.5"
    if ap is not None:
        title += f" (AP {ap:.3f})"
    ax.set(xlabel="recall", ylabel="precision", xlim=(0, 1.02), ylim=(0, 1.02), title=title)
    ax.legend(loc="lower left", frameon=False)
    return savefig(fig, path)


def plot_rate_histogram(
    rates: dict[str, Sequence[float]], path: str | Path, xlabel: str = "error rate", title: str = ""
) -> Path:
    """Overlaid histograms of per-segment scores, one series per metric."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    upper = max((max(v) for v in rates.values() if len(v)), default=1.0)
    bins = [upper * k / 20 for k in range(21)] if upper > 0 else 20
    for k, (name, values) in enumerate(rates.items()):
        ax.hist(values, bins=bins, alpha=0.55, color=f"C{k}", label=name)
    ax.set(xlabel=xlabel, ylabel="segments", title=title)
    ax.legend(frameon=False)
    return savefig(fig, path)
