"""Figure rendering for analysis and evaluation reports.

Figures are rendered headlessly to PNG files next to the tabular outputs
they illustrate.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import EvalReport, ScoredItem
from .pipeline import VideoAnalysis

_SCORE_COLOR = "#1f77b4"
_RAW_COLOR = "#9467bd"
_FIT_COLOR = "#d62728"
_POINT_COLOR = "#2ca02c"


def render_frame_timeline(path: str | Path, analysis: VideoAnalysis) -> None:
    """Plot per-frame banding scores over the frame index."""
    frames = analysis.video.frames
    indices = [score.frame_index for score in frames]
    fig, ax = plt.subplots(figsize=(8, 4))
    ax.plot(indices, [s.raw_pooled for s in frames], color=_RAW_COLOR,
            linewidth=1.0, alpha=0.7, label="pooled visibility")
    ax.plot(indices, [s.score for s in frames], color=_SCORE_COLOR,
            linewidth=1.6, label="frame score")
    ax.axhline(analysis.video.score, color=_FIT_COLOR, linestyle="--",
               linewidth=1.0, label=f"video score {analysis.video.score:.4g}")
    ax.set_xlabel("frame")
    ax.set_ylabel("banding score")
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_eval_scatter(
    path: str | Path, items: list[ScoredItem], report: EvalReport
) -> None:
    """Scatter predictions against opinion scores with the fitted curve."""
    predicted = np.array([item.predicted for item in items], dtype=np.float64)
    mos = np.array([item.mos for item in items], dtype=np.float64)
    grid = np.linspace(predicted.min(), predicted.max(), 256)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(predicted, mos, color=_POINT_COLOR, s=28, zorder=3, label="items")
    ax.plot(grid, report.logistic_params.evaluate(grid), color=_FIT_COLOR,
            linewidth=1.6, label="logistic fit")
    ax.set_xlabel("predicted banding score")
    ax.set_ylabel("MOS")
    ax.set_title(
        f"SRCC {report.srcc:.4f}  KRCC {report.krcc:.4f}  "
        f"PLCC {report.plcc:.4f}  RMSE {report.rmse:.4f}"
    )
    ax.grid(True, alpha=0.3)
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
