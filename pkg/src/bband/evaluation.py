"""Agreement statistics against subjective scores, plus synthetic fixtures.

Predicted banding scores are compared to mean opinion scores two ways:
rank correlations (Spearman, Kendall tau-b) on the raw predictions, and
linear correlation plus RMSE after mapping predictions through a fitted
four-parameter logistic.  The fixture generator produces quantized
gradient ramps with optional dither so the detector can be exercised
without any subjective dataset.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import optimize, stats

from .video_io import LumaFrame, VideoStream

_DIRECTIONS = ("horizontal", "vertical")


@dataclass
class ScoredItem:
    """One clip's predicted banding score and its mean opinion score."""

    item_id: str
    predicted: float
    mos: float


@dataclass
class LogisticParams:
    """Coefficients of the monotone four-parameter logistic.

    The curve is mos ~ beta2 + (beta1 - beta2) / (1 + exp(-(x - beta3) / |beta4|)).
    """

    beta1: float
    beta2: float
    beta3: float
    beta4: float

    def evaluate(self, x):
        x_arr = np.asarray(x, dtype=np.float64)
        scale = abs(self.beta4)
        curve = self.beta2 + (self.beta1 - self.beta2) / (
            1.0 + np.exp(-(x_arr - self.beta3) / scale)
        )
        if np.isscalar(x) or x_arr.ndim == 0:
            return float(curve)
        return curve


@dataclass
class EvalReport:
    """Rank and linear agreement between predictions and opinion scores."""

    srcc: float
    krcc: float
    plcc: float
    rmse: float
    logistic_params: LogisticParams


@dataclass
class SyntheticBandingSpec:
    """Recipe for a quantized-gradient banding fixture.

    The base image is a linear luma ramp from low to high along the given
    direction, quantized to multiples of q; this yields visible bands for
    q well above 1.  A positive dither amplitude adds per-frame uniform
    integer noise in [-amplitude, amplitude] after quantization, emulating
    the noisy banding of user-generated content.
    """

    width: int = 256
    height: int = 128
    direction: str = "horizontal"
    low: float = 0.0
    high: float = 255.0
    q: int = 16
    dither_amplitude: int = 0
    frame_count: int = 1
    seed: int = 0

    def validate(self) -> None:
        if self.width < 2 or self.height < 2:
            raise ValueError(f"geometry too small: {self.width}x{self.height}")
        if self.direction not in _DIRECTIONS:
            raise ValueError(
                f"direction must be one of {_DIRECTIONS}, got {self.direction!r}"
            )
        if not 0 <= self.low <= self.high <= 255:
            raise ValueError(f"range [{self.low}, {self.high}] not within [0, 255]")
        if self.q < 1:
            raise ValueError(f"quantization step must be >= 1, got {self.q}")
        if self.dither_amplitude < 0:
            raise ValueError(f"dither amplitude must be >= 0, got {self.dither_amplitude}")
        if self.frame_count < 1:
            raise ValueError(f"frame count must be >= 1, got {self.frame_count}")


def generate_banding_fixture(spec: SyntheticBandingSpec) -> VideoStream:
    """Render the quantized-ramp fixture described by spec.

    A range of r luma levels quantized to step q produces ceil(r / q)
    bands; dither below q does not change the band count, it only
    roughens the edges.  Output is deterministic for a given seed.
    """
    spec.validate()
    if spec.direction == "horizontal":
        positions = np.arange(spec.width, dtype=np.float64) / (spec.width - 1)
        ramp = np.tile(spec.low + positions * (spec.high - spec.low), (spec.height, 1))
    else:
        positions = np.arange(spec.height, dtype=np.float64) / (spec.height - 1)
        column = spec.low + positions * (spec.high - spec.low)
        ramp = np.tile(column[:, None], (1, spec.width))
    quantized = np.floor(ramp / spec.q) * spec.q
    rng = np.random.default_rng(spec.seed)
    frames = []
    for index in range(spec.frame_count):
        plane = quantized
        if spec.dither_amplitude > 0:
            noise = rng.integers(
                -spec.dither_amplitude,
                spec.dither_amplitude,
                size=plane.shape,
                endpoint=True,
            )
            plane = np.clip(plane + noise, 0, 255)
        frames.append(
            LumaFrame(
                width=spec.width,
                height=spec.height,
                data=plane.astype(np.uint8),
                frame_index=index,
            )
        )
    return VideoStream(frames=frames, frame_rate=Fraction(30, 1))


def fit_logistic(items: list[ScoredItem]) -> LogisticParams:
    """Least-squares fit of the four-parameter logistic to the items.

    Initialization is fixed (upper asymptote at the best MOS, lower at the
    worst, midpoint at the median prediction, unit scale) so the fit is
    deterministic.

    Raises:
        ValueError: On fewer than 5 items or constant predictions.
    """
    if len(items) < 5:
        raise ValueError(f"need at least 5 items to fit, got {len(items)}")
    predicted = np.array([item.predicted for item in items], dtype=np.float64)
    mos = np.array([item.mos for item in items], dtype=np.float64)
    if not (np.isfinite(predicted).all() and np.isfinite(mos).all()):
        raise ValueError("predicted and mos values must be finite")
    if np.ptp(predicted) == 0:
        raise ValueError("all predicted values are equal; logistic fit is degenerate")

    def residual(beta: np.ndarray) -> np.ndarray:
        curve = beta[1] + (beta[0] - beta[1]) / (
            1.0 + np.exp(-(predicted - beta[2]) / abs(beta[3]))
        )
        return curve - mos

    start = np.array(
        [mos.max(), mos.min(), float(np.median(predicted)), 1.0], dtype=np.float64
    )
    result = optimize.least_squares(residual, start, method="lm", xtol=1e-15, ftol=1e-15)
    beta = result.x
    return LogisticParams(
        beta1=float(beta[0]),
        beta2=float(beta[1]),
        beta3=float(beta[2]),
        beta4=float(abs(beta[3])),
    )


def correlations(items: list[ScoredItem], params: LogisticParams) -> EvalReport:
    """Rank and linear agreement statistics for scored items.

    Spearman and Kendall (tau-b) correlations are computed on the raw
    predictions; Pearson correlation and RMSE are computed after mapping
    predictions through the fitted logistic.

    Raises:
        ValueError: On fewer than 2 items.
    """
    if len(items) < 2:
        raise ValueError(f"need at least 2 items, got {len(items)}")
    predicted = np.array([item.predicted for item in items], dtype=np.float64)
    mos = np.array([item.mos for item in items], dtype=np.float64)
    srcc = stats.spearmanr(predicted, mos).statistic
    krcc = stats.kendalltau(predicted, mos, variant="b").statistic
    fitted = params.evaluate(predicted)
    plcc = stats.pearsonr(fitted, mos).statistic
    rmse = math.sqrt(float(np.mean((fitted - mos) ** 2)))
    return EvalReport(
        srcc=float(srcc),
        krcc=float(krcc),
        plcc=float(plcc),
        rmse=rmse,
        logistic_params=params,
    )


def evaluate_items(items: list[ScoredItem]) -> EvalReport:
    """Fit the logistic and compute the full agreement report."""
    return correlations(items, fit_logistic(items))


def read_scores_csv(path: str | Path) -> list[ScoredItem]:
    """Load a scores table with columns item_id, predicted, mos.

    Raises:
        ValueError: On a missing or misnamed header, or non-numeric rows.
    """
    with open(path, "r", newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        required = {"item_id", "predicted", "mos"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(
                f"scores CSV must have columns item_id, predicted, mos; "
                f"got {reader.fieldnames}"
            )
        items = []
        for line, row in enumerate(reader, start=2):
            try:
                items.append(
                    ScoredItem(
                        item_id=row["item_id"],
                        predicted=float(row["predicted"]),
                        mos=float(row["mos"]),
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad row at line {line}: {exc}") from exc
    return items
