"""Pooling of the banding visibility map into frame and video scores.

Frame scores are the mean of the worst (largest) portion of the nonzero
visibility values, discounted for spatially busy frames.  The video score
is a mean of frame scores discounted for motion, since both spatial
complexity and motion mask banding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import PoolingParams
from .preprocess import sobel_gradient
from .video_io import LumaFrame


@dataclass
class FrameScore:
    """Banding severity of a single frame.

    raw_pooled is the pooled visibility before the spatial-information
    discount; score is after it.  ti is populated by the video pass and
    zero for isolated frames.
    """

    frame_index: int
    si: float
    ti: float
    raw_pooled: float
    score: float


@dataclass
class VideoScore:
    """Video-level banding severity with its per-frame breakdown."""

    score: float
    frames: list[FrameScore]


def compute_si(frame: LumaFrame) -> float:
    """Spatial information: standard deviation of the Sobel magnitude.

    Measured on the original frame, not the smoothed one, so genuine
    texture raises it even when the detector's input has been flattened.
    """
    grad = sobel_gradient(frame.as_float())
    return float(np.std(grad.magnitude))


def compute_ti(frames: Sequence[LumaFrame]) -> np.ndarray:
    """Temporal information per frame.

    For each frame after the first this is the standard deviation of the
    luma difference to its predecessor.  The first frame borrows the value
    of the second (its forward difference), so every frame has a finite
    motion estimate; a single-frame sequence gets 0.
    """
    if not frames:
        raise ValueError("need at least one frame")
    ti = np.zeros(len(frames), dtype=np.float64)
    previous = frames[0].as_float()
    for index in range(1, len(frames)):
        current = frames[index].as_float()
        ti[index] = np.std(current - previous)
        previous = current
    if len(frames) > 1:
        ti[0] = ti[1]
    return ti


def transfer_weight(value: float, a: float, b: float) -> float:
    """Masking discount exp(-a * value**b), 1 at zero and falling to 0.

    Used with the spatial-information constants for frames and the
    temporal-information constants for the video mean.
    """
    if value < 0:
        raise ValueError(f"measure must be non-negative, got {value}")
    return math.exp(-a * value**b)


def pool_frame(bvm_values: np.ndarray, percentile: float) -> float:
    """Mean of the worst percentile of nonzero visibility values.

    Only nonzero entries participate; of those, the ceil(percentile%)
    largest are averaged.  The sum is exactly rounded, so the result does
    not depend on the order the values arrive in.  A map with no nonzero
    values pools to 0.
    """
    if not 0 < percentile <= 100:
        raise ValueError(f"percentile must be in (0, 100], got {percentile}")
    values = np.asarray(bvm_values, dtype=np.float64).ravel()
    nonzero = values[values > 0]
    if nonzero.size == 0:
        return 0.0
    keep = math.ceil(percentile / 100.0 * nonzero.size)
    worst = np.partition(nonzero, nonzero.size - keep)[nonzero.size - keep:]
    return math.fsum(worst.tolist()) / keep


def frame_score(
    frame_index: int, si: float, raw_pooled: float, params: PoolingParams
) -> FrameScore:
    """Apply the spatial-information discount to a pooled frame value."""
    return FrameScore(
        frame_index=frame_index,
        si=si,
        ti=0.0,
        raw_pooled=raw_pooled,
        score=raw_pooled * transfer_weight(si, params.a_si, params.b_si),
    )


def score_video(frames: list[FrameScore], params: PoolingParams) -> VideoScore:
    """Motion-weighted mean of frame scores.

    Each frame contributes with weight exp(-a_ti * ti**b_ti), so stretches
    of heavy motion, where banding is masked anyway, influence the video
    score less.
    """
    if not frames:
        raise ValueError("cannot score an empty frame list")
    weights = [transfer_weight(f.ti, params.a_ti, params.b_ti) for f in frames]
    total = math.fsum(weights)
    weighted = math.fsum(w * f.score for w, f in zip(weights, frames))
    return VideoScore(score=weighted / total, frames=frames)
