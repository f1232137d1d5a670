"""End-to-end banding analysis for frames and videos.

A frame passes through smoothing, gradient extraction, banding edge
detection, visibility weighting and pooling.  A video adds per-frame
motion estimates and a motion-weighted mean over the frame scores.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import BbandConfig
from .edges import BandingEdgeMap, extract_edges
from .preprocess import sobel_gradient, guided_filter
from .scoring import (
    FrameScore,
    VideoScore,
    compute_ti,
    frame_score,
    pool_frame,
    score_video,
)
from .video_io import LumaFrame, VideoStream
from .visibility import BandingVisibilityMap, build_bvm


@dataclass
class FrameAnalysis:
    """Everything the pipeline derived from one frame."""

    frame_index: int
    bem: BandingEdgeMap
    bvm: BandingVisibilityMap
    score: FrameScore


@dataclass
class VideoAnalysis:
    """Video-level result plus the per-frame artifacts behind it."""

    video: VideoScore
    frames: list[FrameAnalysis]


def analyze_frame(frame: LumaFrame, config: BbandConfig | None = None) -> FrameAnalysis:
    """Run the full single-frame banding pipeline.

    The detector operates on a smoothed copy of the frame so that dither
    and grain do not break banding contours apart, while the visibility
    statistics are taken from the original frame, where the masking
    signals actually live.

    Args:
        frame: Input luma frame.
        config: Pipeline parameters; defaults are used when omitted.

    Returns:
        The banding edge map, visibility map and pooled score.
    """
    if config is None:
        config = BbandConfig()
    config.validate()
    smoothed = guided_filter(frame, config.guided_radius, config.guided_epsilon)
    grad_smoothed = sobel_gradient(smoothed.data)
    bem = extract_edges(
        grad_smoothed,
        t1=config.t1,
        t2=config.t2,
        blob_radius=config.blob_radius,
        min_length=config.min_edge_length,
    )
    grad_raw = sobel_gradient(frame.as_float())
    grad_for_visibility = grad_smoothed if config.use_smoothed_gradient else grad_raw
    bvm = build_bvm(
        frame,
        bem,
        grad_for_visibility,
        config.masking,
        half_height=config.window_half_height,
        half_width=config.window_half_width,
        gaussian_sigma=config.gaussian_sigma,
    )
    si = float(np.std(grad_raw.magnitude))
    raw_pooled = pool_frame(bvm.values, config.pooling.percentile)
    return FrameAnalysis(
        frame_index=frame.frame_index,
        bem=bem,
        bvm=bvm,
        score=frame_score(frame.frame_index, si, raw_pooled, config.pooling),
    )


def analyze_video(
    stream: VideoStream, config: BbandConfig | None = None
) -> VideoAnalysis:
    """Analyze every frame of a stream and pool into a video score.

    Frames are independent once the motion estimates are in hand, so they
    are dispatched to a thread pool; results are collected in frame order
    and the outcome is identical for any worker count.

    Raises:
        ValueError: If the stream has no frames.
    """
    if config is None:
        config = BbandConfig()
    config.validate()
    if not stream.frames:
        raise ValueError("cannot analyze an empty stream")
    ti = compute_ti(stream.frames)
    workers = config.workers if config.workers else min(os.cpu_count() or 1, 8)
    if workers == 1:
        analyses = [analyze_frame(frame, config) for frame in stream.frames]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            analyses = list(
                pool.map(lambda frame: analyze_frame(frame, config), stream.frames)
            )
    for analysis, motion in zip(analyses, ti):
        analysis.score.ti = float(motion)
    video = score_video([a.score for a in analyses], config.pooling)
    return VideoAnalysis(video=video, frames=analyses)
