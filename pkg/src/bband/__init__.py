"""Blind banding-artifact detector for video.

Scores banded (posterized) gradients in decoded video without any reference:
each frame gets a per-pixel banding visibility map, pooled into a frame score,
and frame scores combine into a single video score.
"""

__version__ = "0.1.0"

from .config import BbandConfig, ConfigError
from .video_io import LumaFrame, VideoStream, read_raw_yuv, read_y4m, write_y4m
from .pipeline import FrameAnalysis, analyze_frame, analyze_video
from .scoring import FrameScore, VideoScore

__all__ = [
    "BbandConfig",
    "ConfigError",
    "LumaFrame",
    "VideoStream",
    "FrameAnalysis",
    "FrameScore",
    "VideoScore",
    "analyze_frame",
    "analyze_video",
    "read_raw_yuv",
    "read_y4m",
    "write_y4m",
    "__version__",
]
