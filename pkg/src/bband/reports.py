"""Serialization of analysis results: JSON scores, CSV tables, PGM maps.

scores.json is the canonical output; frames.csv is a flat projection of
its per-frame section.  Debug maps are written as binary PGM, with a JSON
sidecar recording the scale used to quantize visibility values so they
can be mapped back to physical units.
"""

from __future__ import annotations

import csv
import json
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config import BbandConfig
from .pipeline import VideoAnalysis

_FRAME_COLUMNS = ("frame_index", "si", "ti", "raw_pooled", "score")


def scores_payload(
    analysis: VideoAnalysis, config: BbandConfig, input_path: str
) -> dict:
    """Build the scores.json document as a plain dict."""
    return {
        "tool": "bband",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "input": input_path,
        "config": config.to_dict(),
        "video_score": analysis.video.score,
        "frames": [
            {
                "frame_index": score.frame_index,
                "si": score.si,
                "ti": score.ti,
                "raw_pooled": score.raw_pooled,
                "score": score.score,
            }
            for score in analysis.video.frames
        ],
    }


def write_scores_json(
    path: str | Path, analysis: VideoAnalysis, config: BbandConfig, input_path: str
) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(scores_payload(analysis, config, input_path), handle,
                  indent=2, sort_keys=True)
        handle.write("\n")


def write_frames_csv(path: str | Path, analysis: VideoAnalysis) -> None:
    """Write the per-frame score table."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(_FRAME_COLUMNS)
        for score in analysis.video.frames:
            writer.writerow(
                [score.frame_index, repr(score.si), repr(score.ti),
                 repr(score.raw_pooled), repr(score.score)]
            )


def write_pgm(path: str | Path, image: np.ndarray) -> None:
    """Write a uint8 image as binary (P5) PGM."""
    if image.dtype != np.uint8 or image.ndim != 2:
        raise ValueError("PGM writer expects a 2-D uint8 array")
    height, width = image.shape
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(image.tobytes())


def write_bvm_map(path: str | Path, values: np.ndarray) -> None:
    """Write a visibility map as PGM plus a JSON scale sidecar.

    Pixel value 255 corresponds to the map's maximum visibility, recorded
    in <path>.json, so the physical values are recoverable.
    """
    peak = float(values.max())
    if peak > 0:
        scaled = np.clip(values / peak * 255.0, 0.0, 255.0)
    else:
        scaled = np.zeros_like(values)
    write_pgm(path, scaled.astype(np.uint8))
    sidecar = Path(str(path) + ".json")
    with open(sidecar, "w", encoding="utf-8") as handle:
        json.dump({"max_value": peak, "levels": 255}, handle)
        handle.write("\n")


def write_bem_map(path: str | Path, label_image: np.ndarray) -> None:
    """Write an edge label image as PGM.

    Background stays 0; labels cycle through 1..255 so neighboring edges
    stay distinguishable in any grayscale viewer.
    """
    folded = np.where(label_image > 0, (label_image - 1) % 255 + 1, 0)
    write_pgm(path, folded.astype(np.uint8))
