"""Shared fixtures for the test suite."""

from __future__ import annotations

import numpy as np
import pytest

from bband.config import BbandConfig
from bband.edges import BandingEdge, BandingEdgeMap
from bband.evaluation import SyntheticBandingSpec, generate_banding_fixture
from bband.video_io import LumaFrame


@pytest.fixture
def default_config():
    return BbandConfig()


@pytest.fixture
def make_step_frame():
    """Factory for single quantized-ramp frames of a given step q."""

    def build(q, width=256, height=128, low=0.0, high=255.0):
        spec = SyntheticBandingSpec(
            width=width, height=height, low=low, high=high, q=q
        )
        return generate_banding_fixture(spec).frames[0]

    return build


@pytest.fixture
def make_gray_frame():
    def build(value, width=64, height=48, frame_index=0):
        data = np.full((height, width), value, dtype=np.uint8)
        return LumaFrame(width=width, height=height, data=data,
                         frame_index=frame_index)

    return build


def plant_edge_map(height, width, polylines):
    """Build a BandingEdgeMap directly from pixel coordinate lists.

    Each polyline is a list of (y, x) pixels forming one labeled edge;
    labels are assigned in order starting at 1.
    """
    label_image = np.zeros((height, width), dtype=np.int32)
    edges = []
    for label, pixels in enumerate(polylines, start=1):
        arr = np.array(pixels, dtype=np.int64)
        label_image[arr[:, 0], arr[:, 1]] = label
        edges.append(BandingEdge(label=label, pixels=arr, closed=False))
    return BandingEdgeMap(
        width=width, height=height, edges=edges, label_image=label_image
    )
