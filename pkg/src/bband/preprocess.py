"""Pre-smoothing and gradient extraction.

The detector runs edge classification on a lightly smoothed copy of each
frame so that dither and compression noise do not masquerade as band edges,
while the banding steps themselves survive as shallow ramps.  Gradients come
from plain unnormalized 3x3 Sobel kernels with replicate border padding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .video_io import LumaFrame


@dataclass
class SmoothedFrame:
    """Float64 smoothed luma plane, clamped to [0, 255]."""

    width: int
    height: int
    data: np.ndarray


@dataclass
class GradientField:
    """Per-pixel gradient magnitude and orientation.

    Attributes:
        magnitude: (H, W) float64, L2 norm of the Sobel responses.
        orientation: (H, W) float64 angle of (gy, gx) in radians, in
            (-pi, pi], with y pointing down the rows.
    """

    magnitude: np.ndarray
    orientation: np.ndarray

    @property
    def height(self) -> int:
        return self.magnitude.shape[0]

    @property
    def width(self) -> int:
        return self.magnitude.shape[1]


def _box_sum(values: np.ndarray, radius: int) -> np.ndarray:
    """Sum of each (2r+1)^2 window clipped to the array bounds.

    Clipped-window sums equal zero-padded-window sums, so the padded
    integral image can be sampled with plain slicing.
    """
    h, w = values.shape
    padded = np.zeros((h + 2 * radius + 1, w + 2 * radius + 1), dtype=np.float64)
    padded[radius + 1:h + radius + 1, radius + 1:w + radius + 1] = values
    np.cumsum(padded, axis=0, out=padded)
    np.cumsum(padded, axis=1, out=padded)
    span = 2 * radius + 1
    return (
        padded[span:, span:]
        - padded[:h, span:]
        - padded[span:, :w]
        + padded[:h, :w]
    )


def _window_counts(height: int, width: int, radius: int) -> np.ndarray:
    rows = np.minimum(np.arange(height) + radius + 1, height) - np.maximum(
        np.arange(height) - radius, 0
    )
    cols = np.minimum(np.arange(width) + radius + 1, width) - np.maximum(
        np.arange(width) - radius, 0
    )
    return rows[:, None].astype(np.float64) * cols[None, :]


def guided_filter(frame: LumaFrame, radius: int, epsilon: float) -> SmoothedFrame:
    """Smooth a frame with itself as the guidance image.

    Each window fits a local linear model a*I + b with a = var/(var + eps);
    a pixel's output averages the models of every window covering it.  Flat
    regions collapse to their window means while windows whose variance
    dwarfs eps keep their content.

    Args:
        frame: Input luma plane.
        radius: Window half-size; the window is (2*radius+1) squared.
        epsilon: Variance regularizer, on the squared 0-255 intensity scale.

    Returns:
        SmoothedFrame with float64 data clamped to [0, 255].

    Raises:
        ValueError: If the frame is smaller than one filter window or the
            parameters are out of range.
    """
    if radius < 1:
        raise ValueError(f"radius must be >= 1, got {radius}")
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    window = 2 * radius + 1
    if frame.height < window or frame.width < window:
        raise ValueError(
            f"frame {frame.height}x{frame.width} is smaller than the "
            f"{window}x{window} filter window"
        )
    image = frame.as_float()
    counts = _window_counts(frame.height, frame.width, radius)
    mean = _box_sum(image, radius) / counts
    mean_sq = _box_sum(image * image, radius) / counts
    variance = np.maximum(mean_sq - mean * mean, 0.0)
    a = variance / (variance + epsilon)
    b = (1.0 - a) * mean
    mean_a = _box_sum(a, radius) / counts
    mean_b = _box_sum(b, radius) / counts
    smoothed = np.clip(mean_a * image + mean_b, 0.0, 255.0)
    return SmoothedFrame(width=frame.width, height=frame.height, data=smoothed)


_SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
_SOBEL_Y = np.array([[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]])


def sobel_gradient(data: np.ndarray) -> GradientField:
    """Unnormalized 3x3 Sobel gradient with replicate border padding.

    Args:
        data: (H, W) array; uint8 input is promoted to float64.

    Returns:
        GradientField of L2 magnitudes and atan2(gy, gx) orientations.
    """
    image = np.asarray(data, dtype=np.float64)
    if image.ndim != 2:
        raise ValueError(f"expected a 2-D plane, got shape {image.shape}")
    padded = np.pad(image, 1, mode="edge")
    gx = np.zeros_like(image)
    gy = np.zeros_like(image)
    for dy in range(3):
        for dx in range(3):
            cx = _SOBEL_X[dy, dx]
            cy = _SOBEL_Y[dy, dx]
            if cx == 0.0 and cy == 0.0:
                continue
            window = padded[dy:dy + image.shape[0], dx:dx + image.shape[1]]
            if cx != 0.0:
                gx += cx * window
            if cy != 0.0:
                gy += cy * window
    return GradientField(
        magnitude=np.hypot(gx, gy),
        orientation=np.arctan2(gy, gx),
    )
