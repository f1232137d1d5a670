"""Banding visibility: local statistics, masking curves, and the BVM.

Visibility of a banding edge pixel is its gradient magnitude attenuated by
three masking effects measured on the original (un-smoothed) frame: local
mean luminance, local texture activity, and the size of the edge it belongs
to.  The result is the per-pixel banding visibility map (BVM).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .config import MaskingParams
from .edges import BandingEdgeMap
from .preprocess import GradientField
from .video_io import LumaFrame


@dataclass
class LocalStats:
    """Gaussian-weighted window statistics around banding edge pixels.

    mu and sigma are defined wherever they were computed (the edge pixels
    and everything their windows cover); lam is the plain window mean of
    sigma and is meaningful at edge pixels.  All three are (H, W) float64
    arrays, zero where not computed.
    """

    mu: np.ndarray
    sigma: np.ndarray
    lam: np.ndarray
    half_height: int
    half_width: int
    weights: np.ndarray


@dataclass
class BandingVisibilityMap:
    """Per-pixel banding visibility, zero off the edge map."""

    width: int
    height: int
    values: np.ndarray


def gaussian_weights(half_height: int, half_width: int, sigma: float) -> np.ndarray:
    """Unit-sum isotropic Gaussian weights on a (2K+1, 2L+1) grid."""
    if half_height < 1 or half_width < 1:
        raise ValueError("window half-sizes must be >= 1")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    ky = np.arange(-half_height, half_height + 1, dtype=np.float64)
    kx = np.arange(-half_width, half_width + 1, dtype=np.float64)
    grid = np.exp(-(ky[:, None] ** 2 + kx[None, :] ** 2) / (2.0 * sigma * sigma))
    return grid / grid.sum()


def local_stats(
    frame: LumaFrame,
    bem: BandingEdgeMap,
    half_height: int = 4,
    half_width: int = 4,
    gaussian_sigma: float = 1.5,
) -> LocalStats:
    """Windowed mean, deviation and texture level around edge pixels.

    For every pixel a banding-edge window can reach, computes the Gaussian
    weighted mean mu and the weighted standard deviation sigma of the
    original frame (replicate padding at borders).  lam at an edge pixel is
    the unweighted mean of sigma over the same window, a measure of how
    busy the pixel's neighborhood is.

    sigma is accumulated directly as the weighted sum of squared deviations
    rather than via the mean-of-squares shortcut, which loses several
    digits in flat regions.

    Raises:
        ValueError: If frame and edge-map geometry disagree.
    """
    if (bem.height, bem.width) != (frame.height, frame.width):
        raise ValueError(
            f"edge map geometry {bem.height}x{bem.width} does not match "
            f"frame {frame.height}x{frame.width}"
        )
    weights = gaussian_weights(half_height, half_width, gaussian_sigma)
    shape = (frame.height, frame.width)
    mu = np.zeros(shape, dtype=np.float64)
    sigma = np.zeros(shape, dtype=np.float64)
    lam = np.zeros(shape, dtype=np.float64)
    stats = LocalStats(
        mu=mu,
        sigma=sigma,
        lam=lam,
        half_height=half_height,
        half_width=half_width,
        weights=weights,
    )
    edge_mask = bem.mask()
    if not edge_mask.any():
        return stats

    window_shape = (2 * half_height + 1, 2 * half_width + 1)
    support = ndimage.maximum_filter(edge_mask, size=window_shape, mode="constant")
    ys, xs = np.nonzero(support)
    padded = np.pad(
        frame.as_float(), ((half_height, half_height), (half_width, half_width)),
        mode="edge",
    )
    # Two accumulation passes over the window taps on flat indices: the
    # first builds mu, the second sums squared deviations from it.  Tap
    # order is row-major, so each pixel sees the same operation sequence a
    # per-pixel reference loop would.
    flat = padded.ravel()
    pad_width = padded.shape[1]
    base = ys.astype(np.intp) * pad_width + xs.astype(np.intp)
    taps = [
        (weights[dy, dx], dy * pad_width + dx)
        for dy in range(window_shape[0])
        for dx in range(window_shape[1])
    ]
    mu_support = np.zeros(len(ys), dtype=np.float64)
    for weight, shift in taps:
        mu_support += weight * flat[base + shift]
    var_support = np.zeros(len(ys), dtype=np.float64)
    for weight, shift in taps:
        deviation = flat[base + shift] - mu_support
        var_support += weight * (deviation * deviation)
    mu[ys, xs] = mu_support
    sigma[ys, xs] = np.sqrt(var_support)

    # Plain box mean of sigma over the same window, replicate-padded; the
    # separable two-pass sum keeps every addend non-negative.
    sigma_padded = np.pad(
        sigma, ((half_height, half_height), (half_width, half_width)), mode="edge"
    )
    rows = np.zeros_like(sigma_padded)
    for dx in range(window_shape[1]):
        rows[:, :shape[1]] += sigma_padded[:, dx:dx + shape[1]]
    for dy in range(window_shape[0]):
        lam += rows[dy:dy + shape[0], :shape[1]]
    lam /= window_shape[0] * window_shape[1]
    lam[~support] = 0.0
    return stats


def luminance_weight(mu, params: MaskingParams):
    """Visibility attenuation from local mean luminance.

    Dim surroundings leave banding fully visible; above the knee the weight
    falls off quadratically (by default) and clamps at zero.  Accepts
    scalars or arrays.
    """
    mu_arr = np.asarray(mu, dtype=np.float64)
    above = np.maximum(mu_arr - params.mu0, 0.0)
    weight = np.maximum(1.0 - params.alpha * above**params.beta, 0.0)
    if np.isscalar(mu) or mu_arr.ndim == 0:
        return float(weight)
    return weight


def texture_weight(lam, params: MaskingParams):
    """Visibility attenuation from local texture activity.

    Quiet neighborhoods (lam at or below the threshold) do not mask at
    all; activity above it suppresses visibility polynomially.
    """
    lam_arr = np.asarray(lam, dtype=np.float64)
    above = np.maximum(lam_arr - params.lambda0, 0.0)
    weight = (1.0 + above) ** (-params.gamma)
    if np.isscalar(lam) or lam_arr.ndim == 0:
        return float(weight)
    return weight


def cardinality_weight(
    edge_length: int, frame_width: int, frame_height: int, params: MaskingParams
) -> float:
    """Visibility boost for long edges, zero for negligible ones.

    Edges of at most c0 pixels are treated as invisible; longer ones are
    weighted by their length relative to the frame diagonal scale
    sqrt(width * height).
    """
    if frame_width < 1 or frame_height < 1:
        raise ValueError(f"invalid geometry {frame_width}x{frame_height}")
    if edge_length <= params.c0:
        return 0.0
    return float(
        (edge_length / math.sqrt(frame_width * frame_height)) ** params.eta
    )


def build_bvm(
    frame: LumaFrame,
    bem: BandingEdgeMap,
    grad: GradientField,
    masking: MaskingParams,
    half_height: int = 4,
    half_width: int = 4,
    gaussian_sigma: float = 1.5,
) -> BandingVisibilityMap:
    """Assemble the banding visibility map.

    Each edge pixel's visibility is the product of its luminance, texture
    and cardinality weights with its gradient magnitude; all other pixels
    are zero.

    Args:
        frame: Original (un-smoothed) frame, used for the local statistics.
        bem: Banding edge map of the same geometry.
        grad: Gradient field supplying the magnitude term.
        masking: Transfer-function constants.
        half_height: Local-statistics window half-height.
        half_width: Local-statistics window half-width.
        gaussian_sigma: Gaussian spread of the window weights.

    Raises:
        ValueError: On any geometry mismatch between the inputs.
    """
    if (grad.height, grad.width) != (frame.height, frame.width):
        raise ValueError(
            f"gradient geometry {grad.height}x{grad.width} does not match "
            f"frame {frame.height}x{frame.width}"
        )
    values = np.zeros((frame.height, frame.width), dtype=np.float64)
    bvm = BandingVisibilityMap(width=frame.width, height=frame.height, values=values)
    if not bem.edges:
        return bvm
    stats = local_stats(frame, bem, half_height, half_width, gaussian_sigma)
    edge_mask = bem.mask()
    ys, xs = np.nonzero(edge_mask)
    length_of = np.zeros(max(e.label for e in bem.edges) + 1, dtype=np.float64)
    for edge in bem.edges:
        length_of[edge.label] = cardinality_weight(
            edge.length, frame.width, frame.height, masking
        )
    w_lum = luminance_weight(stats.mu[ys, xs], masking)
    w_tex = texture_weight(stats.lam[ys, xs], masking)
    w_card = length_of[bem.label_image[ys, xs]]
    values[ys, xs] = w_lum * w_tex * w_card * grad.magnitude[ys, xs]
    return bvm
