"""Banding edge extraction.

Turns a gradient field into a banding edge map (BEM) in six steps: classify
pixels by gradient magnitude, demote candidates that touch texture, thin the
survivors to ridge lines, bridge small gaps between fragments, then link,
denoise and label the remaining components as traced edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from .preprocess import GradientField


class PixelClass(IntEnum):
    """Role of a pixel in banding detection."""

    FLAT = 0
    CANDIDATE = 1  # candidate banding pixel (CBP)
    TEXTURE = 2


@dataclass
class PixelClassMap:
    """Per-pixel classification labels as a (H, W) uint8 array."""

    labels: np.ndarray

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    def candidate_mask(self) -> np.ndarray:
        return self.labels == PixelClass.CANDIDATE

    def texture_mask(self) -> np.ndarray:
        return self.labels == PixelClass.TEXTURE


@dataclass
class BandingEdge:
    """One traced banding edge.

    Attributes:
        label: Positive component label, matching the BEM label image.
        pixels: (N, 2) int array of (row, col) coordinates in trace order;
            consecutive entries are 8-neighbors along the walk.
        closed: True when the component has no endpoint, i.e. it is a loop.
    """

    label: int
    pixels: np.ndarray
    closed: bool

    @property
    def length(self) -> int:
        return len(self.pixels)


@dataclass
class BandingEdgeMap:
    """All banding edges of one frame plus a label image.

    label_image holds 0 for background and the edge label elsewhere; every
    labelled pixel belongs to exactly one edge.
    """

    width: int
    height: int
    edges: list[BandingEdge]
    label_image: np.ndarray

    @property
    def pixel_count(self) -> int:
        return int(np.count_nonzero(self.label_image))

    def mask(self) -> np.ndarray:
        return self.label_image > 0


def classify_pixels(grad: GradientField, t1: float, t2: float) -> PixelClassMap:
    """Split pixels into Flat / candidate / Texture by gradient magnitude.

    Magnitudes in the closed band [t1, t2] are banding candidates; both
    boundary values count as candidates.

    Raises:
        ValueError: If the thresholds are not ordered 0 <= t1 < t2.
    """
    if not 0 <= t1 < t2:
        raise ValueError(f"thresholds must satisfy 0 <= t1 < t2, got {t1}, {t2}")
    labels = np.full(grad.magnitude.shape, PixelClass.FLAT, dtype=np.uint8)
    labels[grad.magnitude >= t1] = PixelClass.CANDIDATE
    labels[grad.magnitude > t2] = PixelClass.TEXTURE
    return PixelClassMap(labels=labels)


def uniformity_check(classes: PixelClassMap) -> PixelClassMap:
    """Demote candidates that touch texture in their 8-neighborhood.

    A banding edge separates two uniform regions; a candidate pixel next to
    texture is edge noise, not banding.  Demoted pixels become Flat.
    """
    texture = classes.texture_mask()
    padded = np.pad(texture, 1, mode="constant", constant_values=False)
    near_texture = np.zeros_like(texture)
    h, w = texture.shape
    for dy in range(3):
        for dx in range(3):
            if dy == 1 and dx == 1:
                continue
            near_texture |= padded[dy:dy + h, dx:dx + w]
    labels = classes.labels.copy()
    labels[classes.candidate_mask() & near_texture] = PixelClass.FLAT
    return PixelClassMap(labels=labels)


# Forward/backward neighbor offsets per quantized gradient direction bin.
_NMS_OFFSETS = {
    0: ((0, 1), (0, -1)),     # gradient ~horizontal: compare left/right
    1: ((1, 1), (-1, -1)),    # gradient ~down-right diagonal
    2: ((1, 0), (-1, 0)),     # gradient ~vertical: compare up/down
    3: ((1, -1), (-1, 1)),    # gradient ~down-left diagonal
}


def thin_edges(classes: PixelClassMap, grad: GradientField) -> PixelClassMap:
    """Non-maximum suppression of candidates along the gradient direction.

    The gradient orientation is quantized to 4 directions; a candidate
    survives only if its magnitude is >= both neighbors along that
    direction, so equal-magnitude ridges keep every tied pixel.  Border
    neighbors use replicate padding.
    """
    magnitude = grad.magnitude
    padded = np.pad(magnitude, 1, mode="edge")
    h, w = magnitude.shape
    angle = np.mod(grad.orientation, np.pi)
    bins = np.floor((angle + np.pi / 8) / (np.pi / 4)).astype(np.int64) % 4
    keep = np.zeros((h, w), dtype=bool)
    for direction, ((fy, fx), (by, bx)) in _NMS_OFFSETS.items():
        in_bin = bins == direction
        if not in_bin.any():
            continue
        forward = padded[1 + fy:1 + fy + h, 1 + fx:1 + fx + w]
        backward = padded[1 + by:1 + by + h, 1 + bx:1 + bx + w]
        keep |= in_bin & (magnitude >= forward) & (magnitude >= backward)
    labels = classes.labels.copy()
    labels[classes.candidate_mask() & ~keep] = PixelClass.FLAT
    return PixelClassMap(labels=labels)


def _bresenham(p0: tuple[int, int], p1: tuple[int, int]) -> list[tuple[int, int]]:
    """Integer line from p0 to p1 inclusive (rows, cols)."""
    y0, x0 = p0
    y1, x1 = p1
    points = []
    dy = abs(y1 - y0)
    dx = abs(x1 - x0)
    sy = 1 if y1 >= y0 else -1
    sx = 1 if x1 >= x0 else -1
    err = dx - dy
    y, x = y0, x0
    while True:
        points.append((y, x))
        if (y, x) == (y1, x1):
            break
        doubled = 2 * err
        if doubled > -dy:
            err -= dy
            x += sx
        if doubled < dx:
            err += dx
            y += sy
    return points


def fill_gaps(classes: PixelClassMap, blob_radius: int) -> PixelClassMap:
    """Bridge nearby candidate fragments with straight candidate segments.

    Every pair of candidate pixels from distinct connected components at
    Euclidean distance <= 2*blob_radius is joined by promoting the pixels
    of the Bresenham segment between them, unless the segment crosses a
    Texture pixel.  All pairs are evaluated against the original component
    structure, so the result is order-independent.
    """
    if blob_radius < 1:
        raise ValueError(f"blob_radius must be >= 1, got {blob_radius}")
    candidates = classes.candidate_mask()
    component_labels, count = ndimage.label(candidates, structure=np.ones((3, 3)))
    if count < 2:
        return PixelClassMap(labels=classes.labels.copy())
    coords = np.argwhere(candidates)
    tree = cKDTree(coords)
    pairs = tree.query_pairs(r=2.0 * blob_radius, output_type="ndarray")
    if len(pairs) == 0:
        return PixelClassMap(labels=classes.labels.copy())
    texture = classes.texture_mask()
    labels = classes.labels.copy()
    comp_of = component_labels[coords[:, 0], coords[:, 1]]
    cross = comp_of[pairs[:, 0]] != comp_of[pairs[:, 1]]
    for i, j in pairs[cross]:
        p0 = (int(coords[i, 0]), int(coords[i, 1]))
        p1 = (int(coords[j, 0]), int(coords[j, 1]))
        segment = _bresenham(p0, p1)[1:-1]
        if any(texture[y, x] for y, x in segment):
            continue
        for y, x in segment:
            labels[y, x] = PixelClass.CANDIDATE
    return PixelClassMap(labels=labels)


_TRACE_ORDER = ((0, 1), (1, 1), (1, 0), (1, -1), (0, -1), (-1, -1), (-1, 0), (-1, 1))


def _trace_component(pixels: list[tuple[int, int]]) -> tuple[np.ndarray, bool]:
    """Order a component's pixels into a walk; detect loops.

    Starts from an endpoint (a pixel with a single neighbor) when one
    exists; components without endpoints are closed and start from their
    first pixel in raster order.  The walk is a depth-first visit with a
    fixed neighbor priority, so it is deterministic.
    """
    pixel_set = set(pixels)
    degree = {}
    for y, x in pixels:
        degree[(y, x)] = sum(
            (y + dy, x + dx) in pixel_set for dy, dx in _TRACE_ORDER
        )
    endpoints = [p for p in pixels if degree[p] <= 1]
    closed = not endpoints
    start = endpoints[0] if endpoints else pixels[0]
    visited = {start}
    order = [start]
    stack = [start]
    while stack:
        y, x = stack[-1]
        advanced = False
        for dy, dx in _TRACE_ORDER:
            nxt = (y + dy, x + dx)
            if nxt in pixel_set and nxt not in visited:
                visited.add(nxt)
                order.append(nxt)
                stack.append(nxt)
                advanced = True
                break
        if not advanced:
            stack.pop()
    return np.array(order, dtype=np.int64), closed


def link_and_label(classes: PixelClassMap, min_length: int) -> BandingEdgeMap:
    """Group candidates into labelled edges and drop short noise.

    8-connected candidate components with at least min_length pixels become
    BandingEdge records, labelled 1..K in raster order of their first
    pixel; everything shorter is discarded as noise.
    """
    if min_length < 1:
        raise ValueError(f"min_length must be >= 1, got {min_length}")
    candidates = classes.candidate_mask()
    h, w = candidates.shape
    component_labels, count = ndimage.label(candidates, structure=np.ones((3, 3)))
    label_image = np.zeros((h, w), dtype=np.int32)
    edges: list[BandingEdge] = []
    if count:
        sizes = ndimage.sum_labels(
            np.ones_like(component_labels), component_labels, range(1, count + 1)
        )
        next_label = 1
        all_coords = np.argwhere(component_labels > 0)
        comp_ids = component_labels[all_coords[:, 0], all_coords[:, 1]]
        for comp in range(1, count + 1):
            if sizes[comp - 1] < min_length:
                continue
            coords = all_coords[comp_ids == comp]
            pixel_list = [(int(y), int(x)) for y, x in coords]
            chain, closed = _trace_component(pixel_list)
            label_image[chain[:, 0], chain[:, 1]] = next_label
            edges.append(BandingEdge(label=next_label, pixels=chain, closed=closed))
            next_label += 1
    return BandingEdgeMap(width=w, height=h, edges=edges, label_image=label_image)


def extract_edges(
    grad: GradientField,
    t1: float,
    t2: float,
    blob_radius: int,
    min_length: int,
) -> BandingEdgeMap:
    """Run the full six-step extraction on a gradient field."""
    classes = classify_pixels(grad, t1, t2)
    classes = uniformity_check(classes)
    classes = thin_edges(classes, grad)
    classes = fill_gaps(classes, blob_radius)
    return link_and_label(classes, min_length)
