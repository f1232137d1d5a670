"""Independent scalar reference implementations used to check the package.

Everything here is written as plain per-pixel loops over python floats,
deliberately sharing no code with the library: slow, obvious, and easy to
audit.  Tests compare the vectorized implementations against these.
"""

from __future__ import annotations

import functools
import math

import numpy as np


@functools.lru_cache(maxsize=8)
def gaussian_kernel_ref(half_height, half_width, sigma):
    """Unit-sum Gaussian weights as a nested list."""
    rows = []
    total = 0.0
    for dy in range(-half_height, half_height + 1):
        row = []
        for dx in range(-half_width, half_width + 1):
            w = math.exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma))
            row.append(w)
            total += w
        rows.append(row)
    return [[w / total for w in row] for row in rows]


def _clamp(value, low, high):
    return max(low, min(high, value))


def local_mean_std_ref(image, y, x, half_height, half_width, sigma):
    """Gaussian-weighted mean and deviation of one window, replicate borders.

    Accumulates taps in row-major order with a separate deviation pass,
    mirroring the definition rather than any particular optimization.
    """
    height, width = image.shape
    kernel = gaussian_kernel_ref(half_height, half_width, sigma)
    mu = 0.0
    for dy in range(-half_height, half_height + 1):
        for dx in range(-half_width, half_width + 1):
            sy = _clamp(y + dy, 0, height - 1)
            sx = _clamp(x + dx, 0, width - 1)
            mu += kernel[dy + half_height][dx + half_width] * float(image[sy, sx])
    var = 0.0
    for dy in range(-half_height, half_height + 1):
        for dx in range(-half_width, half_width + 1):
            sy = _clamp(y + dy, 0, height - 1)
            sx = _clamp(x + dx, 0, width - 1)
            d = float(image[sy, sx]) - mu
            var += kernel[dy + half_height][dx + half_width] * (d * d)
    return mu, math.sqrt(var)


def local_activity_ref(image, y, x, half_height, half_width, sigma, cache=None):
    """Plain window mean of the deviation field around (y, x)."""
    height, width = image.shape
    if cache is None:
        cache = {}
    total = 0.0
    count = 0
    for dy in range(-half_height, half_height + 1):
        for dx in range(-half_width, half_width + 1):
            sy = _clamp(y + dy, 0, height - 1)
            sx = _clamp(x + dx, 0, width - 1)
            if (sy, sx) not in cache:
                cache[(sy, sx)] = local_mean_std_ref(
                    image, sy, sx, half_height, half_width, sigma
                )[1]
            total += cache[(sy, sx)]
            count += 1
    return total / count


def luminance_weight_ref(mu, alpha, beta, mu0):
    if mu <= mu0:
        return 1.0
    return max(0.0, 1.0 - alpha * (mu - mu0) ** beta)


def texture_weight_ref(lam, gamma, lambda0):
    if lam <= lambda0:
        return 1.0
    return (1.0 + (lam - lambda0)) ** (-gamma)


def cardinality_weight_ref(length, width, height, c0, eta):
    if length <= c0:
        return 0.0
    return (length / math.sqrt(width * height)) ** eta


def bvm_ref(image, label_image, edge_lengths, magnitude, params,
            half_height=4, half_width=4, sigma=1.5):
    """Scalar banding visibility map over a planted edge-label image.

    edge_lengths maps label -> pixel count of that edge.  Returns a float
    array matching the image shape, zero off the labeled pixels.
    """
    height, width = image.shape
    out = np.zeros((height, width), dtype=np.float64)
    sigma_cache = {}
    for y in range(height):
        for x in range(width):
            label = int(label_image[y, x])
            if label == 0:
                continue
            mu, _ = local_mean_std_ref(image, y, x, half_height, half_width, sigma)
            lam = local_activity_ref(
                image, y, x, half_height, half_width, sigma, sigma_cache
            )
            w_l = luminance_weight_ref(mu, params.alpha, params.beta, params.mu0)
            w_t = texture_weight_ref(lam, params.gamma, params.lambda0)
            w_c = cardinality_weight_ref(
                edge_lengths[label], width, height, params.c0, params.eta
            )
            out[y, x] = w_l * w_t * w_c * float(magnitude[y, x])
    return out


def pool_ref(values, percentile):
    """Sort-based worst-percentile mean over the nonzero entries."""
    nonzero = sorted(
        (float(v) for v in np.asarray(values).ravel() if v > 0), reverse=True
    )
    if not nonzero:
        return 0.0
    keep = math.ceil(percentile / 100.0 * len(nonzero))
    return math.fsum(nonzero[:keep]) / keep


def guided_filter_ref(image, radius, epsilon):
    """Self-guided filter by direct per-window evaluation, clipped borders."""
    height, width = image.shape
    a = np.zeros((height, width), dtype=np.float64)
    b = np.zeros((height, width), dtype=np.float64)
    for y in range(height):
        for x in range(width):
            y0, y1 = max(0, y - radius), min(height, y + radius + 1)
            x0, x1 = max(0, x - radius), min(width, x + radius + 1)
            window = [
                float(image[sy, sx])
                for sy in range(y0, y1)
                for sx in range(x0, x1)
            ]
            n = len(window)
            mean = math.fsum(window) / n
            var = math.fsum((v - mean) ** 2 for v in window) / n
            a[y, x] = var / (var + epsilon)
            b[y, x] = (1.0 - a[y, x]) * mean
    out = np.zeros((height, width), dtype=np.float64)
    for y in range(height):
        for x in range(width):
            y0, y1 = max(0, y - radius), min(height, y + radius + 1)
            x0, x1 = max(0, x - radius), min(width, x + radius + 1)
            n = (y1 - y0) * (x1 - x0)
            mean_a = math.fsum(
                a[sy, sx] for sy in range(y0, y1) for sx in range(x0, x1)
            ) / n
            mean_b = math.fsum(
                b[sy, sx] for sy in range(y0, y1) for sx in range(x0, x1)
            ) / n
            out[y, x] = min(255.0, max(0.0, mean_a * float(image[y, x]) + mean_b))
    return out


_SOBEL_X_REF = ((-1, 0, 1), (-2, 0, 2), (-1, 0, 1))
_SOBEL_Y_REF = ((-1, -2, -1), (0, 0, 0), (1, 2, 1))


def sobel_ref(image):
    """Scalar Sobel magnitude and orientation with replicate borders."""
    height, width = image.shape
    magnitude = np.zeros((height, width), dtype=np.float64)
    orientation = np.zeros((height, width), dtype=np.float64)
    for y in range(height):
        for x in range(width):
            gx = 0.0
            gy = 0.0
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    sy = _clamp(y + dy, 0, height - 1)
                    sx = _clamp(x + dx, 0, width - 1)
                    value = float(image[sy, sx])
                    gx += _SOBEL_X_REF[dy + 1][dx + 1] * value
                    gy += _SOBEL_Y_REF[dy + 1][dx + 1] * value
            magnitude[y, x] = math.hypot(gx, gy)
            orientation[y, x] = math.atan2(gy, gx)
    return magnitude, orientation


def nms_ref(magnitude, orientation, keep_mask):
    """Directional thinning by explicit neighbor comparison.

    The gradient orientation is folded to [0, pi) and snapped to one of
    four directions; a masked pixel survives when its magnitude is at
    least that of both neighbors along the snapped direction (replicate
    borders).
    """
    height, width = magnitude.shape
    steps = {
        0: ((0, 1), (0, -1)),
        1: ((1, 1), (-1, -1)),
        2: ((1, 0), (-1, 0)),
        3: ((1, -1), (-1, 1)),
    }
    out = np.zeros((height, width), dtype=bool)
    for y in range(height):
        for x in range(width):
            if not keep_mask[y, x]:
                continue
            angle = orientation[y, x] % math.pi
            direction = int((angle + math.pi / 8) // (math.pi / 4)) % 4
            ok = True
            for dy, dx in steps[direction]:
                sy = _clamp(y + dy, 0, height - 1)
                sx = _clamp(x + dx, 0, width - 1)
                if magnitude[y, x] < magnitude[sy, sx]:
                    ok = False
            out[y, x] = ok
    return out


def count_components_ref(mask):
    """Number of 8-connected components of a boolean mask, by flood fill."""
    height, width = mask.shape
    seen = np.zeros((height, width), dtype=bool)
    count = 0
    for y in range(height):
        for x in range(width):
            if not mask[y, x] or seen[y, x]:
                continue
            count += 1
            stack = [(y, x)]
            seen[y, x] = True
            while stack:
                cy, cx = stack.pop()
                for dy in (-1, 0, 1):
                    for dx in (-1, 0, 1):
                        ny, nx = cy + dy, cx + dx
                        if 0 <= ny < height and 0 <= nx < width:
                            if mask[ny, nx] and not seen[ny, nx]:
                                seen[ny, nx] = True
                                stack.append((ny, nx))
    return count


def rank_ref(values):
    """Average ranks (1-based, ties averaged) by direct comparison."""
    n = len(values)
    ranks = []
    for i in range(n):
        less = sum(1 for j in range(n) if values[j] < values[i])
        equal = sum(1 for j in range(n) if values[j] == values[i])
        ranks.append(less + (equal + 1) / 2.0)
    return ranks


def pearson_ref(xs, ys):
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)


def spearman_ref(xs, ys):
    return pearson_ref(rank_ref(xs), rank_ref(ys))


def kendall_b_ref(xs, ys):
    """Tie-adjusted Kendall tau by O(n^2) pair counting."""
    n = len(xs)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif dx * dy > 0:
                concordant += 1
            else:
                discordant += 1
    pairs = n * (n - 1) / 2
    denom = math.sqrt((pairs - ties_x) * (pairs - ties_y))
    return (concordant - discordant) / denom


def rmse_ref(xs, ys):
    n = len(xs)
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(xs, ys)) / n)


def logistic_ref(beta1, beta2, beta3, beta4, x):
    return beta2 + (beta1 - beta2) / (1.0 + math.exp(-(x - beta3) / abs(beta4)))
