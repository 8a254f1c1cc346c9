"""Shared low-level raster helpers for the corruption operators.

All convolution-style helpers replicate edges, which preserves constant
fields and keeps boundary handling identical across families.
"""

from __future__ import annotations

import cv2
import numpy as np

from ..errors import InvalidSpecError


def conv2d_replicate(image, kernel):
    """2-D convolution applied per channel with edge replication."""
    kernel = np.ascontiguousarray(kernel, dtype=np.float64)
    if kernel.shape == (1, 1):
        return image * float(kernel[0, 0])
    radius = max(kernel.shape) // 2
    h = image.shape[0]
    w = image.shape[1]
    if radius > min(h, w) // 2:
        raise InvalidSpecError(f"kernel radius {radius} exceeds min(H, W)/2 = {min(h, w) // 2}")
    # filter2D correlates; flip to convolve (all our kernels are symmetric
    # under this for lines/disks, but keep the semantics honest).
    return cv2.filter2D(image, -1, kernel[::-1, ::-1], borderType=cv2.BORDER_REPLICATE)


def gaussian_replicate(image, sigma):
    from scipy import ndimage

    if sigma <= 0:
        return image.copy()
    if image.ndim == 3:
        return ndimage.gaussian_filter(image, (sigma, sigma, 0), mode="nearest")
    return ndimage.gaussian_filter(image, sigma, mode="nearest")


def resize_bilinear(image, out_h, out_w):
    return cv2.resize(image, (out_w, out_h), interpolation=cv2.INTER_LINEAR)


def central_zoom(image, factor):
    """Scale about the image center by ``factor`` >= 1, keeping the shape."""
    if factor == 1.0:
        return image.copy()
    h, w = image.shape[:2]
    ch = int(np.ceil(h / factor))
    cw = int(np.ceil(w / factor))
    top = (h - ch) // 2
    left = (w - cw) // 2
    crop = image[top : top + ch, left : left + cw]
    return resize_bilinear(crop, h, w)


def disk_kernel(radius):
    """Normalized anti-aliased disk (4x supersampled coverage)."""
    r_int = int(np.ceil(radius))
    span = np.arange(-r_int, r_int + 1)
    sub = (np.arange(4) + 0.5) / 4.0 - 0.5
    ys = (span[:, None] + sub[None, :]).ravel()
    xs = ys
    inside = (ys[:, None] ** 2 + xs[None, :] ** 2) <= radius**2
    coverage = inside.reshape(len(span), 4, len(span), 4).mean(axis=(1, 3))
    total = coverage.sum()
    if total <= 0:
        coverage = np.zeros((1, 1))
        coverage[0, 0] = 1.0
        return coverage
    return coverage / total


def line_kernel(length, angle_deg):
    """Normalized 1-pixel-wide line of ``length`` samples through the center."""
    length = int(length)
    if length <= 1:
        return np.ones((1, 1))
    theta = np.deg2rad(angle_deg)
    half = (length - 1) / 2.0
    ts = np.linspace(-half, half, length)
    rows = np.rint(ts * np.sin(theta)).astype(int)
    cols = np.rint(ts * np.cos(theta)).astype(int)
    r = int(max(np.abs(rows).max(), np.abs(cols).max(), 0))
    size = 2 * r + 1
    kernel = np.zeros((size, size))
    kernel[rows + r, cols + r] += 1.0
    return kernel / kernel.sum()


def box_downsample(image, factor):
    """Block mean over ``factor``-sized tiles; partial edge tiles use their own mean."""
    h, w = image.shape[:2]
    row_bounds = np.arange(0, h, factor)
    col_bounds = np.arange(0, w, factor)
    row_sizes = np.diff(np.append(row_bounds, h)).astype(np.float64)
    col_sizes = np.diff(np.append(col_bounds, w)).astype(np.float64)
    sums = np.add.reduceat(image, row_bounds, axis=0)
    sums = np.add.reduceat(sums, col_bounds, axis=1)
    if image.ndim == 3:
        return sums / (row_sizes[:, None, None] * col_sizes[None, :, None])
    return sums / (row_sizes[:, None] * col_sizes[None, :])


def nearest_upsample(blocks, factor, out_h, out_w):
    up = np.repeat(np.repeat(blocks, factor, axis=0), factor, axis=1)
    return up[:out_h, :out_w]
