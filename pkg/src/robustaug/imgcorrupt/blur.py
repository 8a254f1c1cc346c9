"""Blur-family corruptions.

Kinds: defocus_blur, glass_blur, motion_blur, zoom_blur, gaussian_blur,
average_blur, median_blur. Linear blurs use normalized kernels and edge
replication, so constant images pass through unchanged.
"""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..errors import InvalidSpecError
from ..seeds import rng_from_seed
from ._filters import central_zoom, conv2d_replicate, disk_kernel, gaussian_replicate, line_kernel
from .image import clamp01


def defocus_blur(image, radius):
    if radius <= 0:
        raise InvalidSpecError(f"defocus_blur radius must be > 0, got {radius}")
    return clamp01(conv2d_replicate(image, disk_kernel(radius)))


def glass_blur(image, sigma, max_delta, iterations, rng):
    # local random displacement (gather) between two smoothing passes
    h, w = image.shape[:2]
    out = gaussian_replicate(image, sigma)
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    for _ in range(int(iterations)):
        dy = rng.integers(-max_delta, max_delta + 1, (h, w))
        dx = rng.integers(-max_delta, max_delta + 1, (h, w))
        yy = np.clip(rows + dy, 0, h - 1)
        xx = np.clip(cols + dx, 0, w - 1)
        out = out[yy, xx]
    return clamp01(gaussian_replicate(out, sigma))


def motion_blur(image, length, rng):
    length = int(length)
    if length < 1:
        raise InvalidSpecError(f"motion_blur length must be >= 1, got {length}")
    if length == 1:
        return image.copy()
    angle = rng.uniform(-45.0, 45.0)
    return clamp01(conv2d_replicate(image, line_kernel(length, angle)))


def zoom_blur(image, max_zoom, step):
    if max_zoom < 1.0 or step <= 0:
        raise InvalidSpecError(f"zoom_blur needs max_zoom >= 1 and step > 0, got {max_zoom}, {step}")
    scales = np.arange(1.0, max_zoom + 1e-9, step)
    acc = np.zeros_like(image)
    for scale in scales:
        acc += image if scale == 1.0 else central_zoom(image, float(scale))
    return clamp01(acc / len(scales))


def gaussian_blur(image, sigma):
    if sigma <= 0:
        raise InvalidSpecError(f"gaussian_blur sigma must be > 0, got {sigma}")
    return clamp01(gaussian_replicate(image, sigma))


def average_blur(image, size):
    size = int(size)
    if size < 1 or size % 2 == 0:
        raise InvalidSpecError(f"average_blur size must be odd and >= 1, got {size}")
    if size == 1:
        return image.copy()
    if size // 2 > min(image.shape[:2]) // 2:
        raise InvalidSpecError(f"average_blur size {size} too large for image {image.shape[:2]}")
    return clamp01(ndimage.uniform_filter(image, (size, size, 1), mode="nearest"))


def median_blur(image, size):
    size = int(size)
    if size < 1 or size % 2 == 0:
        raise InvalidSpecError(f"median_blur size must be odd and >= 1, got {size}")
    if size == 1:
        return image.copy()
    if size // 2 > min(image.shape[:2]) // 2:
        raise InvalidSpecError(f"median_blur size {size} too large for image {image.shape[:2]}")
    return ndimage.median_filter(image, size=(size, size, 1), mode="nearest")


_DISPATCH = {
    "defocus_blur": lambda img, p, rng: defocus_blur(img, p["radius"]),
    "glass_blur": lambda img, p, rng: glass_blur(img, p["sigma"], p["max_delta"], p["iterations"], rng),
    "motion_blur": lambda img, p, rng: motion_blur(img, p["length"], rng),
    "zoom_blur": lambda img, p, rng: zoom_blur(img, p["max_zoom"], p["step"]),
    "gaussian_blur": lambda img, p, rng: gaussian_blur(img, p["sigma"]),
    "average_blur": lambda img, p, rng: average_blur(img, p["size"]),
    "median_blur": lambda img, p, rng: median_blur(img, p["size"]),
}


def blur_family(image, kind, params, seed):
    """Apply one blur-family corruption with the given parameters."""
    if kind not in _DISPATCH:
        raise InvalidSpecError(f"{kind!r} is not a blur-family kind")
    return _DISPATCH[kind](image, params, rng_from_seed(seed))
