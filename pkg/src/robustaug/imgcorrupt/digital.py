"""Digital-family corruptions: elastic, pixelate, jpeg_compression."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from ..errors import InvalidSpecError
from ..seeds import rng_from_seed
from . import jpeg
from ._filters import box_downsample, gaussian_replicate, nearest_upsample
from .image import clamp01


def elastic(image, alpha, smooth_sigma, rng):
    if alpha < 0:
        raise InvalidSpecError(f"elastic alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return image.copy()
    h, w = image.shape[:2]
    # draw order is fixed: dx then dy
    dx = gaussian_replicate(rng.uniform(-1.0, 1.0, (h, w)), smooth_sigma) * alpha
    dy = gaussian_replicate(rng.uniform(-1.0, 1.0, (h, w)), smooth_sigma) * alpha
    rows, cols = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    coords = [rows + dy, cols + dx]
    out = np.empty_like(image)
    for c in range(image.shape[2]):
        out[:, :, c] = ndimage.map_coordinates(image[:, :, c], coords, order=1, mode="nearest")
    return clamp01(out)


def pixelate(image, factor):
    factor = int(factor)
    if factor < 1:
        raise InvalidSpecError(f"pixelate factor must be >= 1, got {factor}")
    if factor == 1:
        return image.copy()
    h, w = image.shape[:2]
    blocks = box_downsample(image, factor)
    return nearest_upsample(blocks, factor, h, w)


def jpeg_compression(image, quality):
    return jpeg.transcode(image, quality)


_DISPATCH = {
    "elastic": lambda img, p, rng: elastic(img, p["alpha"], p["smooth_sigma"], rng),
    "pixelate": lambda img, p, rng: pixelate(img, p["factor"]),
    "jpeg_compression": lambda img, p, rng: jpeg_compression(img, p["quality"]),
}


def digital_family(image, kind, params, seed):
    """Apply one digital-family corruption with the given parameters."""
    if kind not in _DISPATCH:
        raise InvalidSpecError(f"{kind!r} is not a digital-family kind")
    return _DISPATCH[kind](image, params, rng_from_seed(seed))
