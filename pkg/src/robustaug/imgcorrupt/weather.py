"""Weather-family corruptions: snow, frost, fog.

Frost and fog textures are generated procedurally from the seed (no shipped
photographs), so outputs are fully determined by (image, params, seed).
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidSpecError
from ..seeds import rng_from_seed
from ._filters import central_zoom, conv2d_replicate, gaussian_replicate, line_kernel
from .image import clamp01


def plasma_fractal(size, roughness_decay, rng):
    """Diamond-square heightmap on a ``size`` x ``size`` grid (power of two),
    normalized to [0, 1]."""
    if size & (size - 1) != 0:
        raise InvalidSpecError(f"plasma size must be a power of two, got {size}")
    grid = np.zeros((size, size))
    step = size
    wibble = 100.0

    def wibbled(values):
        return values / 4.0 + wibble * rng.uniform(-wibble, wibble, values.shape)

    while step >= 2:
        half = step // 2
        corners = grid[0:size:step, 0:size:step]
        acc = corners + np.roll(corners, -1, axis=0)
        acc = acc + np.roll(acc, -1, axis=1)
        grid[half:size:step, half:size:step] = wibbled(acc)

        centers = grid[half:size:step, half:size:step]
        corners = grid[0:size:step, 0:size:step]
        left_up = centers + np.roll(centers, 1, axis=0)
        right_up = corners + np.roll(corners, -1, axis=1)
        grid[0:size:step, half:size:step] = wibbled(left_up + right_up)
        top_down = centers + np.roll(centers, 1, axis=1)
        bottom_down = corners + np.roll(corners, -1, axis=0)
        grid[half:size:step, 0:size:step] = wibbled(top_down + bottom_down)

        step //= 2
        wibble /= roughness_decay

    grid -= grid.min()
    peak = grid.max()
    return grid / peak if peak > 0 else grid


def _next_pow2(n):
    p = 1
    while p < n:
        p *= 2
    return p


def fog(image, weight, roughness_decay, rng):
    if weight < 0:
        raise InvalidSpecError(f"fog weight must be >= 0, got {weight}")
    if weight == 0:
        return image.copy()
    h, w = image.shape[:2]
    size = _next_pow2(max(h, w))
    haze = plasma_fractal(size, roughness_decay, rng)[:h, :w]
    return clamp01(image + weight * haze[:, :, None])


def snow(image, density, threshold, streak_length, intensity, rng):
    # bright streak layer: thresholded noise, zoomed, motion-blurred along a
    # random direction, then added in both orientations
    h, w = image.shape[:2]
    layer = rng.normal(density, 0.3, (h, w))
    layer = central_zoom(layer, 1.5)
    layer[layer < threshold] = 0.0
    angle = rng.uniform(-135.0, -45.0)
    kernel = line_kernel(int(streak_length), angle)
    pad = max(kernel.shape) // 2
    if pad <= min(h, w) // 2:
        layer = conv2d_replicate(layer, kernel)
    streaks = intensity * np.clip(layer, 0.0, 1.0)
    return clamp01(image + streaks[:, :, None] + streaks[::-1, ::-1][:, :, None])


def frost_texture(h, w, rng):
    """Procedural crystalline frost: multi-octave smoothed noise with a
    ridge transform, thresholded into bright veins on a pale bed."""
    field = np.zeros((h, w))
    amplitude = 1.0
    sigma = max(h, w) / 8.0
    total = 0.0
    for _ in range(5):
        field += amplitude * gaussian_replicate(rng.normal(0.0, 1.0, (h, w)), sigma)
        total += amplitude
        amplitude /= 2.0
        sigma = max(sigma / 2.0, 0.6)
    field -= field.min()
    peak = field.max()
    if peak > 0:
        field /= peak
    ridges = 1.0 - np.abs(2.0 * field - 1.0)
    crystals = np.maximum(ridges - 0.55, 0.0) / 0.45
    return np.clip(0.55 + 0.45 * crystals**1.5, 0.0, 1.0)


def frost(image, image_weight, frost_weight, rng):
    h, w = image.shape[:2]
    texture = frost_texture(h, w, rng)
    return clamp01(image_weight * image + frost_weight * texture[:, :, None])


_DISPATCH = {
    "snow": lambda img, p, rng: snow(
        img, p["density"], p["threshold"], p["streak_length"], p["intensity"], rng
    ),
    "frost": lambda img, p, rng: frost(img, p["image_weight"], p["frost_weight"], rng),
    "fog": lambda img, p, rng: fog(img, p["weight"], p["roughness_decay"], rng),
}


def weather_family(image, kind, params, seed):
    """Apply one weather-family corruption with the given parameters."""
    if kind not in _DISPATCH:
        raise InvalidSpecError(f"{kind!r} is not a weather-family kind")
    return _DISPATCH[kind](image, params, rng_from_seed(seed))
