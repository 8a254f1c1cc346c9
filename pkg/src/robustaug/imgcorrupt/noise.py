"""Noise-family corruptions: pixel-statistics perturbations.

Kinds: gaussian_noise, shot_noise, impulse_noise, speckle_noise, dropout,
spatter. All draw from the caller-provided seed only.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidSpecError
from ..seeds import rng_from_seed
from ._filters import gaussian_replicate
from .image import clamp01

# pale water tint added by spatter blobs
_SPATTER_COLOR = np.array([0.686, 0.933, 0.933])


def gaussian_noise(image, sigma, rng):
    if sigma < 0:
        raise InvalidSpecError(f"gaussian_noise sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return image.copy()
    return clamp01(image + rng.normal(0.0, sigma, image.shape))


def shot_noise(image, photons, rng):
    if photons <= 0:
        raise InvalidSpecError(f"shot_noise photons must be > 0, got {photons}")
    return clamp01(rng.poisson(image * photons) / photons)


def impulse_noise(image, rate, rng):
    # "pixel" means a (row, col) site: all three channels take the impulse
    # value, so the flipped-pixel fraction matches the configured rate.
    if not 0.0 <= rate <= 1.0:
        raise InvalidSpecError(f"impulse_noise rate must be in [0, 1], got {rate}")
    h, w = image.shape[:2]
    flip = rng.random((h, w)) < rate
    salt = rng.random((h, w)) < 0.5
    out = image.copy()
    out[flip] = np.where(salt[flip, None], 1.0, 0.0)
    return out


def speckle_noise(image, sigma, rng):
    if sigma < 0:
        raise InvalidSpecError(f"speckle_noise sigma must be >= 0, got {sigma}")
    if sigma == 0:
        return image.copy()
    return clamp01(image * (1.0 + rng.normal(0.0, sigma, image.shape)))


def dropout(image, rate, rng):
    if not 0.0 <= rate <= 1.0:
        raise InvalidSpecError(f"dropout rate must be in [0, 1], got {rate}")
    if rate == 0:
        return image.copy()
    h, w = image.shape[:2]
    mask = rng.random((h, w)) < rate
    out = image.copy()
    out[mask] = 0.0
    return out


def spatter(image, smooth_sigma, threshold, intensity, rng):
    if not 0.0 < threshold < 1.0:
        raise InvalidSpecError(f"spatter threshold must be in (0, 1), got {threshold}")
    h, w = image.shape[:2]
    layer = gaussian_replicate(rng.normal(0.0, 1.0, (h, w)), smooth_sigma)
    layer -= layer.min()
    peak = layer.max()
    if peak > 0:
        layer /= peak
    blobs = np.maximum(layer - threshold, 0.0) / (1.0 - threshold)
    return clamp01(image + intensity * blobs[:, :, None] * _SPATTER_COLOR)


_DISPATCH = {
    "gaussian_noise": lambda img, p, rng: gaussian_noise(img, p["sigma"], rng),
    "shot_noise": lambda img, p, rng: shot_noise(img, p["photons"], rng),
    "impulse_noise": lambda img, p, rng: impulse_noise(img, p["rate"], rng),
    "speckle_noise": lambda img, p, rng: speckle_noise(img, p["sigma"], rng),
    "dropout": lambda img, p, rng: dropout(img, p["rate"], rng),
    "spatter": lambda img, p, rng: spatter(img, p["smooth_sigma"], p["threshold"], p["intensity"], rng),
}


def noise_family(image, kind, params, seed):
    """Apply one noise-family corruption with the given parameters."""
    if kind not in _DISPATCH:
        raise InvalidSpecError(f"{kind!r} is not a noise-family kind")
    return _DISPATCH[kind](image, params, rng_from_seed(seed))
