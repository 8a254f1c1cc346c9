"""Photometric corruptions: brightness, contrast, saturate.

These are fully deterministic (no random draws).
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidSpecError
from .image import clamp01

# BT.601 luma weights
_LUMA = np.array([0.299, 0.587, 0.114])


def brightness(image, shift):
    if shift == 0:
        return image.copy()
    return clamp01(image + shift)


def contrast(image, factor):
    if factor < 0:
        raise InvalidSpecError(f"contrast factor must be >= 0, got {factor}")
    if factor == 1.0:
        return image.copy()
    means = image.mean(axis=(0, 1), keepdims=True)
    return clamp01(means + factor * (image - means))


def saturate(image, factor):
    if factor < 0:
        raise InvalidSpecError(f"saturate factor must be >= 0, got {factor}")
    if factor == 1.0:
        return image.copy()
    luma = image @ _LUMA
    chroma = image - luma[:, :, None]
    return clamp01(luma[:, :, None] + factor * chroma)


_DISPATCH = {
    "brightness": lambda img, p: brightness(img, p["shift"]),
    "contrast": lambda img, p: contrast(img, p["factor"]),
    "saturate": lambda img, p: saturate(img, p["factor"]),
}


def photometric_family(image, kind, params):
    """Apply one photometric corruption with the given parameters."""
    if kind not in _DISPATCH:
        raise InvalidSpecError(f"{kind!r} is not a photometric-family kind")
    return _DISPATCH[kind](image, params)
