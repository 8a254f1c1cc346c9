"""Corruption kind registry: 16 seen + 6 unseen + 6 mixed = 28 kinds.

The seen ordering is frozen: it is the public contract that maps policy
draws to kinds, so reordering would silently change every seeded outcome.
"""

from __future__ import annotations

SEEN_KINDS = (
    "gaussian_noise",
    "shot_noise",
    "impulse_noise",
    "speckle_noise",
    "defocus_blur",
    "glass_blur",
    "motion_blur",
    "zoom_blur",
    "snow",
    "frost",
    "fog",
    "brightness",
    "contrast",
    "elastic",
    "pixelate",
    "jpeg_compression",
)

UNSEEN_KINDS = (
    "gaussian_blur",
    "spatter",
    "saturate",
    "average_blur",
    "median_blur",
    "dropout",
)

# Ordered pairs of seen constituents; the first-named one is applied first.
MIXED_PAIRS = {
    "zoom+snow": ("zoom_blur", "snow"),
    "zoom+pixelate": ("zoom_blur", "pixelate"),
    "zoom+contrast": ("zoom_blur", "contrast"),
    "snow+pixelate": ("snow", "pixelate"),
    "snow+contrast": ("snow", "contrast"),
    "pixelate+contrast": ("pixelate", "contrast"),
}

MIXED_KINDS = tuple(MIXED_PAIRS)
ATOMIC_KINDS = SEEN_KINDS + UNSEEN_KINDS
ALL_KINDS = SEEN_KINDS + UNSEEN_KINDS + MIXED_KINDS

NOISE_KINDS = ("gaussian_noise", "shot_noise", "impulse_noise", "speckle_noise", "dropout", "spatter")
BLUR_KINDS = ("defocus_blur", "glass_blur", "motion_blur", "zoom_blur", "gaussian_blur", "average_blur", "median_blur")
WEATHER_KINDS = ("snow", "frost", "fog")
PHOTOMETRIC_KINDS = ("brightness", "contrast", "saturate")
DIGITAL_KINDS = ("elastic", "pixelate", "jpeg_compression")


def is_mixed(kind: str) -> bool:
    return kind in MIXED_PAIRS


def is_seen(kind: str) -> bool:
    return kind in SEEN_KINDS


def is_atomic(kind: str) -> bool:
    return kind in ATOMIC_KINDS
