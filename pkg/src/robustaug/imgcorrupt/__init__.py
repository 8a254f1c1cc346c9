"""Severity-parameterized, seed-deterministic image corruptions.

28 kinds total: 16 "seen", 6 "unseen", and 6 "mixed" ordered compositions
of two seen kinds. All operators are pure functions of (image, spec) and
safe to map over a batch in parallel.
"""

from .blur import blur_family
from .core import CorruptionSpec, corrupt
from .digital import digital_family
from .image import (
    clamp01,
    load_image,
    png_bytes,
    psnr,
    reference_suite,
    save_png,
    validate_image,
)
from .kinds import (
    ALL_KINDS,
    ATOMIC_KINDS,
    MIXED_KINDS,
    MIXED_PAIRS,
    SEEN_KINDS,
    UNSEEN_KINDS,
)
from .noise import noise_family
from .photometric import photometric_family
from .severity import SEVERITIES, SeverityTable, default_severity_table
from .weather import weather_family

__all__ = [
    "ALL_KINDS",
    "ATOMIC_KINDS",
    "MIXED_KINDS",
    "MIXED_PAIRS",
    "SEEN_KINDS",
    "SEVERITIES",
    "UNSEEN_KINDS",
    "CorruptionSpec",
    "SeverityTable",
    "blur_family",
    "clamp01",
    "corrupt",
    "default_severity_table",
    "digital_family",
    "load_image",
    "noise_family",
    "photometric_family",
    "png_bytes",
    "psnr",
    "reference_suite",
    "save_png",
    "validate_image",
    "weather_family",
]
