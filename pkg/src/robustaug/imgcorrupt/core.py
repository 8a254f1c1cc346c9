"""Corruption dispatch: (image, spec) -> image.

Mixed kinds apply their two seen constituents sequentially with sub-seeds
derived as ``derive_subseed(seed, "step0"/"step1")``; that composition is a
tested public contract, not an implementation detail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpecError
from ..seeds import derive_subseed
from .blur import blur_family
from .digital import digital_family
from .image import validate_image
from .kinds import ALL_KINDS, BLUR_KINDS, DIGITAL_KINDS, MIXED_PAIRS, NOISE_KINDS, PHOTOMETRIC_KINDS, WEATHER_KINDS
from .noise import noise_family
from .photometric import photometric_family
from .severity import SEVERITIES, SeverityTable, default_severity_table
from .weather import weather_family


@dataclass(frozen=True)
class CorruptionSpec:
    """One fully determined image transform."""

    kind: str
    severity: int
    seed: int

    def validate(self) -> "CorruptionSpec":
        if self.kind not in ALL_KINDS:
            raise InvalidSpecError(
                f"unknown corruption kind {self.kind!r}; valid kinds: {', '.join(ALL_KINDS)}"
            )
        if self.severity not in SEVERITIES:
            raise InvalidSpecError(f"severity must be an integer in 1..5, got {self.severity!r}")
        return self


def _apply_atomic(image, kind, params, seed):
    if kind in NOISE_KINDS:
        return noise_family(image, kind, params, seed)
    if kind in BLUR_KINDS:
        return blur_family(image, kind, params, seed)
    if kind in WEATHER_KINDS:
        return weather_family(image, kind, params, seed)
    if kind in PHOTOMETRIC_KINDS:
        return photometric_family(image, kind, params)
    if kind in DIGITAL_KINDS:
        return digital_family(image, kind, params, seed)
    raise InvalidSpecError(f"unknown atomic kind {kind!r}")


def corrupt(image: np.ndarray, spec: CorruptionSpec, table: SeverityTable | None = None) -> np.ndarray:
    """Apply one corruption. Deterministic in (image, spec, table)."""
    validate_image(image)
    spec.validate()
    table = table or default_severity_table()
    if spec.kind in MIXED_PAIRS:
        first, second = MIXED_PAIRS[spec.kind]
        step1 = CorruptionSpec(first, spec.severity, derive_subseed(spec.seed, "step0"))
        step2 = CorruptionSpec(second, spec.severity, derive_subseed(spec.seed, "step1"))
        return corrupt(corrupt(image, step1, table), step2, table)
    params = table.params(spec.kind, spec.severity)
    return _apply_atomic(image, spec.kind, params, spec.seed)
