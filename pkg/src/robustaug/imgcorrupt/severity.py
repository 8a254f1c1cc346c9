"""Severity table: per (kind, severity) operator parameters.

The shipped defaults are calibrated so that mean PSNR over the reference
suite strictly decreases from severity 1 to 5 for every atomic kind.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from ..errors import InvalidSpecError
from .kinds import ATOMIC_KINDS

SEVERITIES = (1, 2, 3, 4, 5)

# Direction each parameter moves as degradation strengthens:
# +1 increases, -1 decreases, 0 free (not required to be monotone).
PARAM_DIRECTIONS = {
    ("gaussian_noise", "sigma"): 1,
    ("shot_noise", "photons"): -1,
    ("impulse_noise", "rate"): 1,
    ("speckle_noise", "sigma"): 1,
    ("dropout", "rate"): 1,
    ("spatter", "smooth_sigma"): 0,
    ("spatter", "threshold"): -1,
    ("spatter", "intensity"): 1,
    ("defocus_blur", "radius"): 1,
    ("glass_blur", "sigma"): 1,
    ("glass_blur", "max_delta"): 1,
    ("glass_blur", "iterations"): 1,
    ("motion_blur", "length"): 1,
    ("zoom_blur", "max_zoom"): 1,
    ("zoom_blur", "step"): 0,
    ("gaussian_blur", "sigma"): 1,
    ("average_blur", "size"): 1,
    ("median_blur", "size"): 1,
    ("snow", "density"): 1,
    ("snow", "threshold"): -1,
    ("snow", "streak_length"): 1,
    ("snow", "intensity"): 1,
    ("frost", "image_weight"): -1,
    ("frost", "frost_weight"): 1,
    ("fog", "weight"): 1,
    ("fog", "roughness_decay"): -1,
    ("brightness", "shift"): 1,
    ("contrast", "factor"): -1,
    ("saturate", "factor"): 1,
    ("elastic", "alpha"): 1,
    ("elastic", "smooth_sigma"): -1,
    ("pixelate", "factor"): 1,
    ("jpeg_compression", "quality"): -1,
}


class SeverityTable:
    """Maps (atomic kind, severity 1-5) to named operator parameters."""

    def __init__(self, entries: dict):
        self._entries = entries
        self.validate()

    @classmethod
    def from_file(cls, path) -> "SeverityTable":
        with open(path, "r", encoding="utf-8") as f:
            return cls(json.load(f))

    def validate(self) -> None:
        for kind in ATOMIC_KINDS:
            if kind not in self._entries:
                raise InvalidSpecError(f"severity table missing kind {kind!r}")
            levels = self._entries[kind]
            for sev in SEVERITIES:
                if str(sev) not in levels:
                    raise InvalidSpecError(f"severity table missing {kind!r} severity {sev}")
            # monotone in the declared degradation direction
            params = levels["1"].keys()
            for name in params:
                direction = PARAM_DIRECTIONS.get((kind, name), 0)
                if direction == 0:
                    continue
                values = [levels[str(s)][name] for s in SEVERITIES]
                steps = [direction * (b - a) for a, b in zip(values, values[1:])]
                if any(step < 0 for step in steps):
                    raise InvalidSpecError(
                        f"severity table parameter {kind}.{name} not monotone: {values}"
                    )

    def params(self, kind: str, severity: int) -> dict:
        if kind not in self._entries:
            raise InvalidSpecError(f"unknown atomic kind {kind!r}")
        if severity not in SEVERITIES:
            raise InvalidSpecError(f"severity must be in 1..5, got {severity}")
        return dict(self._entries[kind][str(severity)])


@lru_cache(maxsize=1)
def default_severity_table() -> SeverityTable:
    """The severity table shipped with the package."""
    text = resources.files("robustaug").joinpath("data/severity_table.json").read_text("utf-8")
    return SeverityTable(json.loads(text))
