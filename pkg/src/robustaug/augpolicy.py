"""Stochastic augmentation policy.

One uniform draw decides everything: with probability 1/2 the sample stays
clean; otherwise the unit interval below 1/2 is split evenly across the
enabled kinds (16 image kinds at 1/32 each, 6 text kinds at 1/12 each).
Image severity comes from an independent sub-stream.

Re-draw scheduling: derive the per-epoch seed with :func:`epoch_seed` to
re-sample augmentations every epoch (the default convention), or reuse one
seed to freeze the draw per sample.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpecError, RobustAugError
from .imgcorrupt import SEEN_KINDS, CorruptionSpec, SeverityTable, corrupt
from .seeds import derive_subseed, rng_from_seed
from .textaug import TEXT_AUG_KINDS, augment_text

__all__ = [
    "PolicyConfig",
    "PolicyDecision",
    "apply_policy",
    "decide_image",
    "decide_text",
    "epoch_seed",
    "sample_image_aug",
    "sample_text_aug",
    "write_audit",
]


class AugmentationError(RobustAugError):
    """Operator failure during policy application, tagged with the sample."""


@dataclass(frozen=True)
class PolicyConfig:
    augment_probability: float = 0.5
    severity_low: int = 1
    severity_high: int = 5
    image_kinds: tuple[str, ...] = SEEN_KINDS
    text_kinds: tuple[str, ...] = TEXT_AUG_KINDS

    def __post_init__(self):
        if not 0.0 <= self.augment_probability <= 1.0:
            raise InvalidSpecError("augment_probability must be in [0, 1]")
        if not 1 <= self.severity_low <= self.severity_high <= 5:
            raise InvalidSpecError("severity range must satisfy 1 <= low <= high <= 5")
        if not self.image_kinds or not self.text_kinds:
            raise InvalidSpecError("kind lists must be non-empty")

    @classmethod
    def from_file(cls, path) -> "PolicyConfig":
        with open(path, "r", encoding="utf-8") as f:
            raw = json.load(f)
        kwargs = {}
        if "augment_probability" in raw:
            kwargs["augment_probability"] = raw["augment_probability"]
        if "severity" in raw:
            kwargs["severity_low"], kwargs["severity_high"] = raw["severity"]
        if "image_kinds" in raw:
            kwargs["image_kinds"] = tuple(raw["image_kinds"])
        if "text_kinds" in raw:
            kwargs["text_kinds"] = tuple(raw["text_kinds"])
        return cls(**kwargs)


@dataclass(frozen=True)
class PolicyDecision:
    modality: str  # "image" | "text"
    kind: str | None  # None means keep the sample clean
    severity: int | None
    draw: float  # the uniform variate behind the decision, for audit
    target: str = field(default="", compare=False)

    def as_dict(self) -> dict:
        return {
            "modality": self.modality,
            "kind": self.kind,
            "severity": self.severity,
            "draw": self.draw,
            "target": self.target,
        }


def decide_image(u: float, config: PolicyConfig | None = None) -> str | None:
    """Pure interval rule: u >= p keeps the image; below, equal sub-intervals."""
    config = config or PolicyConfig()
    p = config.augment_probability
    if u >= p:
        return None
    kinds = config.image_kinds
    index = min(int(u / p * len(kinds)), len(kinds) - 1)
    return kinds[index]


def decide_text(u: float, config: PolicyConfig | None = None) -> str | None:
    config = config or PolicyConfig()
    p = config.augment_probability
    if u >= p:
        return None
    kinds = config.text_kinds
    index = min(int(u / p * len(kinds)), len(kinds) - 1)
    return kinds[index]


def _draw_severity(seed: int, config: PolicyConfig) -> int:
    rng = rng_from_seed(derive_subseed(seed, "severity"))
    return int(rng.integers(config.severity_low, config.severity_high + 1))


def sample_image_aug(seed: int, config: PolicyConfig | None = None) -> PolicyDecision:
    config = config or PolicyConfig()
    u = float(rng_from_seed(seed).random())
    kind = decide_image(u, config)
    severity = _draw_severity(seed, config) if kind else None
    return PolicyDecision("image", kind, severity, u)


def sample_text_aug(seed: int, config: PolicyConfig | None = None) -> PolicyDecision:
    config = config or PolicyConfig()
    u = float(rng_from_seed(seed).random())
    kind = decide_text(u, config)
    return PolicyDecision("text", kind, None, u)


def epoch_seed(seed: int, epoch: int) -> int:
    """Sub-seed for one training epoch (re-draws augmentations each epoch)."""
    return derive_subseed(seed, f"epoch/{epoch}")


def apply_policy(
    image: np.ndarray,
    captions,
    seed: int,
    *,
    table: SeverityTable | None = None,
    config: PolicyConfig | None = None,
    item_id: str = "",
    lexicon=None,
    thesaurus=None,
    translator=None,
):
    """Augment one (image, captions) sample under the policy.

    The image and each caption draw independently, with sub-seeds derived
    from (seed, role), so batch order never changes outcomes. Returns
    (image, captions, audit) where audit lists every PolicyDecision made.
    """
    config = config or PolicyConfig()
    audit: list[PolicyDecision] = []

    image_decision = sample_image_aug(derive_subseed(seed, "image"), config)
    image_decision = PolicyDecision(
        image_decision.modality,
        image_decision.kind,
        image_decision.severity,
        image_decision.draw,
        target=f"{item_id}/image" if item_id else "image",
    )
    audit.append(image_decision)
    out_image = image
    if image_decision.kind is not None:
        spec = CorruptionSpec(
            image_decision.kind, image_decision.severity, derive_subseed(seed, "image/apply")
        )
        try:
            out_image = corrupt(image, spec, table)
        except Exception as exc:
            raise AugmentationError(f"image augmentation failed for {item_id!r}: {exc}") from exc

    out_captions = []
    for i, caption in enumerate(captions):
        decision = sample_text_aug(derive_subseed(seed, f"text/{i}"), config)
        decision = PolicyDecision(
            decision.modality,
            decision.kind,
            decision.severity,
            decision.draw,
            target=f"{item_id}/caption/{i}" if item_id else f"caption/{i}",
        )
        audit.append(decision)
        if decision.kind is None:
            out_captions.append(caption)
            continue
        try:
            out = augment_text(
                caption,
                decision.kind,
                derive_subseed(seed, f"text/{i}/apply"),
                lexicon=lexicon,
                thesaurus=thesaurus,
                translator=translator,
            )
        except Exception as exc:
            raise AugmentationError(
                f"text augmentation failed for {item_id!r} caption {i}: {exc}"
            ) from exc
        out_captions.append(out.original_text)

    return out_image, out_captions, audit


def write_audit(decisions, path) -> None:
    """Append policy decisions to a JSONL audit trail."""
    with open(path, "a", encoding="utf-8") as f:
        for decision in decisions:
            f.write(json.dumps(decision.as_dict(), sort_keys=True) + "\n")
