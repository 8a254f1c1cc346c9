"""Exception taxonomy shared across the toolkit.

CLI exit-code mapping: validation/usage errors exit 2, I/O errors exit 1,
external-service (translator) failures exit 3.
"""

from __future__ import annotations


class RobustAugError(Exception):
    """Base class for all toolkit errors."""


class InvalidSpecError(RobustAugError):
    """Unknown corruption kind, severity out of range, or bad parameters."""


class EmptySentenceError(RobustAugError):
    """Text input empty after trimming."""


class TransportError(RobustAugError):
    """Translator unreachable or timed out; carries the untranslated text."""

    def __init__(self, message: str, text: str = ""):
        super().__init__(message)
        self.text = text


class SchemaError(RobustAugError):
    """Manifest file violates the JSONL schema."""


class ManifestValidationError(SchemaError):
    """Manifest content is invalid; lists the offending items."""

    def __init__(self, message: str, offenders: list[str] | None = None):
        super().__init__(message)
        self.offenders = offenders or []


class EmbeddingFormatError(RobustAugError):
    """Embedding container is corrupt, truncated, or version-mismatched."""


class DegenerateEmbeddingError(RobustAugError):
    """Zero-norm embedding vector cannot enter a cosine similarity."""


class EmptyFeatureError(RobustAugError):
    """Feature set is empty; pooling is undefined."""


class ShapeError(RobustAugError):
    """Feature vectors or embeddings disagree on dimension."""


class ProtocolError(RobustAugError):
    """Evaluation protocol preconditions violated (counts, k range)."""
