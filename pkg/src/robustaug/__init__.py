"""Deterministic augmentation and retrieval-robustness evaluation toolkit.

Subpackages:
    imgcorrupt -- severity-parameterized image corruption operators
    textaug    -- semantic-preserving text augmentation operators
    augpolicy  -- the stochastic augmentation policy
    dataset    -- manifest handling and corrupted test-set generation
    retrieval  -- pooling, similarity, Recall@K / RSUM evaluation
    cli        -- command-line entry point
"""

__version__ = "0.1.0"

from .seeds import derive_subseed, rng_from_seed

__all__ = ["derive_subseed", "rng_from_seed", "__version__"]
