"""Seed derivation and the shared random generator.

All stochastic operators in this package draw from a Philox counter-based
generator keyed by a 64-bit seed, and every batch/pipeline stage derives
independent sub-seeds with :func:`derive_subseed` so that results do not
depend on scheduling or batch order.
"""

from __future__ import annotations

import hashlib

import numpy as np

_U64 = 0xFFFFFFFFFFFFFFFF


def derive_subseed(seed: int, label: str | bytes) -> int:
    """Derive an independent 64-bit sub-seed from ``(seed, label)``.

    BLAKE2b over the little-endian seed bytes followed by the label bytes;
    fixed algorithm and endianness, so the mapping is identical on every
    platform. Distinct labels give independent streams.
    """
    if isinstance(label, str):
        label = label.encode("utf-8")
    h = hashlib.blake2b(digest_size=8)
    h.update((seed & _U64).to_bytes(8, "little"))
    h.update(label)
    return int.from_bytes(h.digest(), "little")


def rng_from_seed(seed: int) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by a 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & _U64))
