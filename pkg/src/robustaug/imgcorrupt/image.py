"""Image representation, validation, PSNR, and 8-bit file I/O.

Pixels are float64 intensities in [0, 1], shape (H, W, 3). Quantization to
8-bit happens only at file I/O so composed operators never double-quantize.
"""

from __future__ import annotations

import numpy as np
from PIL import Image as PILImage

from ..errors import InvalidSpecError
from ..seeds import derive_subseed, rng_from_seed

MIN_SIDE = 8


def validate_image(image: np.ndarray) -> np.ndarray:
    """Check shape/range invariants, returning the array unchanged."""
    if not isinstance(image, np.ndarray):
        raise InvalidSpecError(f"image must be an ndarray, got {type(image).__name__}")
    if image.ndim != 3 or image.shape[2] != 3:
        raise InvalidSpecError(f"image must have shape (H, W, 3), got {image.shape}")
    if image.shape[0] < MIN_SIDE or image.shape[1] < MIN_SIDE:
        raise InvalidSpecError(f"image sides must be >= {MIN_SIDE}, got {image.shape[:2]}")
    if image.dtype != np.float64:
        raise InvalidSpecError(f"image dtype must be float64, got {image.dtype}")
    if not np.isfinite(image).all():
        raise InvalidSpecError("image contains non-finite intensities")
    if image.min() < 0.0 or image.max() > 1.0:
        raise InvalidSpecError("image intensities must lie in [0, 1]")
    return image


def clamp01(image: np.ndarray) -> np.ndarray:
    return np.clip(image, 0.0, 1.0)


def psnr(reference: np.ndarray, test: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB for unit-interval images."""
    mse = float(np.mean((reference - test) ** 2))
    if mse == 0.0:
        return float("inf")
    return float(10.0 * np.log10(1.0 / mse))


def from_uint8(pixels: np.ndarray) -> np.ndarray:
    return pixels.astype(np.float64) / 255.0


def to_uint8(image: np.ndarray) -> np.ndarray:
    return np.clip(np.rint(image * 255.0), 0, 255).astype(np.uint8)


def load_image(path) -> np.ndarray:
    """Read a PNG or JPEG file into a unit-interval RGB array."""
    with PILImage.open(path) as im:
        arr = np.asarray(im.convert("RGB"))
    return from_uint8(arr)


def save_png(image: np.ndarray, path) -> None:
    PILImage.fromarray(to_uint8(image), mode="RGB").save(path, format="PNG")


def png_bytes(image: np.ndarray) -> bytes:
    import io

    buf = io.BytesIO()
    PILImage.fromarray(to_uint8(image), mode="RGB").save(buf, format="PNG")
    return buf.getvalue()


_SUITE_SEED = 0x5EED_1_A6E5


def reference_suite(count: int = 10, size: int = 256) -> list[np.ndarray]:
    """Fixed synthetic image suite used for calibration and benchmarks.

    Mixes smooth gradients, sinusoidal texture, soft blobs, hard-edged
    shapes, and low-pass noise so every corruption family has content to
    act on. Deterministic in (count, size).
    """
    from scipy import ndimage

    images = []
    ys, xs = np.meshgrid(np.linspace(0, 1, size), np.linspace(0, 1, size), indexing="ij")
    for i in range(count):
        rng = rng_from_seed(derive_subseed(_SUITE_SEED, f"suite/{i}"))
        base = np.zeros((size, size, 3))
        # directional gradient with per-channel phase
        angle = rng.uniform(0, 2 * np.pi)
        ramp = np.cos(angle) * xs + np.sin(angle) * ys
        for c in range(3):
            base[:, :, c] = 0.5 + 0.35 * np.sin(2 * np.pi * (ramp * rng.uniform(0.5, 2.0) + rng.uniform(0, 1)))
        # soft blobs
        blobs = ndimage.gaussian_filter(rng.normal(0, 1, (size, size, 3)), (size / 16, size / 16, 0))
        blobs /= max(np.abs(blobs).max(), 1e-9)
        base += 0.25 * blobs
        # hard-edged rectangles
        for _ in range(6):
            h0, w0 = rng.integers(0, size - size // 8, 2)
            h1 = h0 + rng.integers(size // 16, size // 4)
            w1 = w0 + rng.integers(size // 16, size // 4)
            color = rng.uniform(0.1, 0.9, 3)
            base[h0 : min(h1, size), w0 : min(w1, size)] = color
        # fine texture
        texture = ndimage.gaussian_filter(rng.normal(0, 1, (size, size)), 1.0)
        base += 0.08 * texture[:, :, None]
        lo, hi = base.min(), base.max()
        base = 0.03 + 0.94 * (base - lo) / (hi - lo)
        images.append(base)
    return images
