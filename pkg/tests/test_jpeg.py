import numpy as np
import pytest

from robustaug.imgcorrupt import reference_suite
from robustaug.imgcorrupt.jpeg import decode_bytes, encode_bytes, quality_tables, transcode


@pytest.fixture(scope="module")
def images():
    return reference_suite(2, 96)


@pytest.mark.parametrize("quality", [95, 60, 25, 5])
def test_bytestream_matches_transcode(images, quality):
    # entropy coding is lossless, so the serialized round trip must be
    # bit-identical to the in-memory quantize/reconstruct path
    for img in images:
        via_bytes = decode_bytes(encode_bytes(img, quality))
        assert np.array_equal(via_bytes, transcode(img, quality))


def test_odd_dimensions_roundtrip():
    rng = np.random.default_rng(0)
    img = rng.random((83, 70, 3))
    data = encode_bytes(img, 40)
    out = decode_bytes(data)
    assert out.shape == img.shape
    assert np.array_equal(out, transcode(img, 40))


def test_high_quality_luma_near_lossless(images):
    # chroma stays 4:2:0 (lossy at color edges) even at quality 100, but the
    # luma channel is not subsampled and must come back almost exactly
    out = transcode(images[0], 100)
    weights = np.array([0.299, 0.587, 0.114])
    assert np.abs((out - images[0]) @ weights).max() < 0.02
    assert np.abs(out - images[0]).mean() < 0.01


def test_quality_tables_monotone():
    prev = None
    for q in (10, 30, 50, 70, 90):
        luma, _ = quality_tables(q)
        if prev is not None:
            assert (luma <= prev).all()
        prev = luma


def test_quality_table_range():
    for q in (1, 50, 100):
        luma, chroma = quality_tables(q)
        for tab in (luma, chroma):
            assert tab.min() >= 1 and tab.max() <= 255


def test_decode_rejects_bad_magic():
    with pytest.raises(ValueError, match="SOI"):
        decode_bytes(b"\x00\x01\x02\x03")


def test_decode_rejects_truncated(images):
    data = encode_bytes(images[0], 60)
    with pytest.raises(ValueError):
        decode_bytes(data[: len(data) // 2])


def test_stream_is_parseable_jfif(images):
    data = encode_bytes(images[0], 60)
    assert data[:2] == b"\xff\xd8"
    assert data[-2:] == b"\xff\xd9"
    assert data[6:11] == b"JFIF\x00"
