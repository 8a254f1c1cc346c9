"""Self-contained baseline JPEG codec (sequential, 4:2:0, standard tables).

The corruption operator uses :func:`transcode`, which runs the exact
quantize/reconstruct arithmetic without serializing a bytestream. Since
entropy coding is lossless, ``decode_bytes(encode_bytes(x, q))`` is
bit-identical to ``transcode(x, q)``; tests assert this.
"""

from __future__ import annotations

import struct

import numpy as np

from ..errors import InvalidSpecError
from .image import from_uint8, to_uint8

# visit order of natural (row-major) coefficient indices when zigzagging
ZIGZAG = np.array([
    0, 1, 8, 16, 9, 2, 3, 10,
    17, 24, 32, 25, 18, 11, 4, 5,
    12, 19, 26, 33, 40, 48, 41, 34,
    27, 20, 13, 6, 7, 14, 21, 28,
    35, 42, 49, 56, 57, 50, 43, 36,
    29, 22, 15, 23, 30, 37, 44, 51,
    58, 59, 52, 45, 38, 31, 39, 46,
    53, 60, 61, 54, 47, 55, 62, 63,
])

BASE_LUMA_Q = np.array([
    16, 11, 10, 16, 24, 40, 51, 61,
    12, 12, 14, 19, 26, 58, 60, 55,
    14, 13, 16, 24, 40, 57, 69, 56,
    14, 17, 22, 29, 51, 87, 80, 62,
    18, 22, 37, 56, 68, 109, 103, 77,
    24, 35, 55, 64, 81, 104, 113, 92,
    49, 64, 78, 87, 103, 121, 120, 101,
    72, 92, 95, 98, 112, 100, 103, 99,
], dtype=np.int64).reshape(8, 8)

BASE_CHROMA_Q = np.array([
    17, 18, 24, 47, 99, 99, 99, 99,
    18, 21, 26, 66, 99, 99, 99, 99,
    24, 26, 56, 99, 99, 99, 99, 99,
    47, 66, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
    99, 99, 99, 99, 99, 99, 99, 99,
], dtype=np.int64).reshape(8, 8)

# standard Huffman table specs: (code-length counts for lengths 1..16, symbol values)
_DC_LUMA_SPEC = ([0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0], list(range(12)))
_DC_CHROMA_SPEC = ([0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0], list(range(12)))
_AC_LUMA_SPEC = (
    [0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 125],
    [1, 2, 3, 0, 4, 17, 5, 18, 33, 49, 65, 6, 19, 81, 97, 7, 34, 113,
     20, 50, 129, 145, 161, 8, 35, 66, 177, 193, 21, 82, 209, 240, 36, 51, 98, 114,
     130, 9, 10, 22, 23, 24, 25, 26, 37, 38, 39, 40, 41, 42, 52, 53, 54, 55,
     56, 57, 58, 67, 68, 69, 70, 71, 72, 73, 74, 83, 84, 85, 86, 87, 88, 89,
     90, 99, 100, 101, 102, 103, 104, 105, 106, 115, 116, 117, 118, 119, 120, 121, 122, 131,
     132, 133, 134, 135, 136, 137, 138, 146, 147, 148, 149, 150, 151, 152, 153, 154, 162, 163,
     164, 165, 166, 167, 168, 169, 170, 178, 179, 180, 181, 182, 183, 184, 185, 186, 194, 195,
     196, 197, 198, 199, 200, 201, 202, 210, 211, 212, 213, 214, 215, 216, 217, 218, 225, 226,
     227, 228, 229, 230, 231, 232, 233, 234, 241, 242, 243, 244, 245, 246, 247, 248, 249, 250],
)
_AC_CHROMA_SPEC = (
    [0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 119],
    [0, 1, 2, 3, 17, 4, 5, 33, 49, 6, 18, 65, 81, 7, 97, 113, 19, 34,
     50, 129, 8, 20, 66, 145, 161, 177, 193, 9, 35, 51, 82, 240, 21, 98, 114, 209,
     10, 22, 36, 52, 225, 37, 241, 23, 24, 25, 26, 38, 39, 40, 41, 42, 53, 54,
     55, 56, 57, 58, 67, 68, 69, 70, 71, 72, 73, 74, 83, 84, 85, 86, 87, 88,
     89, 90, 99, 100, 101, 102, 103, 104, 105, 106, 115, 116, 117, 118, 119, 120, 121, 122,
     130, 131, 132, 133, 134, 135, 136, 137, 138, 146, 147, 148, 149, 150, 151, 152, 153, 154,
     162, 163, 164, 165, 166, 167, 168, 169, 170, 178, 179, 180, 181, 182, 183, 184, 185, 186,
     194, 195, 196, 197, 198, 199, 200, 201, 202, 210, 211, 212, 213, 214, 215, 216, 217, 218,
     226, 227, 228, 229, 230, 231, 232, 233, 234, 242, 243, 244, 245, 246, 247, 248, 249, 250],
)


def _dct_matrix():
    k = np.arange(8)[:, None]
    n = np.arange(8)[None, :]
    mat = np.cos((2 * n + 1) * k * np.pi / 16.0)
    mat[0, :] *= np.sqrt(1.0 / 8.0)
    mat[1:, :] *= 0.5
    return mat


_DCT = _dct_matrix()


def quality_tables(quality):
    """Standard tables scaled by the usual piecewise quality rule."""
    q = int(quality)
    if not 1 <= q <= 100:
        raise InvalidSpecError(f"jpeg quality must be in 1..100, got {quality}")
    scale = 5000 // q if q < 50 else 200 - 2 * q
    luma = np.clip((BASE_LUMA_Q * scale + 50) // 100, 1, 255)
    chroma = np.clip((BASE_CHROMA_Q * scale + 50) // 100, 1, 255)
    return luma, chroma


def _rgb_to_ycbcr(rgb):
    r = rgb[:, :, 0]
    g = rgb[:, :, 1]
    b = rgb[:, :, 2]
    y = 0.299 * r + 0.587 * g + 0.114 * b
    cb = 128.0 - 0.168735892 * r - 0.331264108 * g + 0.5 * b
    cr = 128.0 + 0.5 * r - 0.418687589 * g - 0.081312411 * b
    return y, cb, cr


def _ycbcr_to_rgb(y, cb, cr):
    cb = cb - 128.0
    cr = cr - 128.0
    r = y + 1.402 * cr
    g = y - 0.344136286 * cb - 0.714136286 * cr
    b = y + 1.772 * cb
    return np.stack([r, g, b], axis=-1)


def _pad_edge(plane, mult):
    h, w = plane.shape
    ph = -h % mult
    pw = -w % mult
    if ph or pw:
        plane = np.pad(plane, ((0, ph), (0, pw)), mode="edge")
    return plane


def _to_blocks(plane):
    h, w = plane.shape
    return plane.reshape(h // 8, 8, w // 8, 8).transpose(0, 2, 1, 3).reshape(-1, 8, 8)


def _from_blocks(blocks, h, w):
    bh, bw = h // 8, w // 8
    return blocks.reshape(bh, bw, 8, 8).transpose(0, 2, 1, 3).reshape(h, w)


def _fdct(blocks):
    return np.einsum("ij,njk,lk->nil", _DCT, blocks, _DCT, optimize=True)


def _idct(blocks):
    return np.einsum("ji,njk,kl->nil", _DCT, blocks, _DCT, optimize=True)


def quantize_image(image, quality):
    """Forward half of the codec: quantized integer coefficients per plane.

    Returns (coeffs, meta) where coeffs maps plane name to an int32 array of
    shape (nblocks, 8, 8) and meta carries the original and padded geometry.
    """
    luma_q, chroma_q = quality_tables(quality)
    h, w = image.shape[:2]
    rgb = to_uint8(image).astype(np.float64)
    y, cb, cr = _rgb_to_ycbcr(rgb)
    y = _pad_edge(y, 16)
    cb = _pad_edge(cb, 16)
    cr = _pad_edge(cr, 16)
    # 4:2:0 chroma: 2x2 block means
    cb = cb.reshape(cb.shape[0] // 2, 2, cb.shape[1] // 2, 2).mean(axis=(1, 3))
    cr = cr.reshape(cr.shape[0] // 2, 2, cr.shape[1] // 2, 2).mean(axis=(1, 3))
    coeffs = {}
    for name, plane, qtab in (("y", y, luma_q), ("cb", cb, chroma_q), ("cr", cr, chroma_q)):
        blocks = _to_blocks(plane - 128.0)
        coeffs[name] = np.rint(_fdct(blocks) / qtab).astype(np.int32)
    meta = {"h": h, "w": w, "ph": y.shape[0], "pw": y.shape[1], "quality": int(quality)}
    return coeffs, meta


def reconstruct(coeffs, meta):
    """Inverse half of the codec, shared by transcode and decode_bytes."""
    luma_q, chroma_q = quality_tables(meta["quality"])
    ph, pw = meta["ph"], meta["pw"]
    planes = {}
    for name, qtab, shape in (
        ("y", luma_q, (ph, pw)),
        ("cb", chroma_q, (ph // 2, pw // 2)),
        ("cr", chroma_q, (ph // 2, pw // 2)),
    ):
        blocks = _idct(coeffs[name].astype(np.float64) * qtab) + 128.0
        planes[name] = _from_blocks(blocks, *shape)
    cb = planes["cb"].repeat(2, axis=0).repeat(2, axis=1)
    cr = planes["cr"].repeat(2, axis=0).repeat(2, axis=1)
    rgb = _ycbcr_to_rgb(planes["y"], cb, cr)[: meta["h"], : meta["w"]]
    return from_uint8(np.clip(np.rint(rgb), 0, 255).astype(np.uint8))


def transcode(image, quality):
    """Encode-decode round trip without serializing the bytestream."""
    coeffs, meta = quantize_image(image, quality)
    return reconstruct(coeffs, meta)


# ---------------------------------------------------------------------------
# bytestream layer


def _build_codes(spec):
    counts, values = spec
    codes = {}
    code = 0
    idx = 0
    for length in range(1, 17):
        for _ in range(counts[length - 1]):
            codes[values[idx]] = (code, length)
            idx += 1
            code += 1
        code <<= 1
    return codes


def _build_decoder(spec):
    codes = _build_codes(spec)
    return {(length, code): symbol for symbol, (code, length) in codes.items()}


class _BitWriter:
    def __init__(self):
        self.out = bytearray()
        self.acc = 0
        self.nbits = 0

    def write(self, value, length):
        self.acc = (self.acc << length) | (value & ((1 << length) - 1))
        self.nbits += length
        while self.nbits >= 8:
            self.nbits -= 8
            byte = (self.acc >> self.nbits) & 0xFF
            self.out.append(byte)
            if byte == 0xFF:
                self.out.append(0x00)
        self.acc &= (1 << self.nbits) - 1

    def flush(self):
        if self.nbits:
            pad = 8 - self.nbits
            self.write((1 << pad) - 1, pad)


class _BitReader:
    def __init__(self, data, pos):
        self.data = data
        self.pos = pos
        self.acc = 0
        self.nbits = 0

    def read_bit(self):
        if self.nbits == 0:
            if self.pos >= len(self.data):
                raise ValueError("jpeg: entropy data truncated")
            byte = self.data[self.pos]
            self.pos += 1
            if byte == 0xFF:
                if self.pos >= len(self.data):
                    raise ValueError("jpeg: entropy data truncated at marker")
                nxt = self.data[self.pos]
                if nxt == 0x00:
                    self.pos += 1
                else:
                    raise ValueError(f"jpeg: unexpected marker 0xFF{nxt:02X} in scan")
            self.acc = byte
            self.nbits = 8
        self.nbits -= 1
        return (self.acc >> self.nbits) & 1

    def read_bits(self, n):
        v = 0
        for _ in range(n):
            v = (v << 1) | self.read_bit()
        return v

    def read_symbol(self, decoder):
        code = 0
        for length in range(1, 17):
            code = (code << 1) | self.read_bit()
            sym = decoder.get((length, code))
            if sym is not None:
                return sym
        raise ValueError("jpeg: invalid Huffman code")


def _magnitude(value):
    if value == 0:
        return 0, 0
    size = int(value).bit_length() if value > 0 else int(-value).bit_length()
    bits = value if value > 0 else value + (1 << size) - 1
    return size, bits


def _extend(bits, size):
    if size == 0:
        return 0
    if bits < (1 << (size - 1)):
        return bits - (1 << size) + 1
    return bits


def _encode_block(writer, zz, prev_dc, dc_codes, ac_codes):
    diff = int(zz[0]) - prev_dc
    size, bits = _magnitude(diff)
    code, length = dc_codes[size]
    writer.write(code, length)
    if size:
        writer.write(bits, size)
    run = 0
    last_nonzero = 0
    for i in range(63, 0, -1):
        if zz[i] != 0:
            last_nonzero = i
            break
    for i in range(1, last_nonzero + 1):
        v = int(zz[i])
        if v == 0:
            run += 1
            continue
        while run > 15:
            code, length = ac_codes[0xF0]
            writer.write(code, length)
            run -= 16
        size, bits = _magnitude(v)
        code, length = ac_codes[(run << 4) | size]
        writer.write(code, length)
        writer.write(bits, size)
        run = 0
    if last_nonzero != 63:
        code, length = ac_codes[0x00]
        writer.write(code, length)
    return int(zz[0])


def _decode_block(reader, prev_dc, dc_dec, ac_dec):
    zz = np.zeros(64, dtype=np.int32)
    size = reader.read_symbol(dc_dec)
    diff = _extend(reader.read_bits(size), size) if size else 0
    zz[0] = prev_dc + diff
    i = 1
    while i < 64:
        sym = reader.read_symbol(ac_dec)
        if sym == 0x00:
            break
        run = sym >> 4
        size = sym & 0x0F
        if size == 0:
            if run != 15:
                raise ValueError("jpeg: invalid AC symbol")
            i += 16
            continue
        i += run
        if i >= 64:
            raise ValueError("jpeg: AC index overflow")
        zz[i] = _extend(reader.read_bits(size), size)
        i += 1
    return zz, int(zz[0])


def _segment(marker, payload):
    return struct.pack(">BBH", 0xFF, marker, len(payload) + 2) + payload


def encode_bytes(image, quality):
    """Serialize a baseline JFIF bytestream."""
    coeffs, meta = quantize_image(image, quality)
    luma_q, chroma_q = quality_tables(quality)

    out = bytearray(b"\xff\xd8")  # SOI
    out += _segment(0xE0, b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00")
    for tid, qtab in ((0, luma_q), (1, chroma_q)):
        payload = bytes([tid]) + bytes(int(qtab.ravel()[j]) for j in ZIGZAG)
        out += _segment(0xDB, payload)
    sof = struct.pack(">BHHB", 8, meta["h"], meta["w"], 3)
    sof += bytes([1, 0x22, 0]) + bytes([2, 0x11, 1]) + bytes([3, 0x11, 1])
    out += _segment(0xC0, sof)
    for cls, tid, spec in (
        (0, 0, _DC_LUMA_SPEC),
        (1, 0, _AC_LUMA_SPEC),
        (0, 1, _DC_CHROMA_SPEC),
        (1, 1, _AC_CHROMA_SPEC),
    ):
        counts, values = spec
        out += _segment(0xC4, bytes([(cls << 4) | tid]) + bytes(counts) + bytes(values))
    out += _segment(0xDA, bytes([3, 1, 0x00, 2, 0x11, 3, 0x11, 0, 63, 0]))

    dc_l = _build_codes(_DC_LUMA_SPEC)
    ac_l = _build_codes(_AC_LUMA_SPEC)
    dc_c = _build_codes(_DC_CHROMA_SPEC)
    ac_c = _build_codes(_AC_CHROMA_SPEC)

    ph, pw = meta["ph"], meta["pw"]
    ybw = pw // 8
    cbw = pw // 16
    yz = coeffs["y"].reshape(-1, 64)[:, ZIGZAG]
    cbz = coeffs["cb"].reshape(-1, 64)[:, ZIGZAG]
    crz = coeffs["cr"].reshape(-1, 64)[:, ZIGZAG]

    writer = _BitWriter()
    prev = {"y": 0, "cb": 0, "cr": 0}
    for my in range(ph // 16):
        for mx in range(pw // 16):
            for dy in (0, 1):
                for dx in (0, 1):
                    idx = (my * 2 + dy) * ybw + (mx * 2 + dx)
                    prev["y"] = _encode_block(writer, yz[idx], prev["y"], dc_l, ac_l)
            cidx = my * cbw + mx
            prev["cb"] = _encode_block(writer, cbz[cidx], prev["cb"], dc_c, ac_c)
            prev["cr"] = _encode_block(writer, crz[cidx], prev["cr"], dc_c, ac_c)
    writer.flush()
    out += writer.out
    out += b"\xff\xd9"  # EOI
    return bytes(out)


def decode_bytes(data):
    """Decode a bytestream produced by :func:`encode_bytes`."""
    if data[:2] != b"\xff\xd8":
        raise ValueError("jpeg: missing SOI marker")
    pos = 2
    qtabs = {}
    decoders = {}
    h = w = None
    quality = None
    while pos < len(data):
        if data[pos] != 0xFF:
            raise ValueError(f"jpeg: expected marker at offset {pos}")
        marker = data[pos + 1]
        if marker == 0xD9:
            raise ValueError("jpeg: no scan data before EOI")
        length = struct.unpack(">H", data[pos + 2 : pos + 4])[0]
        payload = data[pos + 4 : pos + 2 + length]
        pos += 2 + length
        if marker == 0xDB:
            tid = payload[0] & 0x0F
            tab = np.zeros(64, dtype=np.int64)
            tab[ZIGZAG] = np.frombuffer(payload[1:65], dtype=np.uint8)
            qtabs[tid] = tab.reshape(8, 8)
        elif marker == 0xC0:
            _, h, w, ncomp = struct.unpack(">BHHB", payload[:6])
            if ncomp != 3 or payload[7] != 0x22:
                raise ValueError("jpeg: only 3-component 4:2:0 baseline supported")
        elif marker == 0xC4:
            head = payload[0]
            counts = list(payload[1:17])
            values = list(payload[17 : 17 + sum(counts)])
            decoders[(head >> 4, head & 0x0F)] = _build_decoder((counts, values))
        elif marker == 0xDA:
            break
    if h is None or 0 not in qtabs or 1 not in qtabs:
        raise ValueError("jpeg: incomplete header")
    # recover the quality setting by matching the scaled standard table
    for q in range(1, 101):
        if np.array_equal(quality_tables(q)[0], qtabs[0]):
            quality = q
            break
    if quality is None:
        raise ValueError("jpeg: quantization table is not a scaled standard table")

    ph = -(-h // 16) * 16
    pw = -(-w // 16) * 16
    ny = (ph // 8) * (pw // 8)
    nc = (ph // 16) * (pw // 16)
    yz = np.zeros((ny, 64), dtype=np.int32)
    cbz = np.zeros((nc, 64), dtype=np.int32)
    crz = np.zeros((nc, 64), dtype=np.int32)

    reader = _BitReader(data, pos)
    prev = {"y": 0, "cb": 0, "cr": 0}
    ybw = pw // 8
    cbw = pw // 16
    for my in range(ph // 16):
        for mx in range(pw // 16):
            for dy in (0, 1):
                for dx in (0, 1):
                    idx = (my * 2 + dy) * ybw + (mx * 2 + dx)
                    yz[idx], prev["y"] = _decode_block(reader, prev["y"], decoders[(0, 0)], decoders[(1, 0)])
            cidx = my * cbw + mx
            cbz[cidx], prev["cb"] = _decode_block(reader, prev["cb"], decoders[(0, 1)], decoders[(1, 1)])
            crz[cidx], prev["cr"] = _decode_block(reader, prev["cr"], decoders[(0, 1)], decoders[(1, 1)])

    inv = np.zeros(64, dtype=np.int64)
    inv[ZIGZAG] = np.arange(64)
    coeffs = {
        "y": yz[:, inv].reshape(-1, 8, 8),
        "cb": cbz[:, inv].reshape(-1, 8, 8),
        "cr": crz[:, inv].reshape(-1, 8, 8),
    }
    return reconstruct(coeffs, {"h": h, "w": w, "ph": ph, "pw": pw, "quality": quality})
