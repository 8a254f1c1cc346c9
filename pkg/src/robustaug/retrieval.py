"""Cross-modal retrieval evaluation: pooling, cosine ranking, R@K, RSUM.

Ground truth is defined by ids: the five captions of an image carry the
image's id in the embedding container. Ranking ties break toward the lower
candidate index, and recalls are kept at full precision internally; the
one-decimal rendering matches the usual reporting convention.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateEmbeddingError,
    EmbeddingFormatError,
    EmptyFeatureError,
    ProtocolError,
    ShapeError,
)

MAGIC = b"VSEB"
VERSION = 1
PROTOCOLS = ("flickr30k", "coco1k")
FOLD_SIZE = 1000
CAPTIONS_PER_IMAGE = 5


@dataclass(frozen=True)
class Embedding:
    id: int
    vector: np.ndarray


@dataclass(frozen=True)
class SimilarityMatrix:
    values: np.ndarray  # (n_images, n_captions)
    image_ids: tuple[int, ...]
    caption_ids: tuple[int, ...]


@dataclass(frozen=True)
class RetrievalReport:
    i2t: tuple[float, float, float]  # R@1, R@5, R@10 as percentages
    t2i: tuple[float, float, float]
    rsum: float
    protocol: str
    folds: int

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "folds": self.folds,
            "i2t": {"r1": self.i2t[0], "r5": self.i2t[1], "r10": self.i2t[2]},
            "t2i": {"r1": self.t2i[0], "r5": self.t2i[1], "r10": self.t2i[2]},
            "rsum": self.rsum,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = [
            f"protocol: {self.protocol} (folds={self.folds})",
            "           R@1    R@5    R@10",
            f"img->txt  {self.i2t[0]:5.1f}  {self.i2t[1]:5.1f}  {self.i2t[2]:5.1f}",
            f"txt->img  {self.t2i[0]:5.1f}  {self.t2i[1]:5.1f}  {self.t2i[2]:5.1f}",
            f"rsum      {self.rsum:5.1f}",
        ]
        return "\n".join(lines)


def average_pool(features) -> np.ndarray:
    """Component-wise mean of a non-empty list of same-dimension vectors."""
    if features is None or len(features) == 0:
        raise EmptyFeatureError("cannot pool an empty feature set")
    rows = [np.asarray(f, dtype=np.float64) for f in features]
    dim = rows[0].shape
    if any(r.shape != dim for r in rows):
        raise ShapeError(f"ragged feature dimensions: {[r.shape for r in rows]}")
    return np.mean(rows, axis=0)


def cosine_similarity(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeError(f"embedding dims differ: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise DegenerateEmbeddingError("zero-norm embedding in cosine similarity")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def _stack(embeddings, role):
    ids = tuple(int(e.id) for e in embeddings)
    vectors = np.stack([np.asarray(e.vector, dtype=np.float64) for e in embeddings])
    norms = np.linalg.norm(vectors, axis=1)
    degenerate = np.nonzero(norms == 0.0)[0]
    if degenerate.size:
        raise DegenerateEmbeddingError(f"zero-norm {role} embedding id={ids[degenerate[0]]}")
    return ids, vectors / norms[:, None]


def similarity_matrix(images, captions) -> SimilarityMatrix:
    """Full cosine matrix between image and caption embedding collections."""
    if len(images) == 0 or len(captions) == 0:
        raise EmptyFeatureError("similarity matrix needs non-empty collections")
    image_ids, img = _stack(images, "image")
    caption_ids, txt = _stack(captions, "caption")
    if img.shape[1] != txt.shape[1]:
        raise ShapeError(f"embedding dims differ: {img.shape[1]} vs {txt.shape[1]}")
    values = np.clip(img @ txt.T, -1.0, 1.0)
    return SimilarityMatrix(values, image_ids, caption_ids)


def recall_at_k(sim, gt, k: int, direction: str) -> float:
    """Percentage of queries with any ground truth in the top-k candidates.

    ``gt`` maps query index to an iterable of candidate indices. Ties break
    toward the lower candidate index.
    """
    values = sim.values if isinstance(sim, SimilarityMatrix) else np.asarray(sim)
    if direction == "i2t":
        scores = values
    elif direction == "t2i":
        scores = values.T
    else:
        raise ProtocolError(f"direction must be 'i2t' or 't2i', got {direction!r}")
    n_queries, n_candidates = scores.shape
    if not 1 <= k <= n_candidates:
        raise ProtocolError(f"k={k} outside 1..{n_candidates}")
    hits = 0
    for q in range(n_queries):
        gt_indices = np.asarray(list(gt[q]), dtype=int)
        if gt_indices.size == 0:
            raise ProtocolError(f"query {q} has no ground truth")
        order = np.argsort(-scores[q], kind="stable")
        positions = np.empty(n_candidates, dtype=int)
        positions[order] = np.arange(n_candidates)
        if positions[gt_indices].min() < k:
            hits += 1
    return 100.0 * hits / n_queries


def rsum(recalls) -> float:
    """Sum of the six recall percentages (both directions, K in {1,5,10})."""
    values = list(recalls)
    if len(values) != 6:
        raise ProtocolError(f"rsum needs exactly 6 recall values, got {len(values)}")
    return float(sum(values))


# ---------------------------------------------------------------------------
# embedding container (binary, little-endian)


def save_embeddings(embeddings, path) -> None:
    """Write the VSEB container: magic, u16 version, u32 count, u32 dim,
    then (u64 id, dim x f32) records."""
    embeddings = list(embeddings)
    if embeddings:
        dim = int(np.asarray(embeddings[0].vector).shape[0])
        if any(np.asarray(e.vector).shape != (dim,) for e in embeddings):
            raise ShapeError("embeddings disagree on dimension")
    else:
        dim = 0
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<HII", VERSION, len(embeddings), dim))
        for e in embeddings:
            f.write(struct.pack("<Q", int(e.id)))
            f.write(np.asarray(e.vector, dtype="<f4").tobytes())


def load_embeddings(path) -> list[Embedding]:
    """Read a VSEB container back; bit-level inverse of save_embeddings."""
    with open(path, "rb") as f:
        data = f.read()
    if len(data) < 14:
        raise EmbeddingFormatError("truncated header")
    if data[:4] != MAGIC:
        raise EmbeddingFormatError(f"bad magic {data[:4]!r}")
    version, count, dim = struct.unpack("<HII", data[4:14])
    if version != VERSION:
        raise EmbeddingFormatError(f"unsupported version {version}")
    record = 8 + 4 * dim
    expected = 14 + count * record
    if len(data) != expected:
        raise EmbeddingFormatError(f"payload is {len(data)} bytes, expected {expected}")
    if count == 0:
        return []
    dtype = np.dtype([("id", "<u8"), ("vec", "<f4", (dim,))])
    records = np.frombuffer(data, dtype=dtype, count=count, offset=14)
    return [Embedding(int(r["id"]), np.array(r["vec"])) for r in records]


# ---------------------------------------------------------------------------
# evaluation protocols


def _validate_pairing(images, captions):
    image_ids = [int(e.id) for e in images]
    if len(set(image_ids)) != len(image_ids):
        raise ProtocolError("duplicate image ids")
    counts: dict[int, int] = {}
    for e in captions:
        counts[int(e.id)] = counts.get(int(e.id), 0) + 1
    if set(counts) != set(image_ids) or any(c != CAPTIONS_PER_IMAGE for c in counts.values()):
        raise ProtocolError(
            f"expected exactly {CAPTIONS_PER_IMAGE} captions per image id; "
            f"got {len(captions)} captions for {len(images)} images"
        )


def _evaluate_block(images, captions):
    sim = similarity_matrix(images, captions)
    caption_cols: dict[int, list[int]] = {}
    for col, cid in enumerate(sim.caption_ids):
        caption_cols.setdefault(cid, []).append(col)
    image_row = {iid: row for row, iid in enumerate(sim.image_ids)}
    gt_i2t = {row: caption_cols[iid] for row, iid in enumerate(sim.image_ids)}
    gt_t2i = {col: [image_row[cid]] for col, cid in enumerate(sim.caption_ids)}
    i2t = tuple(recall_at_k(sim, gt_i2t, k, "i2t") for k in (1, 5, 10))
    t2i = tuple(recall_at_k(sim, gt_t2i, k, "t2i") for k in (1, 5, 10))
    return i2t, t2i


def evaluate_embeddings(images, captions, protocol: str, folds: int = 5) -> RetrievalReport:
    """Evaluate in-memory embedding collections under a named protocol."""
    if protocol not in PROTOCOLS:
        raise ProtocolError(f"unknown protocol {protocol!r}; choose from {PROTOCOLS}")
    _validate_pairing(images, captions)
    if protocol == "flickr30k":
        i2t, t2i = _evaluate_block(images, captions)
        report_folds = 1
    else:
        needed = folds * FOLD_SIZE
        if len(images) < needed:
            raise ProtocolError(
                f"coco1k needs at least {needed} images ({folds} folds of {FOLD_SIZE}), "
                f"got {len(images)}"
            )
        fold_i2t = []
        fold_t2i = []
        for f in range(folds):
            fold_images = images[f * FOLD_SIZE : (f + 1) * FOLD_SIZE]
            fold_ids = {int(e.id) for e in fold_images}
            fold_captions = [e for e in captions if int(e.id) in fold_ids]
            i2t, t2i = _evaluate_block(fold_images, fold_captions)
            fold_i2t.append(i2t)
            fold_t2i.append(t2i)
        i2t = tuple(float(np.mean([f[k] for f in fold_i2t])) for k in range(3))
        t2i = tuple(float(np.mean([f[k] for f in fold_t2i])) for k in range(3))
        report_folds = folds
    return RetrievalReport(i2t, t2i, rsum([*i2t, *t2i]), protocol, report_folds)


def evaluate(img_emb_file, txt_emb_file, protocol: str, folds: int = 5) -> RetrievalReport:
    """File-level entry point: load both containers and evaluate."""
    images = load_embeddings(img_emb_file)
    captions = load_embeddings(txt_emb_file)
    if images and captions and images[0].vector.shape != captions[0].vector.shape:
        raise ShapeError(
            f"embedding dims differ: {images[0].vector.shape} vs {captions[0].vector.shape}"
        )
    return evaluate_embeddings(images, captions, protocol, folds)
