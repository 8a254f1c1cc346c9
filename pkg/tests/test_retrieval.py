import numpy as np
import pytest

from robustaug.errors import (
    DegenerateEmbeddingError,
    EmbeddingFormatError,
    EmptyFeatureError,
    ProtocolError,
    ShapeError,
)
from robustaug.retrieval import (
    Embedding,
    average_pool,
    cosine_similarity,
    evaluate,
    evaluate_embeddings,
    load_embeddings,
    recall_at_k,
    rsum,
    save_embeddings,
    similarity_matrix,
)


def _sort_oracle_recall(scores, gt_map, k):
    """Independent O(n^2 log n) oracle: full sort with (score desc, index asc)."""
    hits = 0
    for q in range(len(scores)):
        order = sorted(range(len(scores[q])), key=lambda c: (-scores[q][c], c))
        top = set(order[:k])
        if any(c in top for c in gt_map[q]):
            hits += 1
    return 100.0 * hits / len(scores)


# --- pooling ----------------------------------------------------------------


def test_average_pool_single_vector():
    v = np.array([1.0, 2.0, 3.0])
    assert np.array_equal(average_pool([v]), v)


def test_average_pool_two_basis_vectors():
    out = average_pool([np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])])
    assert np.array_equal(out, np.array([0.5, 0.5, 0.0]))


def test_average_pool_matches_scalar_loop():
    rng = np.random.default_rng(3)
    features = [rng.normal(size=256) for _ in range(64)]
    pooled = average_pool(features)
    # scalar-loop oracle
    oracle = np.zeros(256)
    for f in features:
        for j in range(256):
            oracle[j] += f[j]
    oracle /= 64
    assert np.abs(pooled - oracle).max() < 1e-6


def test_average_pool_errors():
    with pytest.raises(EmptyFeatureError):
        average_pool([])
    with pytest.raises(ShapeError):
        average_pool([np.zeros(3), np.zeros(4)])


# --- cosine -----------------------------------------------------------------


def test_cosine_self_similarity():
    v = np.array([0.3, -1.2, 4.0])
    assert cosine_similarity(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_orthogonal():
    assert cosine_similarity([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_cosine_exact_fraction():
    assert cosine_similarity([1.0, 2.0, 2.0], [2.0, 1.0, 2.0]) == pytest.approx(8.0 / 9.0)


def test_cosine_zero_norm_rejected():
    with pytest.raises(DegenerateEmbeddingError):
        cosine_similarity([0.0, 0.0], [1.0, 0.0])


# --- similarity matrix ------------------------------------------------------


def test_matrix_single_identical_pair():
    sim = similarity_matrix([Embedding(0, np.ones(4))], [Embedding(0, np.ones(4))])
    assert sim.values.shape == (1, 1)
    assert sim.values[0, 0] == pytest.approx(1.0, abs=1e-12)


def test_matrix_scale_invariance():
    rng = np.random.default_rng(0)
    imgs = [Embedding(i, rng.normal(size=8)) for i in range(4)]
    txts = [Embedding(i, rng.normal(size=8)) for i in range(6)]
    base = similarity_matrix(imgs, txts).values
    scaled_imgs = [Embedding(e.id, 17.5 * e.vector) for e in imgs]
    scaled = similarity_matrix(scaled_imgs, txts).values
    np.testing.assert_allclose(scaled, base, atol=1e-12)


def test_matrix_matches_entrywise_oracle():
    rng = np.random.default_rng(1)
    imgs = [Embedding(i, rng.normal(size=16)) for i in range(50)]
    txts = [Embedding(i, rng.normal(size=16)) for i in range(250)]
    sim = similarity_matrix(imgs, txts).values
    for i in (0, 13, 49):
        for t in (0, 100, 249):
            expected = cosine_similarity(imgs[i].vector, txts[t].vector)
            assert abs(sim[i, t] - expected) < 1e-6


def test_matrix_reports_degenerate_id():
    imgs = [Embedding(7, np.zeros(4))]
    txts = [Embedding(0, np.ones(4))]
    with pytest.raises(DegenerateEmbeddingError, match="id=7"):
        similarity_matrix(imgs, txts)


# --- recall -----------------------------------------------------------------


def _identity_like(n):
    """Each image is maximal exactly at its own 5 captions."""
    sim = np.full((n, 5 * n), 0.1)
    for i in range(n):
        sim[i, 5 * i : 5 * i + 5] = 0.9
    gt_i2t = {i: list(range(5 * i, 5 * i + 5)) for i in range(n)}
    gt_t2i = {c: [c // 5] for c in range(5 * n)}
    return sim, gt_i2t, gt_t2i


def test_recall_identity_like_is_perfect():
    sim, gt_i2t, gt_t2i = _identity_like(8)
    assert recall_at_k(sim, gt_i2t, 1, "i2t") == 100.0
    assert recall_at_k(sim, gt_t2i, 1, "t2i") == 100.0


def test_recall_negated_identity_hits_zero():
    n = 8
    sim, gt_i2t, _ = _identity_like(n)
    assert recall_at_k(-sim, gt_i2t, 1, "i2t") == 0.0
    # oracle agrees
    assert _sort_oracle_recall(-sim, gt_i2t, 1) == 0.0


def test_recall_matches_sort_oracle_randomized():
    rng = np.random.default_rng(12)
    for _ in range(60):
        n = int(rng.integers(2, 20))
        sim = rng.normal(size=(n, 5 * n))
        # quantize to force ties sometimes
        sim = np.round(sim, 1)
        gt_i2t = {i: list(range(5 * i, 5 * i + 5)) for i in range(n)}
        gt_t2i = {c: [c // 5] for c in range(5 * n)}
        for k in (1, 5, 10):
            if k <= 5 * n:
                assert recall_at_k(sim, gt_i2t, k, "i2t") == _sort_oracle_recall(sim, gt_i2t, k)
            if k <= n:
                assert recall_at_k(sim, gt_t2i, k, "t2i") == _sort_oracle_recall(sim.T, gt_t2i, k)


def test_recall_tie_breaks_to_lower_index():
    # llano matrix: every score equal, so rank order is candidate index
    sim = np.zeros((1, 10))
    assert recall_at_k(sim, {0: [0]}, 1, "i2t") == 100.0
    assert recall_at_k(sim, {0: [9]}, 1, "i2t") == 0.0
    assert recall_at_k(sim, {0: [9]}, 10, "i2t") == 100.0


def test_recall_k_out_of_range():
    sim = np.zeros((2, 3))
    with pytest.raises(ProtocolError):
        recall_at_k(sim, {0: [0], 1: [1]}, 4, "i2t")


def test_recall_monotone_in_k():
    rng = np.random.default_rng(5)
    sim = rng.normal(size=(10, 50))
    gt = {i: list(range(5 * i, 5 * i + 5)) for i in range(10)}
    r1 = recall_at_k(sim, gt, 1, "i2t")
    r5 = recall_at_k(sim, gt, 5, "i2t")
    r10 = recall_at_k(sim, gt, 10, "i2t")
    assert r1 <= r5 <= r10


# --- rsum -------------------------------------------------------------------


def test_rsum_published_grid_bert_row():
    assert round(rsum([66.3, 88.7, 93.6, 50.6, 78.7, 86.7]), 1) == 464.6


def test_rsum_published_top_row():
    assert round(rsum([71.9, 94.7, 98.8, 59.3, 89.5, 96.3]), 1) == 510.5


def test_rsum_zeros():
    assert rsum([0, 0, 0, 0, 0, 0]) == 0.0


def test_rsum_requires_six_values():
    with pytest.raises(ProtocolError):
        rsum([1.0, 2.0])


# --- container --------------------------------------------------------------


def test_container_roundtrip(tmp_path):
    rng = np.random.default_rng(9)
    embeddings = [Embedding(i * 3 + 1, rng.normal(size=32).astype(np.float32)) for i in range(100)]
    path = tmp_path / "emb.vseb"
    save_embeddings(embeddings, path)
    loaded = load_embeddings(path)
    assert [e.id for e in loaded] == [e.id for e in embeddings]
    for a, b in zip(loaded, embeddings):
        assert np.array_equal(a.vector, b.vector)
        assert a.vector.dtype == np.float32


def test_container_truncated(tmp_path):
    path = tmp_path / "emb.vseb"
    save_embeddings([Embedding(1, np.ones(8, dtype=np.float32))], path)
    data = path.read_bytes()
    path.write_bytes(data[:-5])
    with pytest.raises(EmbeddingFormatError, match="bytes"):
        load_embeddings(path)


def test_container_bad_magic(tmp_path):
    path = tmp_path / "emb.vseb"
    path.write_bytes(b"NOPE" + b"\x00" * 20)
    with pytest.raises(EmbeddingFormatError, match="magic"):
        load_embeddings(path)


def test_container_zero_count(tmp_path):
    path = tmp_path / "emb.vseb"
    save_embeddings([], path)
    assert load_embeddings(path) == []


def test_container_version_check(tmp_path):
    path = tmp_path / "emb.vseb"
    save_embeddings([], path)
    data = bytearray(path.read_bytes())
    data[4] = 99
    path.write_bytes(bytes(data))
    with pytest.raises(EmbeddingFormatError, match="version"):
        load_embeddings(path)


# --- evaluation protocols ----------------------------------------------------


def _synthetic_sets(n_images, dim=16, noise=0.0, seed=0):
    rng = np.random.default_rng(seed)
    images = [Embedding(i, rng.normal(size=dim)) for i in range(n_images)]
    captions = []
    for e in images:
        for _ in range(5):
            captions.append(Embedding(e.id, e.vector + noise * rng.normal(size=dim)))
    return images, captions


def test_evaluate_perfect_retrieval():
    images, captions = _synthetic_sets(30, noise=0.0)
    report = evaluate_embeddings(images, captions, "flickr30k")
    assert report.i2t == (100.0, 100.0, 100.0)
    assert report.t2i == (100.0, 100.0, 100.0)
    assert report.rsum == 600.0


def test_evaluate_report_deterministic(tmp_path):
    images, captions = _synthetic_sets(20, noise=0.5, seed=4)
    img_path = tmp_path / "img.vseb"
    txt_path = tmp_path / "txt.vseb"
    save_embeddings([Embedding(e.id, e.vector.astype(np.float32)) for e in images], img_path)
    save_embeddings([Embedding(e.id, e.vector.astype(np.float32)) for e in captions], txt_path)
    first = evaluate(img_path, txt_path, "flickr30k").to_json()
    second = evaluate(img_path, txt_path, "flickr30k").to_json()
    assert first == second


def test_evaluate_coco1k_fold_averaging():
    images, captions = _synthetic_sets(5000, dim=8, noise=1.0, seed=7)
    report = evaluate_embeddings(images, captions, "coco1k")
    # oracle: evaluate each 1000-image fold independently and average by hand
    fold_reports = []
    for f in range(5):
        fold_images = images[f * 1000 : (f + 1) * 1000]
        ids = {e.id for e in fold_images}
        fold_captions = [e for e in captions if e.id in ids]
        fold_reports.append(evaluate_embeddings(fold_images, fold_captions, "flickr30k"))
    for k in range(3):
        assert report.i2t[k] == pytest.approx(np.mean([r.i2t[k] for r in fold_reports]), abs=1e-9)
        assert report.t2i[k] == pytest.approx(np.mean([r.t2i[k] for r in fold_reports]), abs=1e-9)
    assert report.folds == 5


def test_evaluate_coco1k_needs_5000():
    images, captions = _synthetic_sets(4999, dim=4)
    with pytest.raises(ProtocolError, match="4999"):
        evaluate_embeddings(images, captions, "coco1k")


def test_evaluate_caption_count_mismatch():
    images, captions = _synthetic_sets(10, dim=4)
    with pytest.raises(ProtocolError, match="captions"):
        evaluate_embeddings(images, captions[:-1], "flickr30k")


def test_evaluate_unknown_protocol():
    images, captions = _synthetic_sets(5, dim=4)
    with pytest.raises(ProtocolError, match="protocol"):
        evaluate_embeddings(images, captions, "mscoco5k")


def test_evaluate_permutation_invariance():
    images, captions = _synthetic_sets(25, dim=8, noise=0.8, seed=11)
    base = evaluate_embeddings(images, captions, "flickr30k")
    rng = np.random.default_rng(0)
    perm = rng.permutation(len(images))
    shuffled = evaluate_embeddings([images[p] for p in perm], captions, "flickr30k")
    assert shuffled.i2t == base.i2t
    assert shuffled.t2i == base.t2i


def test_report_rsum_identity():
    images, captions = _synthetic_sets(20, dim=8, noise=0.7, seed=2)
    report = evaluate_embeddings(images, captions, "flickr30k")
    assert report.rsum == pytest.approx(sum(report.i2t) + sum(report.t2i), abs=1e-9)


def test_report_text_rendering_one_decimal():
    report = evaluate_embeddings(*_synthetic_sets(12, dim=8, noise=0.6, seed=3), "flickr30k")
    text = report.to_text()
    assert "R@1" in text and "rsum" in text
