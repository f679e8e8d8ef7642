import json
import struct

import numpy as np
import pytest

import bitextmine as bm


def unit_rows(rng, n, dim):
    x = rng.standard_normal((n, dim)).astype(np.float32)
    return x / np.linalg.norm(x, axis=1, keepdims=True)


def test_segmentation():
    assert bm.segment_sentences("राम घर गया। वह सो गया।", "hi") == ["राम घर गया।", "वह सो गया।"]
    assert bm.segment_sentences("Dr. Rao arrived. He spoke.", "en") == ["Dr. Rao arrived.", "He spoke."]
    assert bm.merge_page_fragments(["The budget was", "approved today."], "en") == "The budget was approved today."


def test_vectors_and_errors():
    np.testing.assert_allclose(bm.normalize(np.array([3.0, 4.0])), [0.6, 0.8], rtol=1e-6)
    assert bm.cosine_similarity(np.array([0.6, 0.8]), np.array([0.8, 0.6])) == pytest.approx(0.96, rel=1e-6)
    with pytest.raises(bm.Error) as info:
        bm.normalize(np.zeros(2))
    assert info.value.code == "ZeroVector"


def test_semb_written_by_hand_is_readable(tmp_path):
    # header: magic, version u32, dim u32, count u64, dtype u8, then little-endian rows
    rows = np.array([[1, 0, 0, 0], [0, 0, 3, 4]], dtype="<f4")
    path = tmp_path / "x.semb"
    path.write_bytes(b"SEMB" + struct.pack("<IIQB", 1, 4, 2, 0) + rows.tobytes())
    (tmp_path / "x.semb.ids").write_text("a\nb\n")
    ids, matrix, renormalized = bm.read_semb(path)
    assert ids == ["a", "b"]
    assert renormalized == 1
    np.testing.assert_allclose(matrix[1], [0, 0, 0.6, 0.8], rtol=1e-6)


def test_semb_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    x = unit_rows(rng, 50, 16)
    ids = [f"s{i}" for i in range(50)]
    bm.write_semb(tmp_path / "m.semb", ids, x)
    back_ids, back, _ = bm.read_semb(tmp_path / "m.semb")
    assert back_ids == ids
    assert back.dtype == np.float32
    assert np.array_equal(back, x)


def test_index_matches_exact_search_on_its_own_rows(tmp_path):
    rng = np.random.default_rng(1)
    x = unit_rows(rng, 2000, 32)
    ids = [f"v{i}" for i in range(len(x))]
    index = bm.IvfPqIndex(32, nlist=16, m=8)
    index.train(ids, x)
    index.add(ids, x)
    assert len(index) == 2000
    found = sum(ids[i] in [hit[0] for hit in index.search(x[i], nprobe=16, k=10)] for i in range(100))
    assert found >= 95
    assert bm.exact_search(ids, x, x[7], k=1)[0][0] == "v7"
    index.save(tmp_path / "i.idx")
    loaded = bm.IvfPqIndex.load(tmp_path / "i.idx")
    assert loaded.search(x[3], 4, 5) == index.search(x[3], 4, 5)


def test_evaluation_helpers():
    assert bm.spearman([1, 2, 3, 4], [1, 3, 2, 4]) == pytest.approx(0.8)
    assert bm.classify_band(0.86, 0.75) == "definite_accept"
    assert bm.classify_band(0.85, 0.75) == "marginal_accept"
    assert bm.classify_band(0.5, 0.75) is None


def test_corpus_stats():
    stats = bm.corpus_stats([("en-hi", 2818000, 7308000), ("en-as", 108000, 34000)])
    rows = {r["pair"]: r for r in stats["pairs"]}
    assert rows["en-hi"]["total"] == 10126000
    assert rows["en-hi"]["increase_factor"] == pytest.approx(3.59, abs=0.01)


def write_docs(path, lang, docs):
    with open(path, "w", encoding="utf-8") as f:
        for doc_id, text in docs:
            f.write(json.dumps({"doc_id": doc_id, "lang": lang, "text": text, "source": "t"}, ensure_ascii=False) + "\n")


def test_pipeline_recovers_planted_pairs(tmp_path):
    rng = np.random.default_rng(2)
    n, dim = 300, 32
    en_docs = [(f"e{i}", f"English sentence number {i} is here.") for i in range(n)]
    hi_docs = [(f"h{i}", f"हिंदी वाक्य संख्या {i} यहाँ है।") for i in range(n)]
    write_docs(tmp_path / "en.jsonl", "en", en_docs)
    write_docs(tmp_path / "hi.jsonl", "hi", hi_docs)
    base = unit_rows(rng, n, dim)
    noisy = base + 0.1 * unit_rows(rng, n, dim)
    # the first 200 Hindi sentences translate English ones; the rest are unrelated
    noisy[200:] = unit_rows(rng, n - 200, dim)
    bm.write_semb(tmp_path / "en.semb", [f"e{i}#0" for i in range(n)], base)
    bm.write_semb(tmp_path / "hi.semb", [f"h{i}#0" for i in range(n)], noisy)
    config = {
        "languages": ["en", "hi"],
        "out_dir": "run",
        "mining": {"mode": "monolingual"},
        "index": {"m": 8, "nlist": 16, "nprobe": 16},
        "filter": {"langid": False},
        "sample": {"n_per_band": 5},
        "corpora": [
            {"lang": "en", "documents": "en.jsonl", "embeddings": "en.semb"},
            {"lang": "hi", "documents": "hi.jsonl", "embeddings": "hi.semb"},
        ],
    }
    (tmp_path / "config.json").write_text(json.dumps(config))
    manifest = bm.run_pipeline(tmp_path / "config.json")
    assert manifest["stages"]["mine"]["status"] == "done"
    lines = (tmp_path / "run" / "mine" / "en-hi.pairs.tsv").read_text(encoding="utf-8").splitlines()
    pairs = {tuple(line.split("\t")[:2]) for line in lines}
    assert {(f"e{i}#0", f"h{i}#0") for i in range(200)} <= pairs
    assert all(int(t[1][1:].split("#")[0]) < 200 for t in pairs)
