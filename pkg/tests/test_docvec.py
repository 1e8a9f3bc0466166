"""Tests for the deterministic documentation embedding pipeline."""

import math

import numpy as np
import pytest

from apisift.docvec import (
    DOC_DIM,
    DocPipelineConfig,
    embed_doc,
    embed_text,
    exact_tf_cosine,
    idf_from_corpus,
    load_external_vectors,
    normalize_doc,
    strip_markup,
)
from apisift.errors import ConfigError, FormatError
from apisift.fileio import write_vector_store


class TestNormalization:
    def test_plain_sentence(self):
        assert normalize_doc("Returns the IMEI.") == ["returns", "the", "imei"]

    def test_markup_payload_kept(self):
        assert normalize_doc("@return the {@link Location} object") == [
            "the",
            "location",
            "object",
        ]

    def test_html_tags_removed(self):
        assert normalize_doc("Gets a <b>bold</b> value<p>next") == [
            "gets",
            "a",
            "bold",
            "value",
            "next",
        ]

    def test_empty_text(self):
        assert normalize_doc("") == []

    def test_numbers_survive(self):
        assert normalize_doc("retry 3 times") == ["retry", "3", "times"]

    def test_strip_markup_keeps_code_payload(self):
        assert "intValue" in strip_markup("see {@code intValue} for details")


class TestConfig:
    def test_too_few_buckets_rejected(self):
        with pytest.raises(ConfigError):
            DocPipelineConfig(hash_buckets=100)

    def test_minimum_buckets_allowed(self):
        DocPipelineConfig(hash_buckets=DOC_DIM)


class TestEmbedding:
    def test_unit_norm(self):
        cfg = DocPipelineConfig()
        vec = embed_doc(["returns", "the", "imei"], cfg)
        assert vec.values.shape == (DOC_DIM,)
        assert not vec.zero_doc
        assert abs(np.linalg.norm(vec.values) - 1.0) <= 1e-6

    def test_empty_tokens_zero_vector_with_flag(self):
        vec = embed_doc([], DocPipelineConfig())
        assert vec.zero_doc
        assert np.all(vec.values == 0.0)

    def test_deterministic(self):
        cfg = DocPipelineConfig(projection_seed=5)
        a = embed_doc(["alpha", "beta", "gamma"], cfg)
        b = embed_doc(["alpha", "beta", "gamma"], cfg)
        assert np.array_equal(a.values, b.values)

    def test_token_order_invariance(self):
        cfg = DocPipelineConfig()
        a = embed_doc(["alpha", "beta", "gamma"], cfg)
        b = embed_doc(["gamma", "alpha", "beta"], cfg)
        np.testing.assert_allclose(a.values, b.values, atol=1e-12)

    def test_duplicating_every_token_is_a_no_op(self):
        cfg = DocPipelineConfig()
        tokens = ["send", "text", "message"]
        a = embed_doc(tokens, cfg)
        b = embed_doc(tokens * 2, cfg)
        np.testing.assert_allclose(a.values, b.values, atol=1e-12)

    def test_different_seed_different_vector(self):
        tokens = ["device", "identifier"]
        a = embed_doc(tokens, DocPipelineConfig(projection_seed=0))
        b = embed_doc(tokens, DocPipelineConfig(projection_seed=1))
        assert not np.allclose(a.values, b.values)

    def test_embed_text_matches_embed_doc(self):
        cfg = DocPipelineConfig()
        text = "Returns the last known location."
        a = embed_text(text, cfg)
        b = embed_doc(normalize_doc(text), cfg)
        assert np.array_equal(a.values, b.values)

    def test_idf_weights_change_vector(self):
        tokens = ["the", "imei", "value"]
        plain = embed_doc(tokens, DocPipelineConfig())
        weighted = embed_doc(
            tokens,
            DocPipelineConfig(idf_table={"the": 0.1, "imei": 3.0}),
        )
        assert not np.allclose(plain.values, weighted.values)


class TestProjectionQuality:
    def test_pairwise_cosines_preserved_within_tolerance(self):
        # Johnson-Lindenstrauss style check: cosines of the projected
        # 768-dim vectors track the exact hashed-TF cosines
        rng = np.random.default_rng(1234)
        vocabulary = [f"word{i}" for i in range(400)]
        cfg = DocPipelineConfig(projection_seed=7)
        bags = []
        for _ in range(50):
            size = int(rng.integers(3, 40))
            bags.append([vocabulary[j] for j in rng.integers(0, len(vocabulary), size)])
        vectors = [embed_doc(bag, cfg).values for bag in bags]
        worst = 0.0
        for i in range(len(bags)):
            for j in range(i + 1, len(bags)):
                exact = exact_tf_cosine(bags[i], bags[j], cfg)
                projected = float(np.dot(vectors[i], vectors[j]))
                worst = max(worst, abs(exact - projected))
        assert worst <= 0.15

    def test_identical_bags_cosine_one(self):
        cfg = DocPipelineConfig()
        bag = ["alpha", "beta", "alpha"]
        assert exact_tf_cosine(bag, bag, cfg) == pytest.approx(1.0)
        v = embed_doc(bag, cfg).values
        assert float(np.dot(v, v)) == pytest.approx(1.0)


class TestIdf:
    def test_rare_tokens_weighted_higher(self):
        bags = [["common", "rare1"], ["common"], ["common", "x"], ["common", "y"]]
        table = idf_from_corpus(bags)
        assert table["rare1"] > table["common"]

    def test_all_docs_token_at_floor(self):
        bags = [["tok"], ["tok"]]
        table = idf_from_corpus(bags)
        assert table["tok"] == pytest.approx(math.log(3 / 3) + 1.0)


class TestExternalVectors:
    def test_round_trip(self, tmp_path):
        cfg = DocPipelineConfig()
        vectors = {
            "a.B#x():int": embed_doc(["alpha"], cfg).values,
            "a.B#y():int": embed_doc(["beta", "gamma"], cfg).values,
            "a.B#z():int": embed_doc(["delta"], cfg).values,
        }
        path = tmp_path / "doc.vec"
        write_vector_store(path, vectors, DOC_DIM)
        loaded = load_external_vectors(path)
        assert set(loaded) == set(vectors)
        for sig, vec in vectors.items():
            np.testing.assert_allclose(loaded[sig].values, vec, atol=1e-7)
            assert not loaded[sig].zero_doc

    def test_wrong_dimension_rejected(self, tmp_path):
        path = tmp_path / "bad.vec"
        path.write_text('{"sig": "a.B#x():int", "vec": [0.0, 1.0]}\n')
        with pytest.raises(FormatError):
            load_external_vectors(path)

    def test_duplicate_signature_rejected(self, tmp_path):
        row = '{"sig": "a.B#x():int", "vec": [%s]}' % ", ".join(["0.1"] * DOC_DIM)
        path = tmp_path / "dup.vec"
        path.write_text(row + "\n" + row + "\n")
        with pytest.raises(FormatError):
            load_external_vectors(path)

    def test_unnormalized_input_is_normalized(self, tmp_path):
        values = np.full(DOC_DIM, 2.0)
        path = tmp_path / "scale.vec"
        write_vector_store(path, {"a.B#x():int": values}, DOC_DIM)
        loaded = load_external_vectors(path)
        assert abs(np.linalg.norm(loaded["a.B#x():int"].values) - 1.0) <= 1e-9

    def test_zero_row_keeps_flag(self, tmp_path):
        path = tmp_path / "zero.vec"
        write_vector_store(path, {"a.B#x():int": np.zeros(DOC_DIM)}, DOC_DIM)
        loaded = load_external_vectors(path)
        assert loaded["a.B#x():int"].zero_doc
