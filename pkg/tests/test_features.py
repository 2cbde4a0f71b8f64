import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hostiletext.features import SparseVector, fit_vocabulary, tfidf_transform
from hostiletext.textprep import NgramRange

UNIGRAMS = NgramRange(1, 1)
MICRO_CORPUS = [["corona", "vaccine", "corona"], ["vaccine", "hoax"]]


def oracle_idf(df, n_docs):
    return math.log((1 + n_docs) / (1 + df)) + 1


def oracle_tfidf(vocab, tokens):
    """Independent count-then-scale reimplementation of the transform."""
    counts = Counter(t for t in tokens if t in vocab.index)
    dense = np.zeros(len(vocab))
    for term, count in counts.items():
        dense[vocab.index[term]] = count * oracle_idf(
            int(vocab.df[vocab.index[term]]), vocab.n_docs
        )
    norm = np.linalg.norm(dense)
    return dense / norm if norm else dense


class TestFitVocabulary:
    def test_micro_corpus_idf(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS, min_df=1)
        assert dict(zip(vocab.terms, vocab.df.tolist())) == {
            "corona": 1,
            "vaccine": 2,
            "hoax": 1,
        }
        by_term = dict(zip(vocab.terms, vocab.idf))
        assert by_term["corona"] == pytest.approx(oracle_idf(1, 2), abs=1e-12)
        assert by_term["vaccine"] == pytest.approx(1.0, abs=1e-12)
        assert by_term["hoax"] == pytest.approx(oracle_idf(1, 2), abs=1e-12)
        # frozen from the formula: ln(3/2) + 1
        assert by_term["corona"] == pytest.approx(1.4054651081081644, abs=1e-12)

    def test_min_df_two_keeps_only_vaccine(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS, min_df=2)
        assert vocab.terms == ("vaccine",)

    def test_df_equals_n_docs_gives_unit_idf(self):
        vocab = fit_vocabulary([["a", "a"]], UNIGRAMS, min_df=1)
        assert vocab.idf[0] == pytest.approx(1.0, abs=1e-15)

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            fit_vocabulary([], UNIGRAMS)

    def test_min_df_below_one_rejected(self):
        with pytest.raises(ValueError):
            fit_vocabulary(MICRO_CORPUS, UNIGRAMS, min_df=0)

    def test_indices_are_first_seen_order_and_dense(self):
        vocab = fit_vocabulary([["b", "a"], ["c", "a"]], UNIGRAMS)
        assert vocab.terms == ("b", "a", "c")
        assert [vocab.index[t] for t in vocab.terms] == [0, 1, 2]

    def test_min_df_prunes_exactly_below_threshold(self):
        # term "t{k}" appears in exactly k documents, k = 1..8
        docs = [[f"t{k}" for k in range(i + 1, 9)] for i in range(8)]
        vocab = fit_vocabulary(docs, UNIGRAMS, min_df=5)
        assert set(vocab.terms) == {"t5", "t6", "t7", "t8"}
        assert (vocab.df >= 5).all()

    def test_idf_bounds(self):
        rng = np.random.default_rng(0)
        docs = [
            [f"w{j}" for j in rng.integers(0, 30, size=rng.integers(1, 15))]
            for _ in range(20)
        ]
        vocab = fit_vocabulary(docs, UNIGRAMS)
        assert (vocab.idf > 1.0 - 1e-12).all()
        assert (vocab.idf <= 1.0 + math.log(1 + vocab.n_docs) + 1e-12).all()


class TestTfidfTransform:
    def test_micro_example_matches_hand_computation(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS, min_df=1)
        vec = tfidf_transform(vocab, ["corona", "vaccine", "corona"])
        by_term = dict(zip((vocab.terms[i] for i in vec.indices), vec.values))
        # frozen: (2*idf_corona, 1*1.0) / l2-norm 2.9835094570719862
        assert by_term["corona"] == pytest.approx(0.94215562466323588, abs=1e-6)
        assert by_term["vaccine"] == pytest.approx(0.33517574332792605, abs=1e-6)

    def test_oov_only_document_gives_zero_vector(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS)
        vec = tfidf_transform(vocab, ["unseen", "words"])
        assert len(vec) == 0
        assert vec.dim == len(vocab)

    def test_nonempty_output_is_unit_norm(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS)
        vec = tfidf_transform(vocab, ["hoax", "hoax", "vaccine"])
        assert vec.norm() == pytest.approx(1.0, abs=1e-9)

    def test_count_scaling_invariance(self):
        vocab = fit_vocabulary(MICRO_CORPUS, UNIGRAMS)
        doc = ["corona", "vaccine"]
        once = tfidf_transform(vocab, doc)
        thrice = tfidf_transform(vocab, doc * 3)
        np.testing.assert_allclose(once.values, thrice.values, atol=1e-12)
        np.testing.assert_array_equal(once.indices, thrice.indices)

    def test_matches_brute_force_oracle_on_small_corpora(self):
        rng = np.random.default_rng(7)
        for trial in range(20):
            n_docs = int(rng.integers(1, 11))
            docs = [
                [f"w{j}" for j in rng.integers(0, 12, size=rng.integers(1, 10))]
                for _ in range(n_docs)
            ]
            vocab = fit_vocabulary(docs, UNIGRAMS, min_df=1)
            for doc in docs:
                vec = tfidf_transform(vocab, doc)
                np.testing.assert_allclose(
                    vec.to_dense(), oracle_tfidf(vocab, doc), atol=1e-12
                )
                assert (vec.indices < len(vocab)).all()

    @given(st.lists(st.sampled_from("abcdefgh"), max_size=20))
    def test_unit_norm_property(self, tokens):
        vocab = fit_vocabulary([list("abcd"), list("efgh"), list("abef")], UNIGRAMS)
        vec = tfidf_transform(vocab, tokens)
        if len(vec):
            assert vec.norm() == pytest.approx(1.0, abs=1e-9)


class TestSparseVector:
    def test_rejects_unsorted_indices(self):
        with pytest.raises(ValueError):
            SparseVector(5, np.array([3, 1]), np.array([1.0, 2.0]))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            SparseVector(2, np.array([2]), np.array([1.0]))

    def test_rejects_zero_values(self):
        with pytest.raises(ValueError):
            SparseVector(3, np.array([1]), np.array([0.0]))

    def test_to_dense(self):
        vec = SparseVector(4, np.array([1, 3]), np.array([2.0, -1.0]))
        np.testing.assert_array_equal(vec.to_dense(), [0.0, 2.0, 0.0, -1.0])
