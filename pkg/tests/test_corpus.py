"""Tokenization and similarity-matrix behaviour, pinned by an independent oracle."""

import numpy as np
import pytest

from oracles import oracle_similarity_matrix

from robust_lexrank import (
    Corpus,
    Sentence,
    SimilarityMatrix,
    build_similarity_matrix,
    idf_modified_cosine,
    read_corpus,
    tokenize,
)
from robust_lexrank.corpus import write_matrix_csv
from robust_lexrank.errors import ParameterError, ParseError


class TestTokenize:
    def test_basic_sentence(self):
        assert tokenize("Iraq refuses to back down.") == ["iraq", "refuses", "to", "back", "down"]

    def test_empty(self):
        assert tokenize("") == []

    def test_punctuation_stripping(self):
        assert tokenize("UNSCOM, in charge") == ["unscom", "in", "charge"]

    def test_numbers_kept(self):
        assert tokenize("since the year 1990") == ["since", "the", "year", "1990"]

    def test_unicode_quotes_and_apostrophes(self):
        assert tokenize("Iraq’s “commitments”") == ["iraq", "s", "commitments"]


def two_sentence_corpus(a, b):
    return Corpus.verified([Sentence("a", a), Sentence("b", b)])


class TestIdfModifiedCosine:
    def test_self_similarity(self, cluster_corpus):
        for s in cluster_corpus.sentences:
            assert idf_modified_cosine(s, s, cluster_corpus) == 1.0

    def test_disjoint_tokens(self):
        corpus = two_sentence_corpus("alpha beta", "gamma delta")
        a, b = corpus.sentences
        assert idf_modified_cosine(a, b, corpus) == 0.0

    def test_fixture_pair_matches_oracle(self, cluster_corpus, fixture_similarity):
        a = cluster_corpus.sentences[0]  # d1s1
        b = cluster_corpus.sentences[7]  # d4s1
        value = idf_modified_cosine(a, b, cluster_corpus)
        assert value == pytest.approx(fixture_similarity[0, 7], abs=1e-15)

    def test_outside_sentence_rejected(self, cluster_corpus):
        stranger = Sentence("zz", "completely new text")
        with pytest.raises(ParameterError):
            idf_modified_cosine(stranger, cluster_corpus.sentences[0], cluster_corpus)

    def test_zero_weight_sentence(self):
        # only token appears in both sentences, so idf and the weight norm vanish
        corpus = two_sentence_corpus("common", "common extra words")
        a, b = corpus.sentences
        assert idf_modified_cosine(a, a, corpus) == 1.0
        assert idf_modified_cosine(a, b, corpus) == 0.0


class TestBuildSimilarityMatrix:
    def test_single_sentence(self):
        corpus = Corpus.verified([Sentence("s1", "hello world")])
        matrix = build_similarity_matrix(corpus)
        assert matrix.values.shape == (1, 1)
        assert matrix.values[0, 0] == 1.0

    def test_identical_sentences(self):
        corpus = two_sentence_corpus("same words here", "same words here")
        values = build_similarity_matrix(corpus).values
        assert np.allclose(values, 1.0)

    def test_cluster_matches_committed_fixture(self, cluster_similarity, fixture_similarity):
        assert np.array_equal(cluster_similarity.values, fixture_similarity)

    def test_cluster_matches_oracle(self, cluster_corpus, cluster_similarity):
        oracle = oracle_similarity_matrix([s.body for s in cluster_corpus.sentences])
        assert np.array_equal(cluster_similarity.values, oracle)

    def test_matrix_entries_equal_pairwise_operation(self, cluster_corpus, cluster_similarity):
        sentences = cluster_corpus.sentences
        for i in (0, 3, 10):
            for j in (1, 7):
                expected = idf_modified_cosine(sentences[i], sentences[j], cluster_corpus)
                assert cluster_similarity.values[i, j] == expected

    def test_symmetry_and_diagonal(self, cluster_similarity):
        values = cluster_similarity.values
        assert np.abs(values - values.T).max() <= 1e-12
        assert np.array_equal(np.diag(values), np.ones(len(values)))
        assert values.min() >= 0.0 and values.max() <= 1.0

    def test_permutation_equivariance(self, cluster_corpus, cluster_similarity):
        rng = np.random.default_rng(7)
        perm = rng.permutation(len(cluster_corpus))
        shuffled = Corpus.verified([cluster_corpus.sentences[i] for i in perm])
        permuted = build_similarity_matrix(shuffled).values
        assert np.array_equal(permuted, cluster_similarity.values[np.ix_(perm, perm)])


class TestValidationAndIo:
    def test_similarity_matrix_rejects_asymmetry(self):
        with pytest.raises(ParameterError):
            SimilarityMatrix(np.array([[1.0, 0.5], [0.2, 1.0]]))

    def test_similarity_matrix_rejects_bad_diagonal(self):
        with pytest.raises(ParameterError):
            SimilarityMatrix(np.array([[0.9, 0.0], [0.0, 1.0]]))

    def test_corpus_rejects_duplicate_ids(self):
        with pytest.raises(ParseError):
            Corpus.verified([Sentence("x", "one"), Sentence("x", "two")])

    def test_read_corpus_with_ids(self, tmp_path):
        path = tmp_path / "sents.tsv"
        path.write_text("id1\tfirst sentence\nid2\tsecond sentence\n", encoding="utf-8")
        corpus = read_corpus(path)
        assert corpus.ids == ["id1", "id2"]
        assert corpus.n_verified == 2

    def test_read_corpus_auto_ids(self, tmp_path):
        path = tmp_path / "plain.txt"
        path.write_text("first sentence\n\nsecond sentence\n", encoding="utf-8")
        corpus = read_corpus(path)
        assert corpus.ids == ["s1", "s2"]

    def test_read_corpus_empty_file(self, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("", encoding="utf-8")
        with pytest.raises(ParseError):
            read_corpus(path)

    def test_matrix_csv_full_precision(self, tmp_path, cluster_similarity):
        path = tmp_path / "sim.csv"
        write_matrix_csv(cluster_similarity.values, path)
        back = np.loadtxt(path, delimiter=",")
        assert np.array_equal(back, cluster_similarity.values)
