"""SIF sentence embedding."""

import numpy as np
import pytest

from services import (
    FeatureMatrix,
    FrequencyTable,
    SifConfig,
    WordVectorTable,
    embed_sentences,
    load_frequencies,
    load_sentences,
    load_word_vectors,
    remove_first_principal_component,
    sif_embed,
    sif_weight,
    tokenize,
)
from services.text_embed import first_singular_direction
from utils.errors import (
    DegenerateInputError,
    EmptyInputError,
    EmptyVocabularyError,
    ParseError,
)


def table(words, vectors):
    vectors = np.asarray(vectors, dtype=float)
    return WordVectorTable(vectors.shape[1], tuple(words), vectors)


class TestLoadWordVectors:

    def test_glove_lines(self, write):
        vectors = load_word_vectors(write("v.txt", "cat 1.0 0.0\ndog 0.0 1.0\n"))
        assert vectors.dimension == 2
        assert len(vectors) == 2
        np.testing.assert_array_equal(vectors.vector("dog"), [0.0, 1.0])

    def test_duplicate_keeps_first(self, write):
        vectors = load_word_vectors(write("v.txt", "cat 1.0 0.0\ncat 5.0 5.0\n"))
        assert len(vectors) == 1
        np.testing.assert_array_equal(vectors.vector("cat"), [1.0, 0.0])

    def test_dimension_change(self, write):
        with pytest.raises(ParseError) as info:
            load_word_vectors(write("v.txt", "cat 1.0\ndog 1.0 2.0\n"))
        assert info.value.line == 2

    def test_empty(self, write):
        with pytest.raises(EmptyInputError):
            load_word_vectors(write("v.txt", "\n\n"))


class TestFrequencies:

    def test_counts_are_normalized(self, write):
        freqs = load_frequencies(write("f.txt", "the 6\ncat 3\ndog 1\n"))
        assert freqs.probability("the") == pytest.approx(0.6)
        assert freqs.probability("dog") == pytest.approx(0.1)

    def test_probabilities_kept(self, write):
        freqs = load_frequencies(write("f.txt", "the 0.05\ncat 0.001\n"))
        assert freqs.probability("the") == 0.05

    def test_unknown_word_gets_smallest_probability(self, write):
        freqs = load_frequencies(write("f.txt", "the 0.05\ncat 0.001\n"))
        assert freqs.probability("zebra") == 0.001

    def test_non_numeric(self, write):
        with pytest.raises(ParseError):
            load_frequencies(write("f.txt", "the many\n"))


class TestSifWeight:
    freqs = FrequencyTable({"w": 1e-3, "v": 9e-3, "rare": 1e-12}, 1e-12)

    def test_equal_a_and_p(self):
        assert sif_weight("w", self.freqs, 1e-3) == pytest.approx(0.5)

    def test_frequent_word(self):
        assert sif_weight("v", self.freqs, 1e-3) == pytest.approx(0.1)

    def test_rare_word_tends_to_one(self):
        assert sif_weight("rare", self.freqs, 1e-3) == pytest.approx(1.0, abs=1e-8)

    def test_weight_in_unit_interval(self):
        for word in ("w", "v", "rare"):
            assert 0 < sif_weight(word, self.freqs) <= 1


class TestTokenize:

    def test_lowercase_split(self):
        assert tokenize("A Cat  sat\ton") == ["a", "cat", "sat", "on"]

    def test_load_sentences(self, write):
        assert load_sentences(write("s.txt", "A cat\nthe dog\n\n")) == [["a", "cat"], ["the", "dog"]]

    def test_empty_sentence_file(self, write):
        with pytest.raises(EmptyInputError):
            load_sentences(write("s.txt", ""))


class TestSifEmbed:

    def test_single_word_sentence(self):
        vectors = table(["cat"], [[2.0, 0.0]])
        freqs = FrequencyTable({"cat": 1e-3}, 1e-3)
        embedding = sif_embed([["cat"]], vectors, freqs, SifConfig(a=1e-3, remove_pc=False))
        np.testing.assert_allclose(embedding.features.values, [[1.0, 0.0]])

    def test_out_of_vocabulary_tokens_skipped(self):
        vectors = table(["cat"], [[2.0, 0.0]])
        freqs = FrequencyTable({"cat": 1e-3}, 1e-3)
        embedding = sif_embed([["cat", "zebra"]], vectors, freqs, SifConfig(remove_pc=False))
        np.testing.assert_allclose(embedding.features.values, [[1.0, 0.0]])

    def test_empty_sentence_becomes_zero_row(self):
        vectors = table(["cat", "dog"], [[1.0, 0.0], [0.0, 1.0]])
        freqs = FrequencyTable({"cat": 1e-3, "dog": 1e-3}, 1e-3)
        embedding = sif_embed([["cat"], ["zebra"], ["dog"]], vectors, freqs, SifConfig(remove_pc=False))
        assert embedding.empty_rows == (1,)
        np.testing.assert_array_equal(embedding.features.values[1], [0.0, 0.0])

    def test_no_known_tokens(self):
        vectors = table(["cat"], [[1.0, 0.0]])
        freqs = FrequencyTable({"cat": 1e-3}, 1e-3)
        with pytest.raises(EmptyVocabularyError):
            sif_embed([["zebra"], []], vectors, freqs)

    def test_rank_one_embedding_vanishes(self):
        vectors = table(["cat", "big"], [[1.0, 2.0], [2.0, 4.0]])
        freqs = FrequencyTable({"cat": 1e-3, "big": 1e-2}, 1e-3)
        embedding = sif_embed([["cat"], ["big"], ["big", "cat"]], vectors, freqs)
        np.testing.assert_allclose(embedding.features.values, 0.0, atol=1e-12)

    def test_rows_orthogonal_to_removed_direction(self):
        vectors = table(["cat", "dog"], [[1.0, 0.2], [0.1, 1.0]])
        freqs = FrequencyTable({"cat": 1e-3, "dog": 2e-3}, 1e-3)
        raw = sif_embed([["cat"], ["dog"]], vectors, freqs, SifConfig(remove_pc=False))
        embedding = sif_embed([["cat"], ["dog"]], vectors, freqs)

        _, _, vt = np.linalg.svd(raw.features.values)
        np.testing.assert_allclose(np.abs(embedding.direction), np.abs(vt[0]), atol=1e-12)
        np.testing.assert_allclose(embedding.features.values @ embedding.direction, 0.0, atol=1e-10)

    @pytest.mark.parametrize("remove_pc", [False, True])
    def test_reordering_sentences_reorders_rows(self, remove_pc):
        words = ["cat", "dog", "sat", "ran", "the"]
        vectors = table(words, np.random.default_rng(5).standard_normal((5, 4)))
        freqs = FrequencyTable({"cat": 1e-3, "dog": 2e-3, "sat": 5e-4, "ran": 8e-4, "the": 5e-2}, 5e-4)
        sentences = [["the", "cat", "sat"], ["dog", "ran"], ["the", "dog"], ["cat"], ["ran", "sat", "the"]]
        cfg = SifConfig(remove_pc=remove_pc)

        original = embed_sentences(sentences, vectors, freqs, cfg).values
        order = [3, 0, 4, 2, 1]
        reordered = embed_sentences([sentences[i] for i in order], vectors, freqs, cfg).values
        np.testing.assert_allclose(reordered, original[order], atol=1e-10)


class TestRemovePrincipalComponent:

    def test_diagonal_matrix(self):
        result = remove_first_principal_component(FeatureMatrix([[3.0, 0.0], [0.0, 1.0]]))
        np.testing.assert_allclose(result.values, [[0.0, 0.0], [0.0, 1.0]], atol=1e-12)

    def test_rank_one(self):
        result = remove_first_principal_component(FeatureMatrix([[1.0, 1.0], [2.0, 2.0]]))
        np.testing.assert_allclose(result.values, 0.0, atol=1e-12)

    def test_direction_sign_is_fixed(self):
        u = first_singular_direction(np.array([[-3.0, 0.0], [0.0, 1.0]]))
        np.testing.assert_allclose(u, [1.0, 0.0], atol=1e-12)

    def test_all_zero(self):
        with pytest.raises(DegenerateInputError):
            first_singular_direction(np.zeros((2, 2)))

    def test_orthogonal_rows_unchanged(self, rng):
        base = rng.standard_normal((5, 4))
        u = first_singular_direction(base)
        others = rng.standard_normal((3, 4))
        others -= np.outer(others @ u, u)
        stacked = np.vstack([base * 1000, others])
        u_stacked = first_singular_direction(stacked)
        projected = others - np.outer(others @ u_stacked, u_stacked)
        np.testing.assert_allclose(projected, others, atol=1e-10)
