"""Feature, label and pair ingestion; corpus splitting."""

import numpy as np
import pytest

from services import (
    FeatureMatrix,
    PairedCorpus,
    SpaceKind,
    load_corpus,
    load_feature_matrix,
    load_labels,
    load_pairs,
    split_corpus,
    write_feature_matrix,
)
from utils.errors import (
    EmptyInputError,
    InputFileError,
    InvalidArgumentError,
    NonBinaryInputError,
    ParseError,
)

from conftest import make_dataset


class TestLoadFeatureMatrix:

    def test_two_by_two(self, write):
        path = write("f.csv", "1.0,2.0\n3.0,4.0\n")
        matrix = load_feature_matrix(path)
        np.testing.assert_array_equal(matrix.values, [[1.0, 2.0], [3.0, 4.0]])

    def test_single_value(self, write):
        matrix = load_feature_matrix(write("f.csv", "0.5\n"))
        assert (matrix.rows, matrix.cols) == (1, 1)
        assert matrix.values[0, 0] == 0.5

    def test_tsv(self, write):
        matrix = load_feature_matrix(write("f.tsv", "1\t2\n3\t4\n"), "tsv")
        np.testing.assert_array_equal(matrix.values, [[1, 2], [3, 4]])

    def test_ragged_row_reports_line(self, write):
        with pytest.raises(ParseError) as info:
            load_feature_matrix(write("f.csv", "1.0,2.0\n3.0\n"))
        assert info.value.line == 2

    def test_long_row_reports_line(self, write):
        with pytest.raises(ParseError) as info:
            load_feature_matrix(write("f.csv", "1.0\n2.0,3.0\n"))
        assert info.value.line == 2

    def test_non_numeric(self, write):
        with pytest.raises(ParseError) as info:
            load_feature_matrix(write("f.csv", "1.0,2.0\n3.0,abc\n"))
        assert info.value.line == 2

    def test_non_finite(self, write):
        with pytest.raises(ParseError):
            load_feature_matrix(write("f.csv", "1.0,inf\n"))

    def test_empty_file(self, write):
        with pytest.raises(EmptyInputError):
            load_feature_matrix(write("f.csv", ""))

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputFileError):
            load_feature_matrix(tmp_path / "nope.csv")

    def test_write_then_load_is_exact(self, tmp_path, rng):
        values = rng.standard_normal((5, 3)) * 1e6
        path = tmp_path / "out.csv"
        write_feature_matrix(FeatureMatrix(values), path)
        np.testing.assert_allclose(load_feature_matrix(path).values, values, rtol=1e-14, atol=0)

    def test_matrix_is_read_only(self):
        matrix = FeatureMatrix([[1.0, 2.0]])
        with pytest.raises(ValueError):
            matrix.values[0, 0] = 5.0


class TestLoadLabels:

    def test_labels_in_order(self, write):
        assert load_labels(write("l.txt", "cat\ndog\ncat\n")) == ["cat", "dog", "cat"]

    def test_single_label(self, write):
        assert load_labels(write("l.txt", "bird")) == ["bird"]

    def test_empty_file(self, write):
        with pytest.raises(EmptyInputError):
            load_labels(write("l.txt", ""))

    def test_blank_inner_line(self, write):
        with pytest.raises(ParseError) as info:
            load_labels(write("l.txt", "cat\n\ndog\n"))
        assert info.value.line == 2


class TestLoadPairs:

    def test_pairs(self, write):
        assert load_pairs(write("p.txt", "0,1\n2,3\n")) == [(0, 1), (2, 3)]

    def test_malformed(self, write):
        with pytest.raises(ParseError) as info:
            load_pairs(write("p.txt", "0,1\n2\n"))
        assert info.value.line == 2

    def test_negative_index(self, write):
        with pytest.raises(ParseError):
            load_pairs(write("p.txt", "-1,0\n"))


class TestDatasets:

    def test_label_count_must_match(self):
        with pytest.raises(InvalidArgumentError):
            make_dataset([[1.0], [2.0]], labels=["x"])

    def test_hamming_needs_binary(self):
        with pytest.raises(NonBinaryInputError):
            make_dataset([[0, 2]], space=SpaceKind.HAMMING)

    def test_pair_out_of_range(self):
        data = make_dataset([[1.0], [2.0]])
        with pytest.raises(InvalidArgumentError):
            PairedCorpus(data, data, ((0, 5),))

    def test_pair_reuses_object(self):
        data = make_dataset([[1.0], [2.0]])
        with pytest.raises(InvalidArgumentError):
            PairedCorpus(data, data, ((0, 0), (0, 1)))

    def test_load_corpus(self, corpus_files):
        corpus = load_corpus(**corpus_files)
        assert corpus.mod_a.size == 12
        assert corpus.mod_b.values.shape == (12, 2)
        assert corpus.mod_a.labels[:3] == ("cat", "dog", "bird")
        assert len(corpus.pairs) == 12


class TestSplitCorpus:

    @pytest.fixture
    def corpus(self):
        data = make_dataset(np.arange(20.0).reshape(10, 2))
        return PairedCorpus(data, data, tuple((i, i) for i in range(10)))

    def test_all_pairs_in_train(self, corpus):
        split = split_corpus(corpus, 10, 0)
        assert len(split.train_pairs) == 10
        assert split.empty_test

    def test_same_seed_same_split(self, corpus):
        assert split_corpus(corpus, 6, 7) == split_corpus(corpus, 6, 7)

    def test_train_and_test_partition_objects(self, corpus):
        split = split_corpus(corpus, 6, 3)
        train = {a for a, _ in split.train_pairs}
        assert train.isdisjoint(split.test_indices_a)
        assert train | set(split.test_indices_a) == set(range(10))

    def test_zero_train_size(self, corpus):
        with pytest.raises(InvalidArgumentError):
            split_corpus(corpus, 0, 0)

    def test_train_size_above_pairs(self, corpus):
        with pytest.raises(InvalidArgumentError):
            split_corpus(corpus, 11, 0)
