"""Structure representation and structure-space distances."""

import math

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from services import (
    SpaceKind,
    StructureMatrix,
    build_structure,
    euclidean_distance,
    hamming_distance,
    load_structure,
    pairwise_structure_distances,
    reference_condition,
    structure_distance,
    write_structure,
)
from utils.errors import (
    DimensionMismatchError,
    InvalidArgumentError,
    NonBinaryInputError,
    ZeroVectorError,
)

from conftest import make_dataset


class TestNativeDistances:

    def test_three_four_five(self):
        assert euclidean_distance([0, 0], [3, 4]) == 5.0

    def test_identity(self):
        assert euclidean_distance([1.5, -2.0], [1.5, -2.0]) == 0.0

    def test_diagonal(self):
        assert euclidean_distance([1, 1], [2, 2]) == pytest.approx(math.sqrt(2))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            euclidean_distance([1, 2], [1, 2, 3])

    @pytest.mark.parametrize("y, o, expected", [
        ((1, 0, 1), (1, 1, 1), 1),
        ((1, 0, 1), (1, 0, 1), 0),
        ((0, 0), (1, 1), 2),
    ])
    def test_hamming(self, y, o, expected):
        assert hamming_distance(y, o) == expected

    def test_hamming_non_binary(self):
        with pytest.raises(NonBinaryInputError):
            hamming_distance([0, 2], [0, 1])


class TestBuildStructure:

    def test_euclidean_rows(self):
        data = make_dataset([[0, 0], [3, 4], [1, 0]])
        structure = build_structure(data, [0, 1])
        np.testing.assert_allclose(structure.values[2], [1.0, math.sqrt(20)])
        assert structure.ref_ids == ("0", "1")
        assert structure.space_kind is SpaceKind.EUCLIDEAN

    def test_reference_rows_have_zero_on_own_column(self):
        data = make_dataset([[0, 0], [3, 4], [1, 0]])
        structure = build_structure(data, [0, 1])
        assert structure.values[0, 0] == 0.0
        assert structure.values[1, 1] == 0.0

    def test_hamming_column(self):
        data = make_dataset([[1, 0, 1], [1, 1, 1]], space=SpaceKind.HAMMING)
        structure = build_structure(data, [1])
        np.testing.assert_array_equal(structure.values[:, 0], [1, 0])

    def test_duplicate_reference(self):
        data = make_dataset([[0, 0], [1, 1]])
        with pytest.raises(InvalidArgumentError):
            build_structure(data, [0, 0])

    def test_reference_out_of_range(self):
        data = make_dataset([[0, 0], [1, 1]])
        with pytest.raises(InvalidArgumentError):
            build_structure(data, [2])

    def test_colinear_references_flagged(self, caplog):
        data = make_dataset([[0, 0], [1, 1], [2, 2], [5, 0]])
        structure = build_structure(data, [0, 1, 2])
        assert structure.condition > 1e8
        assert "near-colinear" in caplog.text

    def test_matches_independent_distances(self, rng):
        points = rng.standard_normal((100, 5))
        refs = list(rng.choice(100, size=8, replace=False))
        structure = build_structure(make_dataset(points), refs)

        for i in range(100):
            for j, r in enumerate(refs):
                expected = math.sqrt(sum((points[i, c] - points[r, c]) ** 2 for c in range(5)))
                assert structure.values[i, j] == pytest.approx(expected, rel=1e-12, abs=1e-12)

    def test_rigid_motion_invariance(self, rng):
        points = rng.standard_normal((100, 5))
        refs = list(range(8))
        rotation = np.linalg.qr(rng.standard_normal((5, 5)))[0]
        moved = points @ rotation + rng.standard_normal(5) * 10

        original = build_structure(make_dataset(points), refs)
        transformed = build_structure(make_dataset(moved), refs)
        np.testing.assert_allclose(transformed.values, original.values, atol=1e-9)

    def test_rotation_in_three_dimensions(self, rng):
        points = rng.standard_normal((30, 3))
        rotated = Rotation.from_euler("xyz", [30, 45, 60], degrees=True).apply(points)
        np.testing.assert_allclose(
            build_structure(make_dataset(rotated), [0, 1, 2, 3]).values,
            build_structure(make_dataset(points), [0, 1, 2, 3]).values,
            atol=1e-9,
        )

    def test_triangle_inequality(self, rng):
        points = rng.standard_normal((40, 3))
        refs = [0, 1, 2, 3]
        structure = build_structure(make_dataset(points), refs)
        for j1 in range(4):
            for j2 in range(4):
                gap = np.abs(structure.values[:, j1] - structure.values[:, j2])
                bound = euclidean_distance(points[refs[j1]], points[refs[j2]])
                assert np.all(gap <= bound + 1e-9)

    def test_rows_are_distinct_in_general_position(self, rng):
        points = rng.standard_normal((50, 3))
        structure = build_structure(make_dataset(points), [0, 1, 2, 3])
        assert len({tuple(np.round(row, 12)) for row in structure.values}) == 50


class TestReferenceCondition:

    def test_single_reference(self):
        assert reference_condition(np.array([[1.0, 2.0]])) == 1.0

    def test_orthogonal_references(self):
        points = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        assert reference_condition(points) == pytest.approx(1.0)


class TestStructureDistance:

    def test_identical_rows_cosine(self):
        assert structure_distance([1, 2, 3], [1, 2, 3], "cosine") == pytest.approx(0.0, abs=1e-12)

    def test_orthogonal_rows_cosine(self):
        assert structure_distance([1, 0], [0, 1], "cosine") == pytest.approx(1.0)

    def test_euclidean(self):
        assert structure_distance([0, 0], [3, 4], "euclidean") == 5.0

    def test_zero_row_cosine(self):
        with pytest.raises(ZeroVectorError):
            structure_distance([0, 0], [1, 1], "cosine")

    def test_pairwise_matches_single(self, rng):
        queries = rng.random((4, 3))
        targets = rng.random((5, 3))
        distances, zero_mask = pairwise_structure_distances(queries, targets, "cosine")
        assert not zero_mask.any()
        for q in range(4):
            for t in range(5):
                assert distances[q, t] == pytest.approx(
                    structure_distance(queries[q], targets[t], "cosine"), abs=1e-12
                )

    def test_pairwise_flags_zero_rows(self):
        distances, zero_mask = pairwise_structure_distances(
            np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([[1.0, 0.0]]), "cosine"
        )
        assert zero_mask.tolist() == [[True], [False]]
        assert distances[0, 0] == 2.0


class TestStructureFiles:

    def test_write_then_load(self, tmp_path):
        structure = build_structure(make_dataset([[0, 0], [3, 4], [1, 0]]), [0, 1])
        path = tmp_path / "s.csv"
        write_structure(structure, path)

        loaded = load_structure(path)
        assert loaded.ref_ids == ("0", "1")
        np.testing.assert_allclose(loaded.values, structure.values, rtol=1e-14)

    def test_negative_distance_rejected(self):
        with pytest.raises(InvalidArgumentError):
            StructureMatrix(np.array([[-1.0]]), SpaceKind.EUCLIDEAN, ("0",))

    def test_calibrated_space_allows_negative(self):
        structure = StructureMatrix(np.array([[-1.0]]), SpaceKind.CALIBRATED, ("0",))
        assert structure.values[0, 0] == -1.0
