"""Per-dimension calibration and cross-modal matching."""

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from services import (
    CalibrationModel,
    Direction,
    SpaceKind,
    StructureMatrix,
    apply_calibration,
    build_structure,
    fit_calibration,
    load_calibration,
    match,
    residuals,
    write_calibration,
    write_rankings,
)
from utils.errors import DimensionMismatchError, InvalidArgumentError

from conftest import make_dataset


def structure(values, space=SpaceKind.EUCLIDEAN):
    values = np.asarray(values, dtype=float)
    return StructureMatrix(values, space, tuple(str(j) for j in range(values.shape[1])))


class TestFitCalibration:

    def test_identity_fit(self, rng):
        src = rng.random((6, 4))
        model = fit_calibration(src, src, gamma=0.0)
        np.testing.assert_allclose(model.scale, 1.0, atol=1e-12)
        np.testing.assert_allclose(model.bias, 0.0, atol=1e-12)

    def test_planted_affine_map(self, rng):
        src = rng.random((8, 5)) * 10
        model = fit_calibration(src, 2 * src + 1, gamma=0.0)
        assert np.max(np.abs(model.scale - 2.0)) <= 1e-9
        assert np.max(np.abs(model.bias - 1.0)) <= 1e-9
        np.testing.assert_allclose(residuals(model, src, 2 * src + 1), 0.0, atol=1e-9)

    def test_constant_source_column(self, caplog):
        src = np.array([[3.0, 1.0], [3.0, 2.0], [3.0, 4.0]])
        dst = np.array([[4.0, 1.0], [5.0, 2.0], [6.0, 4.0]])
        model = fit_calibration(src, dst, gamma=0.0)
        assert model.scale[0] == 0.0
        assert model.bias[0] == pytest.approx(5.0)
        assert model.degenerate_dims == (0,)
        assert "Constant source column" in caplog.text

    def test_ridge_shrinks_slope(self, rng):
        src = rng.random((5, 3))
        dst = 2 * src
        plain = fit_calibration(src, dst, gamma=0.0)
        ridged = fit_calibration(src, dst, gamma=1.0)
        assert np.all(np.abs(ridged.scale) < np.abs(plain.scale))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            fit_calibration(np.ones((3, 2)), np.ones((3, 3)))

    def test_negative_gamma(self):
        with pytest.raises(InvalidArgumentError):
            fit_calibration(np.ones((3, 2)), np.ones((3, 2)), gamma=-1.0)

    def test_direction_recorded(self):
        model = fit_calibration(np.eye(3), np.eye(3), direction="a_to_b")
        assert model.direction is Direction.A_TO_B
        assert model.direction.reverse is Direction.B_TO_A


class TestApplyCalibration:

    def test_identity_model(self, rng):
        s = structure(rng.random((4, 3)))
        out = apply_calibration(CalibrationModel.identity(3), s)
        np.testing.assert_array_equal(out.values, s.values)
        assert out.space_kind is SpaceKind.CALIBRATED

    def test_affine_row(self):
        model = CalibrationModel(np.array([2.0, 2.0]), np.array([1.0, 1.0]))
        out = apply_calibration(model, structure([[0.0, 3.0]]))
        np.testing.assert_array_equal(out.values, [[1.0, 7.0]])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_calibration(CalibrationModel.identity(2), structure([[1.0, 2.0, 3.0]]))


class TestMatch:

    def test_exact_target_ranked_first(self):
        queries = structure([[1.0, 2.0]])
        targets = structure([[5.0, 1.0], [1.0, 2.0], [0.0, 3.0]])
        ranking = match(queries, targets, CalibrationModel.identity(2))[0]
        assert ranking.ranked[0] == (1, pytest.approx(0.0, abs=1e-12))

    def test_sorted_by_distance(self):
        queries = structure([[1.0, 0.0]])
        # cosine distances 1 - cos(angle): target 0 is farther than target 1
        far = [np.cos(np.arccos(0.7)), np.sin(np.arccos(0.7))]
        near = [np.cos(np.arccos(0.9)), np.sin(np.arccos(0.9))]
        ranking = match(queries, structure([far, near]), CalibrationModel.identity(2))[0]
        assert ranking.target_indices == [1, 0]
        assert ranking.ranked[0][1] == pytest.approx(0.1)
        assert ranking.ranked[1][1] == pytest.approx(0.3)

    def test_ties_by_target_index(self):
        queries = structure([[1.0, 1.0]])
        targets = structure([[2.0, 1.0], [1.0, 2.0], [0.0, 1.0]])
        ranking = match(queries, targets, CalibrationModel.identity(2), "euclidean",
                        target_indices=[7, 4, 9])[0]
        assert ranking.target_indices == [4, 7, 9]

    def test_self_match_top_one(self, rng):
        data = make_dataset(rng.standard_normal((100, 6)))
        s = build_structure(data, list(range(10)))
        rankings = match(s, s, CalibrationModel.identity(10))
        hits = sum(r.ranked[0][0] == r.query_index for r in rankings)
        assert hits / 100 >= 0.99

    def test_zero_query_row_flagged(self):
        queries = structure([[0.0, 0.0], [1.0, 0.0]])
        targets = structure([[1.0, 0.0], [0.0, 1.0]])
        rankings = match(queries, targets, CalibrationModel.identity(2))
        assert rankings[0].zero_rows
        assert not rankings[1].zero_rows
        assert rankings[0].ranked == ((0, 2.0), (1, 2.0))

    def test_euclidean_metric(self):
        queries = structure([[0.0, 0.0]])
        targets = structure([[3.0, 4.0], [1.0, 0.0]])
        ranking = match(queries, targets, CalibrationModel.identity(2), "euclidean")[0]
        assert ranking.ranked == ((1, 1.0), (0, 5.0))

    def test_order_follows_any_increasing_transform(self, rng):
        queries = structure(rng.standard_normal((5, 4)))
        targets = structure(rng.standard_normal((12, 4)))
        rankings = match(queries, targets, CalibrationModel.identity(4), "euclidean")

        squared = cdist(queries.values, targets.values, "sqeuclidean")
        for ranking, row in zip(rankings, squared):
            assert ranking.target_indices == list(np.argsort(row, kind="stable"))
            assert ranking.target_indices == list(np.argsort(np.exp(row), kind="stable"))

    def test_cosine_order_ignores_target_scale(self, rng):
        queries = structure(rng.standard_normal((5, 4)))
        values = rng.standard_normal((12, 4))
        model = CalibrationModel(rng.random(4) + 0.5, rng.standard_normal(4))

        plain = match(queries, structure(values), model)
        scaled = match(queries, structure(3.5 * values), model)
        for a, b in zip(plain, scaled):
            assert a.target_indices == b.target_indices
            np.testing.assert_allclose([d for _, d in a.ranked], [d for _, d in b.ranked], atol=1e-12)


class TestCalibrationFiles:

    def test_write_then_load(self, tmp_path):
        model = CalibrationModel(np.array([2.0, 0.5]), np.array([1.0, -3.0]), 0.25, "a_to_b")
        path = tmp_path / "model.txt"
        write_calibration(model, path)

        loaded = load_calibration(path)
        np.testing.assert_array_equal(loaded.scale, model.scale)
        np.testing.assert_array_equal(loaded.bias, model.bias)
        assert loaded.gamma == 0.25
        assert loaded.direction is Direction.A_TO_B

    def test_rankings_csv(self, tmp_path):
        queries = structure([[1.0, 0.0]])
        targets = structure([[1.0, 0.0], [0.0, 1.0]])
        path = tmp_path / "rankings.csv"
        write_rankings(match(queries, targets, CalibrationModel.identity(2)), path)

        lines = path.read_text().splitlines()
        assert lines[0] == "query_index,rank,target_index,distance"
        assert lines[1].startswith("0,1,0,")
        assert lines[2].startswith("0,2,1,")
