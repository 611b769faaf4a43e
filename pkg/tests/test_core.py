import math

import numpy as np
import pytest

from tabuclust import DataPoint, Dataset, Solution, assign_closest, objective, score, v_sum
from tabuclust.core import check_solution, distances_to, pairwise_to
from tabuclust.errors import ModelError

from conftest import A, B, C, D, E, F


def test_score_examples():
    assert score((0, 0), (3, 4)) == 5.0
    assert score((1, 2, 3), (4, 6, 3)) == 5.0
    assert score(DataPoint((0.0, 0.0)), DataPoint((3.0, 4.0))) == 5.0


def test_score_dimension_mismatch():
    with pytest.raises(ModelError):
        score((0, 0), (1, 2, 3))


def test_datapoint_validation():
    with pytest.raises(ModelError):
        DataPoint(())
    with pytest.raises(ModelError):
        DataPoint((1.0, float("nan")))


def test_v_sum_example():
    data = Dataset([[0, 0], [3, 4], [0, 1]])
    # L={0}, U={1,2}: 5 + 1
    assert v_sum([0], [1, 2], data) == 6.0
    # the point itself contributes nothing
    assert v_sum([0], [0, 1, 2], data) == 6.0


def test_six_point_objective(six):
    sol = assign_closest([A, D], six)
    assert sol.assignment.tolist() == [0, 0, 0, 1, 1, 1]
    assert sol.objective == pytest.approx(4.0, abs=1e-12)
    assert objective(sol, six) == 4.0
    check_solution(sol, six)


def test_centroid_tie_goes_to_lowest_position():
    data = Dataset([[0.0], [2.0], [1.0]])
    sol = assign_closest([0, 1], data)
    assert sol.assignment.tolist() == [0, 1, 0]
    sol = assign_closest([1, 0], data)
    assert sol.assignment.tolist() == [1, 0, 0]


def test_bad_centroids(six):
    with pytest.raises(ModelError):
        assign_closest([A, A], six)
    with pytest.raises(ModelError):
        assign_closest([A, 17], six)
    with pytest.raises(ModelError):
        assign_closest([], six)


def test_dataset_validation():
    with pytest.raises(ModelError):
        Dataset([[1.0, 2.0]])
    with pytest.raises(ModelError):
        Dataset([[1.0, np.inf], [0.0, 0.0]])
    with pytest.raises(ModelError):
        Dataset([[0.0], [1.0]], labels=["a"])
    with pytest.raises(ModelError):
        Dataset.from_points([DataPoint((0.0,)), DataPoint((0.0, 1.0))])


def test_dataset_is_read_only(six):
    with pytest.raises(ValueError):
        six.X[0, 0] = 5.0


def test_normalize_minmax():
    data = Dataset([[0.0, 5.0, 2.0], [10.0, 7.0, 2.0], [5.0, 6.0, 2.0]], normalize=True)
    assert data.X.tolist() == [[0.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.5, 0.5, 0.0]]


def test_from_points_roundtrip():
    pts = [DataPoint((0.0, 1.0), "x"), DataPoint((2.0, 3.0), "y")]
    data = Dataset.from_points(pts)
    assert data.size == 2 and data.dimension == 2
    assert data.point(1) == pts[1]


def test_quantized_sum_bound():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(500, 7)) * 1e6
    data = Dataset(X)
    d = pairwise_to(X[:1], X)[0]
    assert data.quantize(d).sum() < 2 ** 62
    # grid is fine enough to keep ~15 significant digits of the total
    assert abs(data.to_float(data.quantize(d).sum()) - math.fsum(d)) <= 1e-9 * math.fsum(d) + 500 / data.scale


def test_distances_independent_of_blocking():
    rng = np.random.default_rng(0)
    X = rng.normal(size=(101, 13))
    full = pairwise_to(X[:4], X)
    parts = np.concatenate([pairwise_to(X[:4], X[s:s + 17]) for s in range(0, 101, 17)], axis=1)
    assert np.array_equal(full, parts)
    assert np.array_equal(full[2], distances_to(X, X[2]))


def test_solution_equality_and_clusters(six):
    s1 = assign_closest([A, D], six)
    s2 = assign_closest([A, D], six)
    assert s1 == s2
    assert s1 != assign_closest([B, D], six)
    assert [c.tolist() for c in s1.clusters()] == [[A, B, C], [D, E, F]]
    assert s1.members(1).tolist() == [D, E, F]


def test_check_solution_detects_corruption(six):
    good = assign_closest([A, D], six)
    bad = Solution(good.centroids, [0, 0, 0, 1, 1, 0], good.objective_q, six.scale)
    with pytest.raises(ModelError):
        check_solution(bad, six)
    wrong_obj = Solution(good.centroids, good.assignment, good.objective_q + 10 ** 9, six.scale)
    with pytest.raises(ModelError):
        check_solution(wrong_obj, six)
