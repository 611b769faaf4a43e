import math

import numpy as np
import pytest

from tabuclust import Dataset
from tabuclust.errors import ParameterError
from tabuclust.kmeans import KMeansParams, kmeans_run


def lloyd_oracle(X, init_idx, iters):
    """Plain-Python Lloyd iterations from the given initial points."""
    pts = [list(map(float, r)) for r in X]
    centers = [pts[i][:] for i in init_idx]
    for _ in range(iters):
        lab = [min(range(len(centers)), key=lambda c: math.dist(p, centers[c])) for p in pts]
        new = []
        for c in range(len(centers)):
            mem = [p for p, l in zip(pts, lab) if l == c]
            new.append([sum(col) / len(mem) for col in zip(*mem)] if mem else centers[c])
        if new == centers:
            break
        centers = new
    lab = [min(range(len(centers)), key=lambda c: math.dist(p, centers[c])) for p in pts]
    return centers, lab


def test_six_point_means(six):
    res = kmeans_run(six, KMeansParams(2, seed=0))
    centers = sorted(map(tuple, res.centers))
    assert np.allclose(centers, [(1 / 3, 1 / 3), (31 / 3, 31 / 3)], atol=1e-12)
    assert res.converged
    # per cluster: one corner at sqrt(2)/3, two at sqrt(5)/3
    expected = 2 * (math.sqrt(2) + 2 * math.sqrt(5)) / 3
    assert res.objective == pytest.approx(expected)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_matches_plain_lloyd(seed):
    rng = np.random.default_rng(100 + seed)
    X = np.concatenate([rng.normal(loc=m, size=(25, 2)) for m in (0, 4, 8)])
    data = Dataset(X)
    init = np.random.default_rng(seed).choice(len(X), size=3, replace=False)
    res = kmeans_run(data, KMeansParams(3, seed=seed))
    centers, labels = lloyd_oracle(X, init, 1000)
    assert np.allclose(res.centers, centers, atol=1e-10)
    assert res.assignment.tolist() == labels


def test_squared_objective_never_increases():
    rng = np.random.default_rng(9)
    data = Dataset(rng.uniform(size=(300, 3)))
    for seed in range(5):
        res = kmeans_run(data, KMeansParams(6, seed=seed))
        h = res.sq_history
        assert all(b <= a + 1e-9 for a, b in zip(h, h[1:]))


def test_iteration_cap():
    rng = np.random.default_rng(0)
    data = Dataset(rng.uniform(size=(200, 2)))
    res = kmeans_run(data, KMeansParams(8, max_iterations=1, seed=0))
    assert res.iterations == 1 and not res.converged


def test_empty_cluster_reseeded():
    # duplicate points make two initial centers coincide, leaving one cluster empty
    data = Dataset([[0.0], [0.0], [5.0], [6.0]])
    res = kmeans_run(data, KMeansParams(3, seed=0, max_iterations=50))
    assert res.centers.shape == (3, 1)
    assert np.isfinite(res.centers).all()


def test_params_validation(six):
    with pytest.raises(ParameterError):
        KMeansParams(0)
    with pytest.raises(ParameterError):
        KMeansParams(2, tolerance=-1)
    with pytest.raises(ParameterError):
        kmeans_run(six, KMeansParams(7))
