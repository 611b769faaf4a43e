import numpy as np
import pytest

from tabuclust import Dataset, SeedChoice, create_initial_solution
from tabuclust.core import check_solution
from tabuclust.errors import ParameterError

from conftest import A, B, D, E


def test_farthest_sum_from_A(six):
    sol = create_initial_solution(six, 2, SeedChoice(first_centroid=A))
    # d(A,E) = d(A,F) = sqrt(221) beat d(A,D) = sqrt(200); the tie goes to the lower index E
    assert sol.centroids == (A, E)
    check_solution(sol, six)


def test_third_centroid_maximizes_summed_distance(six):
    sol = create_initial_solution(six, 3, SeedChoice(first_centroid=A))
    X = six.X
    tot = np.linalg.norm(X - X[A], axis=1) + np.linalg.norm(X - X[E], axis=1)
    tot[[A, E]] = -1
    assert sol.centroids[2] == int(np.argmax(tot))


def test_ties_pick_lowest_index():
    # from 0 the points 1 and 2 are equally far
    data = Dataset([[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0]])
    assert create_initial_solution(data, 2, SeedChoice(first_centroid=0)).centroids == (0, 1)


def test_seeded_first_centroid_is_reproducible(six):
    a = create_initial_solution(six, 2, 7)
    b = create_initial_solution(six, 2, SeedChoice(rng_seed=7))
    assert a == b
    assert a.centroids[0] == int(np.random.default_rng(7).integers(6))


def test_cluster_count_bounds(six):
    with pytest.raises(ParameterError):
        create_initial_solution(six, 1)
    with pytest.raises(ParameterError):
        create_initial_solution(six, 7)
    assert len(set(create_initial_solution(six, 6).centroids)) == 6


def test_bad_first_centroid(six):
    with pytest.raises(ParameterError):
        create_initial_solution(six, 2, SeedChoice(first_centroid=6))
