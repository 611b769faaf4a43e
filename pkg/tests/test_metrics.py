from itertools import permutations, product

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings, strategies as st

from tabuclust.errors import DegenerateSampleError, MetricError
from tabuclust.metrics import (accelerating_ratio, accuracy, contingency, midranks, speedup,
                               wilcoxon_signed_rank)

# K-means / tabu search accuracies from seven paired runs on each of four datasets.
KMEANS = [0.8633, 0.8456, 0.8698, 0.8321, 0.9139, 0.8140, 0.8569,
          0.6836, 0.7145, 0.5166, 0.6731, 0.6389, 0.6977, 0.7012,
          0.5233, 0.5387, 0.5899, 0.6211, 0.4910, 0.5529, 0.4967,
          0.8826, 0.9105, 0.8944, 0.8367, 0.9533, 0.9269, 0.9102]
TABU = [0.9267, 0.9267, 0.9223, 0.9116, 0.9267, 0.9233, 0.9187,
        0.7246, 0.7233, 0.7246, 0.7242, 0.7137, 0.7244, 0.7181,
        0.6096, 0.6177, 0.6211, 0.6185, 0.6201, 0.6195, 0.6237,
        0.9467, 0.9345, 0.9488, 0.9488, 0.9391, 0.9431, 0.9502]


def brute_accuracy(assignment, labels):
    clusters = sorted(set(assignment))
    names = sorted(set(labels))
    best = 0
    for perm in permutations(names + [None] * max(0, len(clusters) - len(names)), len(clusters)):
        m = dict(zip(clusters, perm))
        best = max(best, sum(m[a] == l for a, l in zip(assignment, labels)))
    return best / len(labels)


def enumerated_p(d):
    """Two-sided p by listing all 2**n sign flips of the mid-ranked differences."""
    d = np.asarray(d, dtype=float)
    d = d[d != 0]
    r = midranks(np.abs(d))
    obs = r[d > 0].sum()
    sums = [sum(ri for ri, s in zip(r, signs) if s) for signs in product([0, 1], repeat=d.size)]
    sums = np.array(sums)
    lo = np.mean(sums <= obs + 1e-9)
    hi = np.mean(sums >= obs - 1e-9)
    return min(1.0, 2 * min(lo, hi))


def test_permuted_perfect_clustering():
    labels = ["x"] * 5 + ["y"] * 4 + ["z"] * 3
    assignment = [2] * 5 + [0] * 4 + [1] * 3
    rep = accuracy(assignment, labels)
    assert rep.accuracy == 1.0
    assert rep.matching == {2: "x", 0: "y", 1: "z"}


def test_single_cluster_iris_like():
    labels = ["a"] * 50 + ["b"] * 50 + ["c"] * 50
    assert accuracy([0] * 150, labels).accuracy == 50 / 150


def test_more_clusters_than_labels():
    assert accuracy([0, 1, 2, 3], ["a", "a", "b", "b"]).accuracy == 0.5


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.sampled_from("pqr")), min_size=1, max_size=25))
def test_accuracy_matches_brute_force(pairs):
    a, l = zip(*pairs)
    assert accuracy(list(a), list(l)).accuracy == pytest.approx(brute_accuracy(a, l))


def test_accuracy_errors():
    with pytest.raises(MetricError):
        accuracy([0, 1], None)
    with pytest.raises(MetricError):
        accuracy([0, 1], ["a"])
    with pytest.raises(MetricError):
        contingency([0, 1], ["a", None])


def test_contingency_counts():
    table, clusters, names = contingency([0, 0, 1, 1, 1], ["a", "b", "b", "b", "a"])
    assert table.tolist() == [[1, 1], [1, 2]]
    assert clusters.tolist() == [0, 1] and names.tolist() == ["a", "b"]


def test_accelerating_ratio():
    assert accelerating_ratio(10.0, 4.0) == 2.5
    assert speedup(3.0, 1.5).ratio == 2.0
    with pytest.raises(MetricError):
        accelerating_ratio(1.0, 0.0)


def test_midranks():
    assert midranks(np.array([3.0, 1.0, 3.0, 2.0])).tolist() == [3.5, 1.0, 3.5, 2.0]


def test_wilcoxon_all_positive_six():
    res = wilcoxon_signed_rank([1, 2, 3, 4, 5, 6], [0] * 6)
    assert res.pvalue == 0.03125
    assert res.statistic == 21.0 and res.method == "exact"


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=5, max_size=10).filter(lambda v: any(v)))
def test_wilcoxon_exact_matches_enumeration(d):
    res = wilcoxon_signed_rank(d, [0] * len(d))
    assert res.pvalue == pytest.approx(enumerated_p(d), abs=1e-12)


def test_wilcoxon_exact_matches_scipy_without_ties():
    rng = np.random.default_rng(0)
    a, b = rng.normal(size=15), rng.normal(size=15)
    ours = wilcoxon_signed_rank(a, b)
    ref = scipy.stats.wilcoxon(a, b, method="exact")
    assert ours.pvalue == pytest.approx(ref.pvalue, rel=1e-12)


def test_wilcoxon_normal_matches_scipy():
    rng = np.random.default_rng(1)
    a, b = rng.normal(size=40), rng.normal(0.3, size=40)
    ours = wilcoxon_signed_rank(a, b)
    ref = scipy.stats.wilcoxon(a, b, method="approx", correction=True)
    assert ours.method == "normal"
    assert ours.pvalue == pytest.approx(ref.pvalue, rel=1e-9)


def test_wilcoxon_pooled_table_values():
    exact = wilcoxon_signed_rank(TABU, KMEANS, method="exact")
    assert exact.n == 28
    assert exact.pvalue == pytest.approx(7.450580596923828e-08, rel=1e-12)
    normal = wilcoxon_signed_rank(TABU, KMEANS)
    assert normal.method == "normal" and normal.pvalue < 0.05


def test_wilcoxon_errors():
    with pytest.raises(DegenerateSampleError):
        wilcoxon_signed_rank([1] * 6, [1] * 6)
    with pytest.raises(MetricError):
        wilcoxon_signed_rank([1, 2, 3], [0, 0, 0])
    with pytest.raises(MetricError):
        wilcoxon_signed_rank([1] * 6, [0] * 5)
    with pytest.raises(MetricError):
        wilcoxon_signed_rank([1] * 6, [0] * 6, method="bogus")
