"""Clustering accuracy, accelerating ratio and the paired signed-rank test."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.stats import norm

from .errors import DegenerateSampleError, MetricError

EXACT_MAX_N = 20


@dataclass(frozen=True)
class AccuracyReport:
    n_correct: int
    n_total: int
    accuracy: float
    matching: dict


def contingency(assignment, labels):
    """Cluster x label count table plus the sorted label values of its columns."""
    assignment = np.asarray(assignment)
    labels = np.asarray(labels, dtype=object)
    if any(lab is None for lab in labels):
        raise MetricError("every point needs a ground-truth label")
    names, col = np.unique(labels.astype(str), return_inverse=True)
    clusters, row = np.unique(assignment, return_inverse=True)
    table = np.zeros((clusters.size, names.size), dtype=np.int64)
    np.add.at(table, (row, col), 1)
    return table, clusters, names


def accuracy(assignment, labels) -> AccuracyReport:
    """Fraction of points whose cluster is matched to their label.

    Clusters are matched one-to-one to labels so that the number of matched
    points is as large as possible (optimal assignment on the contingency table).
    Clusters left without a label count as wrong.
    """
    if labels is None:
        raise MetricError("accuracy needs ground-truth labels")
    assignment = np.asarray(assignment)
    if len(assignment) != len(labels) or len(assignment) == 0:
        raise MetricError("assignment and labels must be non-empty and of equal length")
    table, clusters, names = contingency(assignment, labels)
    rows, cols = linear_sum_assignment(table, maximize=True)
    n_correct = int(table[rows, cols].sum())
    matching = {clusters[r].item(): str(names[c]) for r, c in zip(rows, cols)}
    return AccuracyReport(n_correct, len(assignment), n_correct / len(assignment), matching)


@dataclass(frozen=True)
class SpeedupReport:
    t_sequential: float
    t_parallel: float
    ratio: float


def accelerating_ratio(t_seq: float, t_par: float) -> float:
    if not (t_seq > 0 and t_par > 0):
        raise MetricError(f"times must be positive, got {t_seq} and {t_par}")
    return t_seq / t_par


def speedup(t_seq: float, t_par: float) -> SpeedupReport:
    return SpeedupReport(t_seq, t_par, accelerating_ratio(t_seq, t_par))


@dataclass(frozen=True)
class WilcoxonResult:
    statistic: float  # sum of ranks of the positive differences
    pvalue: float
    n: int  # pairs left after dropping zero differences
    method: str  # "exact" or "normal"


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties given the average of the ranks they span."""
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size)
    sv = values[order]
    i = 0
    while i < sv.size:
        j = i
        while j + 1 < sv.size and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _exact_distribution(doubled: np.ndarray) -> np.ndarray:
    """Counts of each achievable doubled positive-rank sum over all 2**n sign patterns."""
    counts = np.zeros(int(doubled.sum()) + 1, dtype=object)
    counts[0] = 1
    for r in doubled.tolist():
        shifted = np.zeros_like(counts)
        shifted[r:] = counts[:counts.size - r]
        counts = counts + shifted
    return counts


def wilcoxon_signed_rank(a, b, correction: bool = True, method: str = "auto") -> WilcoxonResult:
    """Two-sided paired Wilcoxon signed-rank test of ``a`` against ``b``.

    Zero differences are dropped and tied absolute differences get mid-ranks.
    For up to 20 remaining pairs the p-value comes from the exact permutation
    distribution of the (mid-)rank sums; beyond that from the normal
    approximation with tie-corrected variance and, if ``correction``, a 0.5
    continuity correction. ``method`` forces ``"exact"`` or ``"normal"``.
    """
    if method not in ("auto", "exact", "normal"):
        raise MetricError(f"unknown method {method!r}")
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise MetricError("samples must be one-dimensional and of equal length")
    if a.size < 5:
        raise MetricError(f"need at least 5 pairs, got {a.size}")
    diff = a - b
    diff = diff[diff != 0]
    n = diff.size
    if n == 0:
        raise DegenerateSampleError("all paired differences are zero")
    ranks = midranks(np.abs(diff))
    v = float(ranks[diff > 0].sum())

    if method == "exact" or (method == "auto" and n <= EXACT_MAX_N):
        doubled = np.rint(2 * ranks).astype(np.int64)
        counts = _exact_distribution(doubled)
        total = 2 ** n
        obs = int(round(2 * v))
        lower = sum(counts[:obs + 1]) / total
        upper = sum(counts[obs:]) / total
        p = min(1.0, 2 * min(lower, upper))
        return WilcoxonResult(v, float(p), n, "exact")

    mean = n * (n + 1) / 4
    _, tie_counts = np.unique(np.abs(diff), return_counts=True)
    var = n * (n + 1) * (2 * n + 1) / 24 - float((tie_counts ** 3 - tie_counts).sum()) / 48
    z = v - mean
    if correction:
        z -= math.copysign(0.5, z) if z != 0 else 0.0
    z /= math.sqrt(var)
    return WilcoxonResult(v, float(2 * norm.sf(abs(z))), n, "normal")
