"""Data model, distance score, aggregate distances and closest-centroid assignment.

Centroids are always real data points, referenced by index. Distances are
computed on the fly from the coordinate matrix; no N_p x N_p matrix is ever
materialised.

Objective values are accumulated in fixed point: every point-to-centroid
distance is rounded onto a power-of-two grid chosen per dataset
(:attr:`Dataset.scale`) and summed as int64. Integer sums are associative,
so the same objective comes out bit for bit however the points are split
into blocks. The grid is fine enough that the rounding stays near float
precision (see :meth:`Dataset._grid_scale`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ModelError

# Objective comparisons treat differences below this as ties.
OBJECTIVE_ATOL = 1e-9


@dataclass(frozen=True)
class DataPoint:
    coords: tuple[float, ...]
    label: object = None

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise ModelError("a data point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise ModelError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def dimension(self) -> int:
        return len(self.coords)


class Dataset:
    """An immutable set of ``N_p`` points in ``k`` dimensions, with optional labels.

    Parameters
    ----------
    X : array_like, shape (N_p, k)
        Attribute values. Copied to a read-only float64 array.
    labels : sequence, optional
        One ground-truth class per point.
    normalize : bool
        Rescale every attribute to [0, 1] (min-max). Constant attributes map to 0.
    """

    def __init__(self, X, labels=None, normalize: bool = False):
        X = np.array(X, dtype=np.float64)
        if X.ndim != 2:
            raise ModelError(f"expected a 2-D coordinate array, got shape {X.shape}")
        if X.shape[0] < 2:
            raise ModelError("a dataset needs at least two points")
        if X.shape[1] < 1:
            raise ModelError("points need at least one coordinate")
        if not np.isfinite(X).all():
            raise ModelError("dataset contains NaN or infinite coordinates")
        if normalize:
            lo, hi = X.min(axis=0), X.max(axis=0)
            span = np.where(hi > lo, hi - lo, 1.0)
            X = (X - lo) / span
        X.setflags(write=False)
        self.X = X
        if labels is not None:
            labels = np.asarray(labels, dtype=object)
            if labels.shape != (X.shape[0],):
                raise ModelError("labels must have one entry per point")
            labels.setflags(write=False)
        self.labels = labels
        self.scale = self._grid_scale(X)

    @classmethod
    def from_points(cls, points: Iterable[DataPoint], normalize: bool = False) -> "Dataset":
        points = list(points)
        if not points:
            raise ModelError("a dataset needs at least two points")
        dims = {p.dimension for p in points}
        if len(dims) != 1:
            raise ModelError(f"points have mixed dimensions {sorted(dims)}")
        labels = [p.label for p in points]
        if all(lab is None for lab in labels):
            labels = None
        return cls([p.coords for p in points], labels, normalize=normalize)

    @staticmethod
    def _grid_scale(X: np.ndarray) -> float:
        # Any pairwise distance is bounded by the bounding-box diagonal, so a
        # sum of N_p rounded distances stays below 2**62.
        bound = float(np.sqrt(((X.max(axis=0) - X.min(axis=0)) ** 2).sum()))
        n = X.shape[0]
        if bound == 0.0:
            return 2.0 ** 600
        exp = math.floor(math.log2(2.0 ** 62 / (n * bound * (1 + 1e-12))))
        return 2.0 ** max(min(exp, 600), -600)

    @property
    def size(self) -> int:
        return self.X.shape[0]

    @property
    def dimension(self) -> int:
        return self.X.shape[1]

    def __len__(self) -> int:
        return self.size

    def point(self, i: int) -> DataPoint:
        label = None if self.labels is None else self.labels[i]
        return DataPoint(tuple(self.X[i]), label)

    def quantize(self, d: np.ndarray) -> np.ndarray:
        return np.rint(d * self.scale).astype(np.int64)

    def to_float(self, q) -> float:
        return float(q) / self.scale

    def __repr__(self) -> str:
        return f"Dataset(size={self.size}, dimension={self.dimension}, labeled={self.labels is not None})"


def _coords(p) -> np.ndarray:
    if isinstance(p, DataPoint):
        return np.asarray(p.coords)
    return np.asarray(p, dtype=np.float64)


def score(a, b) -> float:
    """Euclidean distance between two points (``DataPoint`` or coordinate sequences)."""
    a, b = _coords(a), _coords(b)
    if a.shape != b.shape:
        raise ModelError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return math.sqrt(math.fsum((x - y) ** 2 for x, y in zip(a.tolist(), b.tolist())))


def distances_to(X: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Distances from each row of ``X`` to the point ``c``.

    Accumulates one dimension at a time so every entry is computed by the same
    sequence of float operations regardless of how many rows are passed.
    """
    acc = np.zeros(X.shape[0])
    for j in range(X.shape[1]):
        diff = X[:, j] - c[j]
        acc += diff * diff
    return np.sqrt(acc)


def pairwise_to(C: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Distance matrix of shape ``(len(C), len(X))``, entrywise identical to :func:`distances_to`."""
    acc = np.zeros((C.shape[0], X.shape[0]))
    for j in range(X.shape[1]):
        diff = X[None, :, j] - C[:, j, None]
        acc += diff * diff
    return np.sqrt(acc)


def v_sum(L: Iterable[int], U: Iterable[int], data: Dataset) -> float:
    """Sum of scores over all pairs (x_i in L, x_j in U) with x_i != x_j."""
    L = np.fromiter(L, dtype=np.int64)
    U = np.fromiter(U, dtype=np.int64)
    if L.size == 0 or U.size == 0:
        return 0.0
    terms = []
    for i in L:
        others = U[U != i]
        terms.append(distances_to(data.X[others], data.X[i]))
    return math.fsum(np.concatenate(terms).tolist())


class Solution:
    """A centroid set plus the closest-centroid assignment it induces.

    ``assignment[p]`` is the position in ``centroids`` of the cluster holding
    point ``p``. ``objective_q`` is the fixed-point objective and ``objective``
    its float value. ``nearest_q``/``second_q`` hold each point's rounded distance
    to its own and to its nearest other centroid; the search uses them to price
    moves without a full reassignment.
    """

    __slots__ = ("centroids", "assignment", "objective_q", "objective", "nearest_q", "second_q")

    def __init__(self, centroids: Sequence[int], assignment: np.ndarray, objective_q: int,
                 scale: float, nearest_q: np.ndarray | None = None,
                 second_q: np.ndarray | None = None):
        self.centroids = tuple(int(c) for c in centroids)
        assignment = np.asarray(assignment, dtype=np.int64)
        assignment.setflags(write=False)
        self.assignment = assignment
        self.objective_q = int(objective_q)
        self.objective = float(self.objective_q) / scale
        self.nearest_q = nearest_q
        self.second_q = second_q

    @property
    def n_clusters(self) -> int:
        return len(self.centroids)

    def members(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.assignment == i)

    def clusters(self) -> list[np.ndarray]:
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.searchsorted(self.assignment[order], np.arange(self.n_clusters + 1))
        return [order[bounds[i]:bounds[i + 1]] for i in range(self.n_clusters)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Solution):
            return NotImplemented
        return (self.centroids == other.centroids
                and self.objective_q == other.objective_q
                and np.array_equal(self.assignment, other.assignment))

    def __hash__(self):
        return hash((self.centroids, self.objective_q))

    def __repr__(self) -> str:
        return f"Solution(centroids={list(self.centroids)}, objective={self.objective:.6g})"


def check_centroids(centroids: Sequence[int], data: Dataset) -> tuple[int, ...]:
    centroids = tuple(int(c) for c in centroids)
    if not 1 <= len(centroids) <= data.size:
        raise ModelError(f"need between 1 and {data.size} centroids, got {len(centroids)}")
    if len(set(centroids)) != len(centroids):
        raise ModelError(f"duplicate centroid indices in {list(centroids)}")
    for c in centroids:
        if not 0 <= c < data.size:
            raise ModelError(f"centroid index {c} out of range")
    return centroids


def assign_rows(rows: np.ndarray, centroids: Sequence[int], data: Dataset):
    """Closest-centroid assignment for the points ``rows``.

    Returns ``(labels, nearest_q, second_q)``. Ties go to the lowest centroid
    position; a centroid is always placed in its own cluster.
    """
    C = data.X[list(centroids)]
    D = pairwise_to(C, data.X[rows])          # (N_s, len(rows))
    labels = np.argmin(D, axis=0)             # first minimum = lowest position
    for pos, c in enumerate(centroids):
        hit = rows == c
        if hit.any():
            labels[hit] = pos
    Dq = data.quantize(D)
    cols = np.arange(len(rows))
    nearest = Dq[labels, cols]
    if len(centroids) > 1:
        Dq[labels, cols] = np.iinfo(np.int64).max
        second = Dq.min(axis=0)
    else:
        second = np.full(len(rows), np.iinfo(np.int64).max, dtype=np.int64)
    return labels.astype(np.int64), nearest, second


def assign_closest(centroids: Sequence[int], data: Dataset) -> Solution:
    """Assign every point to its closest centroid and price the result."""
    centroids = check_centroids(centroids, data)
    rows = np.arange(data.size)
    labels, nearest, second = assign_rows(rows, centroids, data)
    return Solution(centroids, labels, int(nearest.sum()), data.scale, nearest, second)


def objective(sol: Solution, data: Dataset) -> float:
    """Reference objective: sum over clusters of the distances from members to their centroid."""
    total = []
    for i, members in enumerate(sol.clusters()):
        total.append(v_sum([sol.centroids[i]], members, data))
    return math.fsum(total)


def check_solution(sol: Solution, data: Dataset, rtol: float = 1e-9) -> None:
    """Raise :class:`ModelError` unless ``sol`` satisfies the Solution invariants."""
    check_centroids(sol.centroids, data)
    if sol.assignment.shape != (data.size,):
        raise ModelError("assignment length differs from dataset size")
    for pos, c in enumerate(sol.centroids):
        if sol.assignment[c] != pos:
            raise ModelError(f"centroid {c} is not in its own cluster")
    C = data.X[list(sol.centroids)]
    D = pairwise_to(C, data.X)
    own = D[sol.assignment, np.arange(data.size)]
    if (own > D.min(axis=0)).any():
        raise ModelError("some point is not assigned to a closest centroid")
    ref = objective(sol, data)
    if not math.isclose(sol.objective, ref, rel_tol=rtol, abs_tol=OBJECTIVE_ATOL):
        raise ModelError(f"stored objective {sol.objective!r} differs from recomputed {ref!r}")
