"""Lloyd's K-means, the comparison baseline.

Initial centers are distinct data points drawn at random. An empty cluster
gets its center re-seeded at the point farthest from that cluster's previous
center.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Dataset, pairwise_to
from .errors import ParameterError


@dataclass(frozen=True)
class KMeansParams:
    n_clusters: int
    max_iterations: int = 1000
    tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ParameterError("n_clusters must be >= 1")
        if self.tolerance < 0:
            raise ParameterError("tolerance must be >= 0")
        if self.max_iterations < 0:
            raise ParameterError("max_iterations must be >= 0")


@dataclass
class KMeansResult:
    centers: np.ndarray
    assignment: np.ndarray
    objective: float
    iterations: int
    converged: bool
    # Sum of Euclidean / squared distances after each assignment step.
    history: list[float] = field(default_factory=list)
    sq_history: list[float] = field(default_factory=list)


def _assign(X, centers):
    D = pairwise_to(centers, X)
    labels = np.argmin(D, axis=0)
    d = D[labels, np.arange(X.shape[0])]
    return labels, d


def kmeans_run(data: Dataset, params: KMeansParams) -> KMeansResult:
    if params.n_clusters > data.size:
        raise ParameterError(f"n_clusters={params.n_clusters} exceeds {data.size} points")
    X = data.X
    k = params.n_clusters
    rng = np.random.default_rng(params.seed)
    centers = X[rng.choice(data.size, size=k, replace=False)].copy()
    labels, d = _assign(X, centers)
    history, sq_history = [float(d.sum())], [float((d * d).sum())]
    converged = False
    it = 0
    while it < params.max_iterations:
        it += 1
        new = centers.copy()
        for c in range(k):
            hit = labels == c
            if hit.any():
                new[c] = X[hit].mean(axis=0)
            else:
                far = int(np.argmax(((X - centers[c]) ** 2).sum(axis=1)))
                new[c] = X[far]
        shift = float(np.sqrt(((new - centers) ** 2).sum(axis=1)).max())
        centers = new
        labels, d = _assign(X, centers)
        history.append(float(d.sum()))
        sq_history.append(float((d * d).sum()))
        if shift < params.tolerance:
            converged = True
            break
    return KMeansResult(centers, labels.astype(np.int64), float(d.sum()), it, converged,
                        history, sq_history)
