"""Initial solution by maximum sum-of-distances centroid selection."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Dataset, Solution, assign_closest, distances_to
from .errors import ParameterError


@dataclass(frozen=True)
class SeedChoice:
    """How the first centroid is chosen: ``first_centroid`` if given, else drawn from ``rng_seed``."""

    rng_seed: int = 0
    first_centroid: int | None = None

    def pick(self, n_points: int) -> int:
        if self.first_centroid is not None:
            if not 0 <= self.first_centroid < n_points:
                raise ParameterError(f"first centroid {self.first_centroid} outside [0, {n_points})")
            return int(self.first_centroid)
        return int(np.random.default_rng(self.rng_seed).integers(n_points))


def create_initial_solution(data: Dataset, n_clusters: int, seed: SeedChoice | int = 0) -> Solution:
    """Pick a random first centroid, then repeatedly add the point farthest (in summed
    distance) from the centroids chosen so far; finally assign every point to its
    closest centroid.

    Ties on the summed distance go to the lowest point index.
    """
    if not isinstance(seed, SeedChoice):
        seed = SeedChoice(rng_seed=int(seed))
    if not 2 <= n_clusters <= data.size:
        raise ParameterError(f"number of clusters must be in [2, {data.size}], got {n_clusters}")
    first = seed.pick(data.size)
    chosen = [first]
    selected = np.zeros(data.size, dtype=bool)
    selected[first] = True
    # Running sum of distances from every point to the chosen centroids.
    total = distances_to(data.X, data.X[first])
    while len(chosen) < n_clusters:
        cand = np.where(selected, -1.0, total)
        nxt = int(np.argmax(cand))
        chosen.append(nxt)
        selected[nxt] = True
        total = total + distances_to(data.X, data.X[nxt])
    return assign_closest(chosen, data)
