"""Cluster radii, sphere neighborhoods and candidate lists."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Dataset, Solution, distances_to

# Sentinel for a V'(k) that has never been recorded (treated as +infinity).
UNSET = np.iinfo(np.int64).max


class RadiusMode(str, enum.Enum):
    SMALL = "small"
    STANDARD = "standard"
    LARGE = "large"


def _member_distances(members: np.ndarray, centroid: int, data: Dataset):
    others = members[members != centroid]
    return others, distances_to(data.X[others], data.X[centroid])


def radius(cluster_members, centroid: int, mode: RadiusMode | str, data: Dataset) -> float:
    """Sphere radius of one cluster.

    ``standard`` divides the summed member-to-centroid distance by the cluster
    size *including* the centroid; ``small`` is half of that; ``large`` is the
    largest member distance.
    """
    members = np.asarray(cluster_members, dtype=np.int64)
    _, d = _member_distances(members, centroid, data)
    return _radius_from(d, members.size, RadiusMode(mode))


def _radius_from(d: np.ndarray, cluster_size: int, mode: RadiusMode) -> float:
    if d.size == 0:
        return 0.0
    if mode is RadiusMode.LARGE:
        return float(d.max())
    r = float(d.sum()) / cluster_size
    return r / 2 if mode is RadiusMode.SMALL else r


def component_neighborhood(cluster_members, centroid: int, r: float, data: Dataset) -> np.ndarray:
    """Members within distance ``r`` of the centroid, the centroid itself excluded."""
    members = np.asarray(cluster_members, dtype=np.int64)
    others, d = _member_distances(members, centroid, data)
    return others[d <= r]


@dataclass
class ClusterCandidates:
    """Candidate data for one cluster.

    ``neighborhood`` is N(i) sorted ascending by cost (point index breaks ties),
    ``costs_q`` the matching fixed-point V(k) values and ``candidates`` the
    first ``n`` entries of ``neighborhood``.
    """

    cluster: int
    radius: float
    neighborhood: np.ndarray
    costs_q: np.ndarray
    candidates: np.ndarray
    eps: int
    delta: int


@dataclass
class CandidateList:
    clusters: list[ClusterCandidates]

    @property
    def lists(self) -> list[np.ndarray]:
        return [c.candidates for c in self.clusters]

    @property
    def union(self) -> np.ndarray:
        if not self.clusters:
            return np.empty(0, dtype=np.int64)
        return np.concatenate(self.lists)

    def __len__(self) -> int:
        return sum(c.candidates.size for c in self.clusters)

    def costs(self, scale: float) -> dict[int, float]:
        """Per-point V(k) as floats, for every neighborhood member."""
        out = {}
        for c in self.clusters:
            for k, v in zip(c.neighborhood.tolist(), c.costs_q.tolist()):
                out[k] = v / scale
        return out


def cluster_candidates(i: int, members: np.ndarray, centroid: int, mode: RadiusMode | str,
                       data: Dataset, v_prime: np.ndarray | None = None,
                       rng: np.random.Generator | None = None,
                       full: bool = False) -> ClusterCandidates:
    """Build N(i), its costs V(k) and the candidate list CL(i) for one cluster.

    V(k) sums the distances from the centroid to every other neighborhood member
    except x_k. With ``full`` the whole sorted neighborhood is the candidate
    list; otherwise its length is ``eps + delta`` where ``eps`` counts members
    whose V(k) fell below their recorded V'(k) and ``delta`` is uniform on
    ``[0, |N(i)| - eps]``.
    """
    others, d = _member_distances(members, centroid, data)
    r = _radius_from(d, members.size, RadiusMode(mode))
    inside = d <= r
    nb = others[inside]
    dq = data.quantize(d[inside])
    costs = dq.sum() - dq
    order = np.lexsort((nb, costs))
    nb, costs = nb[order], costs[order]
    if full:
        eps, delta, n = nb.size, 0, nb.size
    else:
        vp = np.full(nb.size, UNSET, dtype=np.int64) if v_prime is None else v_prime[nb]
        eps = int(np.count_nonzero(costs < vp))
        room = nb.size - eps
        delta = int(rng.integers(0, room, endpoint=True)) if room > 0 else 0
        n = min(eps + delta, nb.size)
    return ClusterCandidates(i, r, nb, costs, nb[:n], eps, delta)


def _rng_for(rng, i: int):
    if rng is None or isinstance(rng, np.random.Generator):
        return rng
    return rng[i]


def create_candidate_list(solution: Solution, mode: RadiusMode | str,
                          v_prime: np.ndarray | None,
                          rng: np.random.Generator | Sequence[np.random.Generator],
                          data: Dataset) -> CandidateList:
    """Intensification candidate lists for every cluster.

    ``v_prime`` holds each point's fixed-point V'(k) (``UNSET`` = never recorded);
    ``None`` means no local optimum yet. ``rng`` is one generator shared across
    clusters in index order, or a sequence with one generator per cluster.
    """
    out = []
    for i, members in enumerate(solution.clusters()):
        out.append(cluster_candidates(i, members, solution.centroids[i], mode, data,
                                      v_prime, _rng_for(rng, i)))
    return CandidateList(out)


def diversification_candidates(solution: Solution, mode: RadiusMode | str, data: Dataset) -> CandidateList:
    """The entire neighborhood NB as candidate list, each CL(i) sorted by cost."""
    return CandidateList([
        cluster_candidates(i, members, solution.centroids[i], mode, data, full=True)
        for i, members in enumerate(solution.clusters())
    ])
