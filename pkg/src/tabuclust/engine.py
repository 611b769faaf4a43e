"""In-process partitioned map/reduce engine.

The dataset is cut into ``N_mr`` contiguous blocks. Assignment and move
pricing run map-side, one task per block; per-cluster candidate lists run
reduce-side, with the clusters grouped into ``N_mr`` blocks. Tasks go to a
thread pool whose size is set independently of ``N_mr``. Results are always
merged in block order and all sums are integer, so the outcome never depends
on the partitioning or on scheduling.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Dataset, Solution, assign_rows, check_centroids, pairwise_to
from .errors import EngineIntegrityError, ParameterError
from .neighborhood import CandidateList, RadiusMode, cluster_candidates

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionedDataset:
    """``N_mr`` disjoint contiguous index ranges covering ``[0, N_p)``."""

    blocks: tuple[range, ...]

    @classmethod
    def split(cls, n_points: int, n_partitions: int) -> "PartitionedDataset":
        if n_partitions < 1:
            raise ParameterError("need at least one partition")
        if n_partitions > n_points:
            log.warning("clamping %d partitions to %d points", n_partitions, n_points)
            n_partitions = n_points
        base, extra = divmod(n_points, n_partitions)
        blocks, start = [], 0
        for b in range(n_partitions):
            stop = start + base + (b < extra)
            blocks.append(range(start, stop))
            start = stop
        return cls(tuple(blocks))

    @property
    def n_partitions(self) -> int:
        return len(self.blocks)

    @property
    def n_points(self) -> int:
        return sum(len(b) for b in self.blocks)


@dataclass
class PartialCluster:
    """Members of one cluster found in one block, with their partial distance sum."""

    cluster: int
    members: np.ndarray
    pv: float
    pv_q: int
    nearest_q: np.ndarray
    second_q: np.ndarray


def map_assign(block: range, centroids: Sequence[int], data: Dataset) -> list[PartialCluster]:
    """Assign the points of ``block`` to their closest centroids.

    Emits one :class:`PartialCluster` per cluster that received points, keyed by
    cluster position (``<centerId, pointList>``), in cluster order.
    """
    centroids = check_centroids(centroids, data)
    rows = np.arange(block.start, block.stop, dtype=np.int64)
    if rows.size == 0:
        return []
    labels, nearest, second = assign_rows(rows, centroids, data)
    out = []
    for pos in range(len(centroids)):
        hit = labels == pos
        if not hit.any():
            continue
        pq = int(nearest[hit].sum())
        out.append(PartialCluster(pos, rows[hit], data.to_float(pq), pq, nearest[hit], second[hit]))
    return out


def reduce_merge(partials: Sequence[PartialCluster], centroids: Sequence[int], data: Dataset) -> Solution:
    """Merge per-block partial clusters into a full :class:`Solution`.

    ``partials`` must be given in block order and cover every point exactly once.
    """
    n = data.size
    assignment = np.full(n, -1, dtype=np.int64)
    nearest = np.zeros(n, dtype=np.int64)
    second = np.zeros(n, dtype=np.int64)
    seen = 0
    v_q = [0] * len(centroids)
    for pc in partials:
        if (assignment[pc.members] != -1).any():
            raise EngineIntegrityError(f"point assigned twice while merging cluster {pc.cluster}")
        assignment[pc.members] = pc.cluster
        nearest[pc.members] = pc.nearest_q
        second[pc.members] = pc.second_q
        v_q[pc.cluster] += pc.pv_q
        seen += pc.members.size
    if seen != n or (assignment < 0).any():
        raise EngineIntegrityError(f"map outputs cover {seen} of {n} points")
    return Solution(centroids, assignment, sum(v_q), data.scale, nearest, second)


class Engine:
    """Runs the map/reduce phases of the search over ``n_partitions`` blocks.

    ``workers`` is the thread-pool size; with one worker everything runs inline.
    Use as a context manager or call :meth:`close`.
    """

    def __init__(self, data: Dataset, n_partitions: int = 1, workers: int = 1):
        if workers < 1:
            raise ParameterError("need at least one worker")
        self.data = data
        self.partition = PartitionedDataset.split(data.size, n_partitions)
        self.workers = workers
        self._pool = ThreadPoolExecutor(workers) if workers > 1 else None

    @property
    def n_partitions(self) -> int:
        return self.partition.n_partitions

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown()
            self._pool = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _map(self, fn: Callable, items: Sequence) -> list:
        if self._pool is None or len(items) == 1:
            return [fn(x) for x in items]
        return list(self._pool.map(fn, items))

    def assign(self, centroids: Sequence[int]) -> Solution:
        centroids = check_centroids(centroids, self.data)
        per_block = self._map(lambda b: map_assign(b, centroids, self.data), self.partition.blocks)
        partials = [pc for block in per_block for pc in block]
        if sum(len(b) for b in self.partition.blocks) != self.data.size:
            raise EngineIntegrityError("blocks do not cover the dataset")
        return reduce_merge(partials, centroids, self.data)

    def candidate_lists(self, solution: Solution, mode: RadiusMode | str, full: bool,
                        v_prime: np.ndarray | None = None,
                        rngs: Sequence[np.random.Generator] | None = None) -> CandidateList:
        """Per-cluster candidate lists, clusters grouped into ``n_partitions`` blocks."""
        clusters = solution.clusters()
        groups = [g for g in np.array_split(np.arange(len(clusters)), self.n_partitions) if g.size]

        def build(group):
            return [cluster_candidates(int(i), clusters[i], solution.centroids[i], mode, self.data,
                                       v_prime, None if rngs is None else rngs[i], full=full)
                    for i in group]

        merged = [cc for chunk in self._map(build, groups) for cc in chunk]
        merged.sort(key=lambda cc: cc.cluster)
        return CandidateList(merged)

    def evaluate_moves(self, solution: Solution, cl: CandidateList) -> list[np.ndarray]:
        """Fixed-point objective of every single-centroid substitution in ``cl``.

        Returns one int64 array per cluster, aligned with that cluster's
        candidates. Moving cluster ``i``'s centroid to ``x_k`` leaves each point
        at ``min(d(p, x_k), d(p, nearest other centroid))`` if it sat in cluster
        ``i`` and at ``min(d(p, x_k), d(p, own centroid))`` otherwise.
        """
        X = self.data.X
        lists = cl.lists
        live = [i for i, cand in enumerate(lists) if cand.size]
        bases = {i: np.where(solution.assignment == i, solution.second_q, solution.nearest_q)
                 for i in live}

        def price(block: range):
            sl = slice(block.start, block.stop)
            out = {}
            for i in live:
                dq = self.data.quantize(pairwise_to(X[lists[i]], X[sl]))
                np.minimum(dq, bases[i][sl][None, :], out=dq)
                out[i] = dq.sum(axis=1)
            return out

        totals = {i: np.zeros(lists[i].size, dtype=np.int64) for i in live}
        for part in self._map(price, self.partition.blocks):
            for i in live:
                totals[i] += part[i]
        return [totals.get(i, np.empty(0, dtype=np.int64)) for i in range(len(lists))]
