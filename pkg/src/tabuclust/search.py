"""Tabu search over centroid sets.

Each iteration builds candidate lists for the current solution, prices every
single-centroid substitution and takes the best admissible one. A move is
admissible when the incoming point is not tabu and the move beats the local
best solution, or when it beats the best solution found so far
(aspiration). After ``max_no_improve`` iterations without a new global best
the search switches between the intensification lists (randomly truncated)
and diversification (the whole neighborhood). It stops when the iteration
budget runs out or when two consecutive phases fail to improve.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .core import OBJECTIVE_ATOL, Dataset, Solution
from .engine import Engine
from .errors import MoveError, ParameterError
from .neighborhood import UNSET, CandidateList, RadiusMode
from .seeding import SeedChoice, create_initial_solution

log = logging.getLogger(__name__)


class Phase(str, enum.Enum):
    INTENSIFICATION = "intensification"
    DIVERSIFICATION = "diversification"


class Acceptance(str, enum.Enum):
    # Only moves that beat the local best S' are taken; S' carries over.
    IMPROVING = "improving"
    # S' is reset every iteration, so the best admissible move is taken even when worse.
    BEST = "best"


@dataclass(frozen=True)
class SearchParams:
    n_clusters: int
    tenure: int = 5
    max_iterations: int = 1000
    radius: RadiusMode = RadiusMode.STANDARD
    max_no_improve: int = 50
    n_partitions: int = 1
    workers: int = 1
    seed: int = 0
    first_centroid: int | None = None
    acceptance: Acceptance = Acceptance.IMPROVING

    def __post_init__(self):
        object.__setattr__(self, "radius", RadiusMode(self.radius))
        object.__setattr__(self, "acceptance", Acceptance(self.acceptance))
        if self.tenure < 1:
            raise ParameterError(f"tabu tenure must be >= 1, got {self.tenure}")
        if self.max_iterations < 0:
            raise ParameterError(f"iteration budget must be >= 0, got {self.max_iterations}")
        if self.max_no_improve < 1:
            raise ParameterError(f"MaxNI must be >= 1, got {self.max_no_improve}")
        if self.n_clusters < 2:
            raise ParameterError(f"number of clusters must be >= 2, got {self.n_clusters}")
        if self.n_partitions < 1 or self.workers < 1:
            raise ParameterError("partitions and workers must be >= 1")


class TabuList:
    """Per-point iteration number until which the point may not re-enter the centroid set."""

    def __init__(self, n_points: int, tenure: int):
        self.tenure = tenure
        self.expiry = np.zeros(n_points, dtype=np.int64)

    def is_tabu(self, j: int, iteration: int) -> bool:
        return bool(self.expiry[j] > iteration)

    def release(self, j: int, iteration: int) -> None:
        """Record that ``j`` left the centroid set at ``iteration``."""
        self.expiry[j] = iteration + self.tenure


@dataclass
class MoveRecord:
    """One iteration of the search, as logged in :attr:`SearchResult.trace`."""

    iteration: int
    phase: Phase
    evaluated: int
    cluster: int | None = None
    incoming: int | None = None
    outgoing: int | None = None
    objective: float | None = None
    local_before: float = 0.0
    best_before: float = 0.0
    best_after: float = 0.0
    tabu: bool = False
    aspiration: bool = False
    no_improve: int = 0
    phase_switched: bool = False


@dataclass
class SearchState:
    current: Solution
    local_best: Solution
    global_best: Solution
    iteration: int = 0
    no_improve: int = 0
    max_no_improve: int = 50
    phase: Phase = Phase.INTENSIFICATION
    phase_failures: int = 0
    phase_improved: bool = False
    v_prime: np.ndarray | None = None
    record_v_prime: bool = False


@dataclass
class SearchResult:
    best: Solution
    initial: Solution
    iterations: int
    stop_reason: str
    trace: list[MoveRecord] = field(default_factory=list)

    @property
    def objective(self) -> float:
        return self.best.objective


def apply_move(current: Solution, cluster_i: int, new_centroid: int, data: Dataset,
               engine: Engine | None = None) -> Solution:
    """Replace cluster ``cluster_i``'s centroid by ``new_centroid`` and reassign all points."""
    if not 0 <= cluster_i < current.n_clusters:
        raise MoveError(f"no cluster {cluster_i}")
    if new_centroid == current.centroids[cluster_i]:
        raise MoveError(f"point {new_centroid} is already the centroid of cluster {cluster_i}")
    if current.assignment[new_centroid] != cluster_i:
        raise MoveError(f"point {new_centroid} is not in cluster {cluster_i}")
    centroids = list(current.centroids)
    centroids[cluster_i] = new_centroid
    if engine is None:
        engine = Engine(data)
    return engine.assign(centroids)


def _cluster_rngs(seed: int, iteration: int, n_clusters: int) -> list[np.random.Generator]:
    # Keyed by (seed, iteration, cluster) so the draws do not depend on execution order.
    return [np.random.default_rng([seed, iteration, i]) for i in range(n_clusters)]


def candidate_lists(state: SearchState, params: SearchParams, engine: Engine) -> CandidateList:
    full = state.phase is Phase.DIVERSIFICATION
    rngs = None if full else _cluster_rngs(params.seed, state.iteration, params.n_clusters)
    cl = engine.candidate_lists(state.current, params.radius, full, state.v_prime, rngs)
    if state.record_v_prime:
        if state.v_prime is None:
            state.v_prime = np.full(engine.data.size, UNSET, dtype=np.int64)
        for cc in cl.clusters:
            state.v_prime[cc.neighborhood] = cc.costs_q
        state.record_v_prime = False
    return cl


def ts_step(state: SearchState, cl: CandidateList, tabu: TabuList, data: Dataset,
            engine: Engine | None = None,
            acceptance: Acceptance = Acceptance.IMPROVING) -> MoveRecord:
    """Advance ``state`` by one iteration using the candidate lists ``cl``.

    Mutates ``state`` and ``tabu`` in place and returns the iteration's log record.
    """
    if engine is None:
        engine = Engine(data)
    it = state.iteration
    tol = int(np.ceil(OBJECTIVE_ATOL * data.scale))
    best_q = state.global_best.objective_q
    local_q = state.local_best.objective_q if acceptance is Acceptance.IMPROVING else None
    rec = MoveRecord(it, state.phase, len(cl),
                     local_before=state.local_best.objective,
                     best_before=state.global_best.objective)

    pick = None  # (objective_q, cluster, position in list)
    for i, z in enumerate(engine.evaluate_moves(state.current, cl)):
        if z.size == 0:
            continue
        cand = cl.lists[i]
        tabu_mask = tabu.expiry[cand] > it
        aspire = z < best_q - tol
        if local_q is None:
            ok = ~tabu_mask | aspire
        else:
            ok = (~tabu_mask & (z < local_q - tol)) | aspire
        if not ok.any():
            continue
        zz = np.where(ok, z, np.iinfo(np.int64).max)
        j = int(np.argmin(zz))
        if pick is None or zz[j] < pick[0]:
            pick = (int(zz[j]), i, j)

    improved = False
    if pick is not None:
        _, i, j = pick
        incoming = int(cl.lists[i][j])
        outgoing = state.current.centroids[i]
        centroids = list(state.current.centroids)
        centroids[i] = incoming
        new = engine.assign(centroids)
        rec.cluster, rec.incoming, rec.outgoing = i, incoming, outgoing
        rec.objective = new.objective
        rec.tabu = tabu.is_tabu(incoming, it)
        rec.aspiration = rec.tabu
        tabu.release(outgoing, it)
        prev_local = state.local_best.objective_q
        state.current = new
        state.local_best = new
        if acceptance is Acceptance.IMPROVING or new.objective_q < prev_local - tol:
            state.record_v_prime = True
        if new.objective_q < state.global_best.objective_q - tol:
            state.global_best = new
            improved = True
    elif acceptance is Acceptance.BEST:
        state.local_best = state.current

    if improved:
        state.no_improve = 0
        state.phase_improved = True
    else:
        state.no_improve += 1
    state.iteration += 1
    rec.best_after = state.global_best.objective
    rec.no_improve = state.no_improve
    return rec


def run(data: Dataset, params: SearchParams, engine: Engine | None = None,
        trace: bool = False) -> SearchResult:
    """Run the full search and return the best solution found.

    Without ``engine`` the search runs sequentially (one block, no pool).
    """
    if not 2 <= params.n_clusters <= data.size:
        raise ParameterError(f"number of clusters must be in [2, {data.size}], got {params.n_clusters}")
    own = engine is None
    if own:
        engine = Engine(data)
    try:
        seed = SeedChoice(rng_seed=params.seed, first_centroid=params.first_centroid)
        first = seed.pick(data.size)
        initial = create_initial_solution(data, params.n_clusters, SeedChoice(params.seed, first))
        initial = engine.assign(initial.centroids)
        state = SearchState(initial, initial, initial, max_no_improve=params.max_no_improve)
        tabu = TabuList(data.size, params.tenure)
        records: list[MoveRecord] = []
        stop = "iteration budget"
        while state.iteration < params.max_iterations:
            cl = candidate_lists(state, params, engine)
            rec = ts_step(state, cl, tabu, data, engine, params.acceptance)
            if state.no_improve >= state.max_no_improve:
                state.phase_failures = 0 if state.phase_improved else state.phase_failures + 1
                if state.phase_failures >= 2:
                    stop = "no improvement in either phase"
                    if trace:
                        records.append(rec)
                    break
                state.phase = (Phase.DIVERSIFICATION if state.phase is Phase.INTENSIFICATION
                               else Phase.INTENSIFICATION)
                state.no_improve = 0
                state.phase_improved = False
                rec.phase_switched = True
                log.debug("iteration %d: switching to %s", state.iteration, state.phase.value)
            if trace:
                records.append(rec)
        return SearchResult(state.global_best, initial, state.iteration, stop, records)
    finally:
        if own:
            engine.close()


def parallel_ts(data: Dataset, params: SearchParams, trace: bool = False) -> SearchResult:
    """:func:`run` on an engine with ``params.n_partitions`` blocks and ``params.workers`` threads."""
    with Engine(data, params.n_partitions, params.workers) as engine:
        return run(data, params, engine, trace=trace)
