"""Tabu search clustering with centroid-driven moves and a partitioned map/reduce engine."""

from .core import DataPoint, Dataset, Solution, assign_closest, objective, score, v_sum
from .engine import Engine, PartitionedDataset, map_assign, reduce_merge
from .neighborhood import (CandidateList, RadiusMode, component_neighborhood,
                           create_candidate_list, diversification_candidates, radius)
from .search import (Acceptance, SearchParams, SearchResult, TabuList, apply_move,
                     parallel_ts, run, ts_step)
from .seeding import SeedChoice, create_initial_solution

__version__ = "0.1.0"
