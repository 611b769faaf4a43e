"""Seeded repetitions, aggregate statistics, paired comparisons and speedup sweeps."""

from __future__ import annotations

import logging
import statistics
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from .core import Dataset
from .errors import ParameterError
from .io import FORMATS, load_dataset, synthetic_dataset, write_csv, write_json
from .kmeans import KMeansParams, kmeans_run
from .metrics import WilcoxonResult, accelerating_ratio, accuracy, wilcoxon_signed_rank
from .neighborhood import RadiusMode
from .search import Acceptance, SearchParams, parallel_ts, run

log = logging.getLogger(__name__)

ALGORITHMS = ("ts", "kmeans")
CSV_COLUMNS = ["run_index", "seed", "objective", "accuracy", "wall_seconds"]


@dataclass
class ExperimentConfig:
    dataset: str | None = None
    fmt: str = "csv-label-last"
    delimiter: str | None = ","
    header: bool = False
    ignore_columns: tuple[int, ...] = ()
    algorithm: str = "ts"
    n_clusters: int = 3
    tenure: int = 5
    iterations: int = 1000
    radius: str = "standard"
    max_no_improve: int = 50
    n_partitions: int = 1
    workers: int = 1
    runs: int = 10
    seed: int = 0
    normalize: bool = False
    output: str | None = None
    acceptance: str = "improving"
    # With timing off, wall_seconds is written as 0 so reports are reproducible byte for byte.
    record_timing: bool = True

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ParameterError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.fmt not in FORMATS:
            raise ParameterError(f"unknown dataset format {self.fmt!r}")
        if self.runs < 1:
            raise ParameterError("runs must be >= 1")
        if self.n_clusters < 1:
            raise ParameterError("n_clusters must be >= 1")
        RadiusMode(self.radius)
        Acceptance(self.acceptance)
        # Surface range errors before any data is read.
        if self.algorithm == "ts":
            self.search_params(self.seed)
        else:
            self.kmeans_params(self.seed)

    def search_params(self, seed: int) -> SearchParams:
        return SearchParams(n_clusters=self.n_clusters, tenure=self.tenure,
                            max_iterations=self.iterations, radius=self.radius,
                            max_no_improve=self.max_no_improve, n_partitions=self.n_partitions,
                            workers=self.workers, seed=seed, acceptance=self.acceptance)

    def kmeans_params(self, seed: int) -> KMeansParams:
        return KMeansParams(self.n_clusters, max_iterations=self.iterations, seed=seed)

    def load(self) -> Dataset:
        if self.dataset is None:
            raise ParameterError("no dataset path configured")
        return load_dataset(self.dataset, self.fmt, delimiter=self.delimiter, header=self.header,
                            ignore_columns=self.ignore_columns, normalize=self.normalize)


@dataclass
class RunRecord:
    run_index: int
    seed: int
    objective: float
    accuracy: float | None
    wall_seconds: float


@dataclass
class RunReport:
    algorithm: str
    config: dict
    records: list[RunRecord] = field(default_factory=list)
    paired: dict | None = None
    status: str = "ok"
    error: str | None = None

    @staticmethod
    def _stats(values: list[float]) -> tuple[float | None, float | None]:
        if not values:
            return None, None
        mean = statistics.fmean(values)
        return mean, statistics.stdev(values) if len(values) > 1 else 0.0

    @property
    def accuracies(self) -> list[float]:
        return [r.accuracy for r in self.records if r.accuracy is not None]

    @property
    def mean_accuracy(self) -> float:
        return self._stats(self.accuracies)[0]

    @property
    def std_accuracy(self) -> float:
        """Sample standard deviation (0 for a single run)."""
        return self._stats(self.accuracies)[1]

    def aggregates(self) -> dict:
        out = {}
        for name, values in [("objective", [r.objective for r in self.records]),
                             ("accuracy", self.accuracies),
                             ("wall_seconds", [r.wall_seconds for r in self.records])]:
            mean, std = self._stats(values)
            out[name] = {"mean": mean, "std": std}
        return out

    def rows(self) -> list[list]:
        return [[r.run_index, r.seed, repr(r.objective),
                 "" if r.accuracy is None else repr(r.accuracy), repr(r.wall_seconds)]
                for r in self.records]

    def to_dict(self) -> dict:
        return {"algorithm": self.algorithm, "config": self.config, "status": self.status,
                "error": self.error, "runs": [asdict(r) for r in self.records],
                "aggregates": self.aggregates() if self.records else None,
                "paired_test": self.paired}

    def write(self, output: str | Path) -> tuple[Path, Path]:
        """Write ``<output>.csv`` and ``<output>.json``."""
        base = Path(output)
        if base.suffix in (".csv", ".json"):
            base = base.with_suffix("")
        base.parent.mkdir(parents=True, exist_ok=True)
        csv_path, json_path = base.with_suffix(".csv"), base.with_suffix(".json")
        write_csv(csv_path, CSV_COLUMNS, self.rows())
        write_json(json_path, self.to_dict())
        return csv_path, json_path


def run_once(data: Dataset, config: ExperimentConfig, seed: int):
    """One seeded run; returns ``(objective, assignment, wall_seconds)``."""
    t0 = time.perf_counter()
    if config.algorithm == "ts":
        params = config.search_params(seed)
        if params.n_partitions > 1 or params.workers > 1:
            res = parallel_ts(data, params)
        else:
            res = run(data, params)
        objective, assignment = res.best.objective, res.best.assignment
    else:
        res = kmeans_run(data, config.kmeans_params(seed))
        objective, assignment = res.objective, res.assignment
    return objective, assignment, time.perf_counter() - t0


def run_experiment(config: ExperimentConfig, data: Dataset | None = None) -> RunReport:
    """Run ``config.runs`` repetitions with seeds ``seed + run_index``.

    Writes CSV and JSON when ``config.output`` is set. If a run fails, the
    runs completed so far are written with ``status = "failed"`` and the error
    is re-raised.
    """
    report = RunReport(config.algorithm, asdict(config))
    try:
        if data is None:
            data = config.load()
        for idx in range(config.runs):
            seed = config.seed + idx
            obj, assignment, secs = run_once(data, config, seed)
            acc = accuracy(assignment, data.labels).accuracy if data.labels is not None else None
            report.records.append(RunRecord(idx, seed, obj, acc,
                                            secs if config.record_timing else 0.0))
            log.info("%s run %d seed %d: objective %.6g accuracy %s",
                     config.algorithm, idx, seed, obj, acc)
    except Exception as exc:
        report.status, report.error = "failed", f"{type(exc).__name__}: {exc}"
        if config.output:
            report.write(config.output)
        raise
    if config.output:
        report.write(config.output)
    return report


def paired_test(a: RunReport, b: RunReport) -> WilcoxonResult:
    return wilcoxon_signed_rank(a.accuracies, b.accuracies)


def compare(config: ExperimentConfig, other: str = "kmeans",
            data: Dataset | None = None) -> tuple[RunReport, RunReport, WilcoxonResult | None]:
    """Run ``config`` and the same config with ``algorithm=other`` on identical seeds."""
    if data is None:
        data = config.load()
    out = config.output
    first = ExperimentConfig(**{**asdict(config), "output": None})
    second = ExperimentConfig(**{**asdict(config), "algorithm": other, "output": None})
    ra, rb = run_experiment(first, data), run_experiment(second, data)
    test = None
    if ra.accuracies and len(ra.accuracies) >= 5:
        try:
            test = paired_test(ra, rb)
        except ValueError as exc:
            log.warning("paired test skipped: %s", exc)
    if test is not None:
        ra.paired = {"against": other, **asdict(test)}
    if out:
        ra.write(f"{out}_{config.algorithm}")
        rb.write(f"{out}_{other}")
    return ra, rb, test


@dataclass
class SpeedupRow:
    n_points: int
    workers: int
    t_sequential: float
    t_parallel: float
    ratio: float
    identical: bool


def speedup_sweep(sizes: Sequence[int], worker_counts: Sequence[int] = (1, 2, 3, 4),
                  n_clusters: int = 5, iterations: int = 1000, tenure: int = 5,
                  radius: str = "standard", seed: int = 0, data_seed: int = 0,
                  max_no_improve: int = 50) -> list[SpeedupRow]:
    """Time the sequential search against the partitioned one on synthetic 2-D data.

    The parallel runs use ``n_partitions = workers``. ``identical`` checks that
    both runs return the same solution.
    """
    rows = []
    for n in sizes:
        data = synthetic_dataset(n, seed=data_seed)
        base = SearchParams(n_clusters, tenure=tenure, max_iterations=iterations, radius=radius,
                            seed=seed, max_no_improve=max_no_improve)
        t0 = time.perf_counter()
        ref = run(data, base).best
        t_seq = time.perf_counter() - t0
        for w in worker_counts:
            params = SearchParams(**{**asdict(base), "n_partitions": w, "workers": w})
            t0 = time.perf_counter()
            got = parallel_ts(data, params).best
            t_par = time.perf_counter() - t0
            rows.append(SpeedupRow(n, w, t_seq, t_par, accelerating_ratio(t_seq, t_par), got == ref))
            log.info("n=%d workers=%d E_r=%.3f", n, w, rows[-1].ratio)
    return rows


def write_speedup(rows: Sequence[SpeedupRow], output: str | Path) -> None:
    base = Path(output).with_suffix("")
    base.parent.mkdir(parents=True, exist_ok=True)
    write_csv(base.with_suffix(".csv"), ["n_points", "workers", "t_sequential", "t_parallel", "ratio", "identical"],
              [[r.n_points, r.workers, repr(r.t_sequential), repr(r.t_parallel), repr(r.ratio), int(r.identical)]
               for r in rows])
    write_json(base.with_suffix(".json"), [asdict(r) for r in rows])


def summary_line(report: RunReport) -> str:
    agg = report.aggregates()
    acc = agg["accuracy"]
    acc_txt = "n/a" if acc["mean"] is None else f"{acc['mean']:.4f} (std {acc['std']:.4f})"
    return (f"{report.algorithm}: runs={len(report.records)} "
            f"objective={agg['objective']['mean']:.6g} accuracy={acc_txt} "
            f"time={agg['wall_seconds']['mean']:.3f}s")
