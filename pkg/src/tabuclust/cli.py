"""Command-line entry point: ``tabuclust {run,compare,speedup,synth}``."""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import TabuClustError
from .experiment import (ExperimentConfig, compare, run_experiment, speedup_sweep, summary_line,
                         write_speedup)
from .io import FORMATS, synthetic_points, write_points_csv

# Data point counts of the large-dataset speedup table.
SPEEDUP_SIZES = (931, 1766, 2512, 3180, 3817, 4396, 4936, 5386, 5834, 6257, 6706)


def _experiment_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dataset", required=True, help="path to a comma-separated dataset file")
    p.add_argument("--format", dest="fmt", default="csv-label-last", choices=FORMATS)
    p.add_argument("--delimiter", default=",",
                   help="field separator; 'whitespace' splits on runs of blanks")
    p.add_argument("--header", action="store_true", help="skip the first non-blank line")
    p.add_argument("--ignore-column", type=int, action="append", default=[],
                   help="0-based column to drop before parsing (repeatable)")
    p.add_argument("--algo", dest="algorithm", default="ts", choices=("ts", "kmeans"))
    p.add_argument("--k", dest="n_clusters", type=int, required=True, help="number of clusters")
    p.add_argument("--tenure", type=int, default=5)
    p.add_argument("--iters", dest="iterations", type=int, default=1000)
    p.add_argument("--radius", default="standard", choices=("small", "standard", "large"))
    p.add_argument("--max-ni", dest="max_no_improve", type=int, default=50)
    p.add_argument("--partitions", dest="n_partitions", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalize", action="store_true", help="min-max scale every attribute")
    p.add_argument("--acceptance", default="improving", choices=("improving", "best"))
    p.add_argument("--no-timing", dest="record_timing", action="store_false",
                   help="write wall_seconds as 0 for reproducible reports")
    p.add_argument("--out", dest="output", help="output prefix for <out>.csv and <out>.json")


def _config(ns: argparse.Namespace) -> ExperimentConfig:
    fields = {k: v for k, v in vars(ns).items() if k in ExperimentConfig.__dataclass_fields__}
    fields["delimiter"] = None if ns.delimiter == "whitespace" else ns.delimiter
    fields["ignore_columns"] = tuple(ns.ignore_column)
    return ExperimentConfig(**fields)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabuclust", description=__doc__)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="repeat one algorithm over seeded runs")
    _experiment_args(p)

    p = sub.add_parser("compare", help="run ts and kmeans on the same seeds plus a paired test")
    _experiment_args(p)

    p = sub.add_parser("speedup", help="sequential vs partitioned timing on synthetic 2-D data")
    p.add_argument("--sizes", type=int, nargs="+", default=list(SPEEDUP_SIZES))
    p.add_argument("--workers", type=int, nargs="+", default=[1, 2, 3, 4])
    p.add_argument("--k", dest="n_clusters", type=int, default=5)
    p.add_argument("--iters", dest="iterations", type=int, default=1000)
    p.add_argument("--tenure", type=int, default=5)
    p.add_argument("--radius", default="standard", choices=("small", "standard", "large"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", required=True)

    p = sub.add_parser("synth", help="write uniform 2-D points as CSV")
    p.add_argument("--n", dest="n_points", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if ns.command == "run":
            report = run_experiment(_config(ns))
            print(summary_line(report))
        elif ns.command == "compare":
            a, b, test = compare(_config(ns))
            print(summary_line(a))
            print(summary_line(b))
            if test is not None:
                print(f"wilcoxon: V={test.statistic:g} p={test.pvalue:.4g} ({test.method}, n={test.n})")
        elif ns.command == "speedup":
            rows = speedup_sweep(ns.sizes, ns.workers, n_clusters=ns.n_clusters,
                                 iterations=ns.iterations, tenure=ns.tenure, radius=ns.radius,
                                 seed=ns.seed)
            write_speedup(rows, ns.output)
            for r in rows:
                print(f"n={r.n_points} workers={r.workers} E_r={r.ratio:.3f}")
        elif ns.command == "synth":
            write_points_csv(ns.output, synthetic_points(ns.n_points, ns.seed))
    except (TabuClustError, OSError) as exc:
        print(f"tabuclust: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
