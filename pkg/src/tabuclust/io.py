"""Dataset files, synthetic data and report writers."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .core import Dataset
from .errors import IngestionError

FORMATS = ("csv-label-last", "csv-label-first", "csv-no-label")


def _split(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None:
        return line.split()
    return [c.strip() for c in line.split(delimiter)]


def load_dataset(path, fmt: str = "csv-label-last", *, delimiter: str | None = ",",
                 header: bool = False, ignore_columns=(), normalize: bool = False) -> Dataset:
    """Parse a text dataset, one record per line.

    ``delimiter=None`` splits on runs of whitespace. Columns listed in
    ``ignore_columns`` (0-based, counted before the label is removed) are
    dropped, e.g. the sequence-name column of the UCI Yeast file. Blank lines
    are skipped. Errors name the offending 1-based line.
    """
    if fmt not in FORMATS:
        raise IngestionError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc

    ignore = set(ignore_columns)
    rows, labels = [], []
    width = None
    skip_header = header
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if skip_header:
            skip_header = False
            continue
        cells = [c for j, c in enumerate(_split(line, delimiter)) if j not in ignore]
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise IngestionError(f"{path}:{lineno}: expected {width} columns, found {len(cells)}")
        if fmt == "csv-label-last":
            attrs, label = cells[:-1], cells[-1]
        elif fmt == "csv-label-first":
            attrs, label = cells[1:], cells[0]
        else:
            attrs, label = cells, None
        if not attrs:
            raise IngestionError(f"{path}:{lineno}: no attribute columns")
        try:
            values = [float(c) for c in attrs]
        except ValueError:
            bad = next(c for c in attrs if not _is_number(c))
            raise IngestionError(f"{path}:{lineno}: non-numeric attribute {bad!r}") from None
        if not all(math.isfinite(v) for v in values):
            raise IngestionError(f"{path}:{lineno}: non-finite attribute value")
        rows.append(values)
        labels.append(label)
    if not rows:
        raise IngestionError(f"{path}: no records")
    if len(rows) < 2:
        raise IngestionError(f"{path}: need at least two records")
    return Dataset(np.array(rows), None if fmt == "csv-no-label" else labels, normalize=normalize)


def _is_number(c: str) -> bool:
    try:
        float(c)
    except ValueError:
        return False
    return True


def synthetic_points(n_points: int, seed: int = 0, extent: float = 1000.0) -> np.ndarray:
    """Uniform 2-D points on ``[0, extent)^2``."""
    rng = np.random.default_rng(seed)
    return rng.uniform(0.0, extent, size=(n_points, 2))


def synthetic_dataset(n_points: int, seed: int = 0) -> Dataset:
    return Dataset(synthetic_points(n_points, seed))


def write_points_csv(path, X: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        for row in X:
            w.writerow([repr(float(v)) for v in row])


def write_csv(path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def write_json(path, payload) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
