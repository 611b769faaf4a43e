"""Regenerate the bundled UCI datasets under ``data/``.

Iris and Wine are copied from the CSVs shipped inside scikit-learn.

Yeast is rebuilt from the one-vs-rest variants bundled in the ``keel-ds``
wheel (``pip download --no-deps keel-ds``). Row order differs between those
files and duplicate attribute vectors exist, so labels are recovered as
per-vector class counts:

  * full-size files give NUC, ME3, ME2, ME1 and EXC directly;
  * ``yeast-2_vs_4`` negatives are CYT, ``yeast-2_vs_8`` positives are POX,
    ``yeast-1-2-8-9_vs_7`` positives are VAC;
  * ERL is the rest of the ``yeast-1-2-8-9_vs_7`` negatives once NUC, CYT
    and POX are removed;
  * everything left is MIT.

Rows are written in the order of ``yeast1`` (the UCI order).

Usage: python scripts/build_datasets.py [path/to/keel_ds-*.whl]
"""

from __future__ import annotations

import csv
import sys
import zipfile
from collections import Counter
from pathlib import Path

import sklearn.datasets

ROOT = Path(__file__).resolve().parents[1]
DATA = ROOT / "data"

YEAST_COUNTS = {
    "CYT": 463, "NUC": 429, "MIT": 244, "ME3": 163, "ME2": 51,
    "ME1": 44, "EXC": 35, "VAC": 30, "POX": 20, "ERL": 5,
}


def _sklearn_csv(name: str, label_names: list[str], out: Path) -> None:
    src = Path(sklearn.datasets.__file__).parent / "data" / name
    with src.open() as fh:
        rows = list(csv.reader(fh))[1:]
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        for row in rows:
            w.writerow(row[:-1] + [label_names[int(row[-1])]])


def _read_keel(z: zipfile.ZipFile, name: str) -> list[tuple[tuple[float, ...], str]]:
    text = z.read(f"keel_ds/data/imbalanced/raw/{name}.dat").decode()
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("@"):
            continue
        parts = [p.strip() for p in line.split(",")]
        out.append((tuple(round(float(v), 2) for v in parts[:-1]), parts[-1]))
    return out


def _count(rows, tag: str) -> Counter:
    return Counter(f for f, t in rows if t == tag)


def build_yeast(wheel: Path, out: Path) -> None:
    z = zipfile.ZipFile(wheel)
    base = _read_keel(z, "yeast1")
    feats = [f for f, _ in base]
    total = Counter(feats)
    per_class: dict[str, Counter] = {"NUC": _count(base, "positive")}
    for name, cls in [("yeast3", "ME3"), ("yeast4", "ME2"), ("yeast5", "ME1"), ("yeast6", "EXC")]:
        rows = _read_keel(z, name)
        if Counter(f for f, _ in rows) != total:
            raise RuntimeError(f"{name} does not hold the full dataset")
        per_class[cls] = _count(rows, "positive")
    per_class["CYT"] = _count(_read_keel(z, "yeast-2_vs_4"), "negative")
    per_class["POX"] = _count(_read_keel(z, "yeast-2_vs_8"), "positive")
    mixed = _read_keel(z, "yeast-1-2-8-9_vs_7")
    per_class["VAC"] = _count(mixed, "positive")
    per_class["ERL"] = (_count(mixed, "negative")
                        - per_class["NUC"] - per_class["CYT"] - per_class["POX"])
    known = Counter()
    for c in per_class.values():
        known += c
    if known - total:
        raise RuntimeError("class files disagree with the full dataset")
    per_class["MIT"] = total - known

    pending = {cls: Counter(c) for cls, c in per_class.items()}
    labels = []
    for f in feats:
        cls = next(c for c in YEAST_COUNTS if pending[c][f] > 0)
        pending[cls][f] -= 1
        labels.append(cls)

    counts = Counter(labels)
    if dict(counts) != YEAST_COUNTS:
        raise RuntimeError(f"class counts do not match UCI: {counts}")
    with out.open("w", newline="") as fh:
        w = csv.writer(fh)
        for f, lab in zip(feats, labels):
            w.writerow([f"{v:.2f}" for v in f] + [lab])


def main(argv: list[str]) -> int:
    DATA.mkdir(exist_ok=True)
    _sklearn_csv("iris.csv", ["setosa", "versicolor", "virginica"], DATA / "iris.csv")
    _sklearn_csv("wine_data.csv", ["1", "2", "3"], DATA / "wine.csv")
    if argv:
        build_yeast(Path(argv[0]), DATA / "yeast.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
