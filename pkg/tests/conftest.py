from pathlib import Path

import numpy as np
import pytest

from tabuclust import Dataset

DATA_DIR = Path(__file__).resolve().parents[1] / "data"

# Two well separated triangles: A B C near the origin, D E F near (10, 10).
SIX = [(0, 0), (1, 0), (0, 1), (10, 10), (11, 10), (10, 11)]
A, B, C, D, E, F = range(6)


@pytest.fixture
def six():
    return Dataset(np.array(SIX, dtype=float), labels=list("aaabbb"))


@pytest.fixture(scope="session")
def iris():
    from tabuclust.io import load_dataset
    return load_dataset(DATA_DIR / "iris.csv")


# One line per acceptance criterion, filled by test_acceptance.py.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
