from pathlib import Path

import pytest

from spincover import DimensionVector, ReducedMatrix, parse_matrix

DATA = Path(__file__).parent / "data"


def load(name: str) -> ReducedMatrix:
    return parse_matrix((DATA / name).read_text(encoding="utf-8"))


def rp(n: int) -> ReducedMatrix:
    """Real projective n-space: one simplex factor, all-ones column."""
    return ReducedMatrix.from_rows((n,), [[1]] * n)


@pytest.fixture(scope="session")
def spin_235() -> ReducedMatrix:
    return load("spin_235.txt")


@pytest.fixture(scope="session")
def tower_2333() -> ReducedMatrix:
    return load("tower_2333.txt")


@pytest.fixture(scope="session")
def torus() -> ReducedMatrix:
    return load("torus.txt")


@pytest.fixture(scope="session")
def klein() -> ReducedMatrix:
    return load("klein.txt")


def dv(*dims: int) -> DimensionVector:
    return DimensionVector(tuple(dims))
