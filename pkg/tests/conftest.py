import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from spg.grid import parse_grid, uniform_grid
from spg.patterns import build_catalogue


@pytest.fixture(scope="session")
def catalogue():
    return build_catalogue(5, 2)


@pytest.fixture
def black():
    return uniform_grid(5, 2, 0)


@pytest.fixture
def white():
    return uniform_grid(5, 2, 1)


def grid(text: str, k: int = 2):
    return parse_grid(text, k)
