import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spg.grid import GridState, format_grid, hamming, parse_grid, random_grid, uniform_grid


def grids(n=5, k=2):
    return st.lists(
        st.integers(0, k - 1), min_size=n * n, max_size=n * n
    ).map(lambda cells: GridState(n, k, np.array(cells, dtype=np.uint8)))


def test_text_form_round_trip():
    text = "01010\n10101\n01010\n10101\n01010"
    g = parse_grid(text)
    assert format_grid(g) == text
    assert g.n == 5 and g.k == 2
    assert g.cell(0) == 0 and g.cell(1) == 1


def test_parse_rejects_non_square():
    with pytest.raises(ValueError):
        parse_grid("010\n10")


def test_parse_rejects_out_of_range_digit():
    with pytest.raises(ValueError):
        parse_grid("01\n12", k=2)


def test_cells_are_immutable():
    g = uniform_grid(3, 2, 0)
    with pytest.raises(ValueError):
        g.cells[0] = 1


def test_with_cell_builds_successor():
    g = uniform_grid(3, 2, 0)
    h = g.with_cell(4, 1)
    assert g.cell(4) == 0
    assert h.cell(4) == 1
    assert hamming(g, h) == 1


def test_with_cell_validates():
    g = uniform_grid(3, 2, 0)
    with pytest.raises(ValueError):
        g.with_cell(9, 0)
    with pytest.raises(ValueError):
        g.with_cell(0, 2)


def test_hamming_identity_and_full():
    black = uniform_grid(5, 2, 0)
    white = uniform_grid(5, 2, 1)
    assert hamming(black, black) == 0
    assert hamming(black, white) == 25


def test_hamming_diagonal_is_five():
    black = uniform_grid(5, 2, 0)
    diag = black
    for i in range(5):
        diag = diag.with_cell(i * 5 + i, 1)
    assert hamming(black, diag) == 5


def test_hamming_rejects_mismatched_grids():
    with pytest.raises(ValueError):
        hamming(uniform_grid(5, 2, 0), uniform_grid(4, 2, 0))
    with pytest.raises(ValueError):
        hamming(uniform_grid(5, 2, 0), uniform_grid(5, 3, 0))


@given(grids(), grids())
def test_hamming_symmetric(a, b):
    assert hamming(a, b) == hamming(b, a)


@given(grids())
def test_hamming_self_is_zero(a):
    assert hamming(a, a) == 0


@given(grids(), grids(), grids())
def test_hamming_triangle_inequality(a, b, c):
    assert hamming(a, c) <= hamming(a, b) + hamming(b, c)


def test_random_grid_is_seed_deterministic():
    a = random_grid(5, 2, np.random.default_rng(7))
    b = random_grid(5, 2, np.random.default_rng(7))
    assert a == b
