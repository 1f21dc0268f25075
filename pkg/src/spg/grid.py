"""Square color grids and Hamming distances between them.

A grid is an n x n matrix of color ids in [0, K). Cells are stored row-major
(index = row * n + col); states are immutable snapshots and every mutation
constructs a successor state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class GridState:
    """Immutable n x n grid of color ids in [0, k)."""

    n: int
    k: int
    cells: np.ndarray

    def __post_init__(self):
        cells = np.asarray(self.cells, dtype=np.uint8)
        if self.n < 1:
            raise ValueError(f"grid side must be >= 1, got {self.n}")
        if self.k < 2:
            raise ValueError(f"color count must be >= 2, got {self.k}")
        if cells.shape != (self.n * self.n,):
            raise ValueError(
                f"expected {self.n * self.n} cells, got shape {cells.shape}"
            )
        if cells.size and int(cells.max()) >= self.k:
            raise ValueError(f"cell value {int(cells.max())} out of range [0, {self.k})")
        cells = cells.copy()
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)

    def __eq__(self, other):
        if not isinstance(other, GridState):
            return NotImplemented
        return (
            self.n == other.n
            and self.k == other.k
            and np.array_equal(self.cells, other.cells)
        )

    def __hash__(self):
        return hash((self.n, self.k, self.cells.tobytes()))

    @property
    def key(self) -> bytes:
        """Raw cell bytes; stable dict key for exact-state lookups."""
        return self.cells.tobytes()

    def cell(self, index: int) -> int:
        return int(self.cells[index])

    def with_cell(self, index: int, color: int) -> GridState:
        """Successor state with one cell recolored."""
        if not 0 <= index < self.n * self.n:
            raise ValueError(f"cell index {index} out of range")
        if not 0 <= color < self.k:
            raise ValueError(f"color {color} out of range [0, {self.k})")
        cells = self.cells.copy()
        cells[index] = color
        return GridState(self.n, self.k, cells)


def uniform_grid(n: int, k: int, color: int = 0) -> GridState:
    if not 0 <= color < k:
        raise ValueError(f"color {color} out of range [0, {k})")
    return GridState(n, k, np.full(n * n, color, dtype=np.uint8))


def random_grid(n: int, k: int, rng: np.random.Generator) -> GridState:
    """Uniform random color per cell, drawn from the supplied generator."""
    return GridState(n, k, rng.integers(0, k, size=n * n, dtype=np.uint8))


def hamming(a: GridState, b: GridState) -> int:
    """Number of differing cells. Both grids must share (n, k)."""
    if a.n != b.n or a.k != b.k:
        raise ValueError(
            f"grid mismatch: ({a.n},{a.k}) vs ({b.n},{b.k})"
        )
    return int(np.count_nonzero(a.cells != b.cells))


def format_grid(g: GridState) -> str:
    """Text form: n lines of n color digits (0=black, 1=white for K=2)."""
    rows = []
    for r in range(g.n):
        row = g.cells[r * g.n : (r + 1) * g.n]
        rows.append("".join(str(int(c)) for c in row))
    return "\n".join(rows)


def parse_grid(text: str, k: int = 2) -> GridState:
    """Inverse of format_grid. Requires a square block of digits < k."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    n = len(lines)
    if n == 0:
        raise ValueError("empty grid text")
    cells = []
    for ln in lines:
        if len(ln) != n:
            raise ValueError(f"grid text is not square: row {ln!r} in {n}-line block")
        for ch in ln:
            if not ch.isdigit() or int(ch) >= k:
                raise ValueError(f"bad color digit {ch!r} for k={k}")
            cells.append(int(ch))
    return GridState(n, k, np.array(cells, dtype=np.uint8))
