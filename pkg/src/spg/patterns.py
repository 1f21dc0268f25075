"""Basic-pattern catalogue and description-complexity coding.

A pattern is an uninstantiated simple shape: a per-cell slot mask plus a color
arity q. Instantiating it assigns q distinct colors to the slots and yields a
concrete grid. The description complexity of a concrete basic state is the
length of its (colors, shape, configuration) code in bits, with every
logarithm rounded up to an integer:

    bits = ceil(log2(K!/(K-q)!)) + ceil(log2(n_shapes)) + ceil(log2(n_configs))

The plain (single-color) shape is signalled by the structure of the code
itself and pays neither shape nor configuration bits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .grid import GridState


class Shape(Enum):
    PLAIN = "plain"
    DIAGONAL = "diagonal"
    TRIANGLE = "triangle"
    LINE = "line"


DEFAULT_SHAPES = (Shape.PLAIN, Shape.DIAGONAL, Shape.TRIANGLE, Shape.LINE)

FIGURE_SLOT = 0
BACKGROUND_SLOT = 1


def config_count(shape: Shape, n: int) -> int:
    """Number of placements of a shape on an n x n grid."""
    if shape is Shape.PLAIN:
        return 1
    if shape is Shape.DIAGONAL:
        return 2
    if shape is Shape.TRIANGLE:
        return 4
    if shape is Shape.LINE:
        return 2 * n
    raise ValueError(f"unknown shape {shape!r}")


def _ceil_log2(x: int) -> int:
    if x < 1:
        raise ValueError(f"cannot take log2 of {x}")
    return (x - 1).bit_length()


def _figure_cells(shape: Shape, config: int, n: int) -> np.ndarray:
    """Boolean mask (length n*n) of the cells belonging to the figure."""
    i, j = np.divmod(np.arange(n * n), n)
    if shape is Shape.PLAIN:
        return np.ones(n * n, dtype=bool)
    if shape is Shape.DIAGONAL:
        return i == j if config == 0 else i + j == n - 1
    if shape is Shape.TRIANGLE:
        # Corners in reading order; the figure is the strict side of a
        # diagonal, the boundary diagonal belongs to the background.
        if config == 0:
            return i + j < n - 1  # nw
        if config == 1:
            return j > i  # ne
        if config == 2:
            return j < i  # sw
        return i + j > n - 1  # se
    if shape is Shape.LINE:
        if config < n:
            return j == config  # vertical, columns left to right
        return i == config - n  # horizontal, rows top to bottom
    raise ValueError(f"unknown shape {shape!r}")


@dataclass(frozen=True, eq=False)
class AbstractPattern:
    """A shape placement with uninstantiated color slots."""

    shape: Shape
    config: int
    q: int
    n: int
    slot_mask: np.ndarray  # per-cell slot index in [0, q)

    def __post_init__(self):
        mask = np.asarray(self.slot_mask, dtype=np.uint8)
        if mask.shape != (self.n * self.n,):
            raise ValueError("slot mask size does not match grid")
        present = set(np.unique(mask).tolist())
        if present != set(range(self.q)):
            raise ValueError(
                f"slot mask must use every slot in [0, {self.q}), found {sorted(present)}"
            )
        mask = mask.copy()
        mask.flags.writeable = False
        object.__setattr__(self, "slot_mask", mask)

    @property
    def key(self) -> str:
        return f"{self.shape.value}:{self.config}"

    @property
    def background_slot(self) -> int:
        """The slot covering the most cells (lowest index on a tie)."""
        counts = np.bincount(self.slot_mask, minlength=self.q)
        return int(np.argmax(counts))

    def __eq__(self, other):
        if not isinstance(other, AbstractPattern):
            return NotImplemented
        return (
            self.shape is other.shape
            and self.config == other.config
            and self.n == other.n
            and self.q == other.q
            and np.array_equal(self.slot_mask, other.slot_mask)
        )

    def __hash__(self):
        return hash((self.shape, self.config, self.n, self.q))


@dataclass(frozen=True, eq=False)
class BasicState:
    """A concrete color instantiation of a pattern, with its code length."""

    pattern: AbstractPattern
    colors: tuple[int, ...]  # slot index -> color id, injective
    state: GridState
    c_d: int  # description complexity in bits

    @property
    def id(self) -> str:
        digits = "".join(str(c) for c in self.colors)
        return f"{self.pattern.key}:{digits}"

    @property
    def background_color(self) -> int:
        return self.colors[self.pattern.background_slot]

    def __repr__(self):
        return f"BasicState({self.id}, c_d={self.c_d})"


def make_pattern(shape: Shape, config: int, n: int) -> AbstractPattern:
    if not 0 <= config < config_count(shape, n):
        raise ValueError(f"config {config} out of range for {shape.value} on n={n}")
    fig = _figure_cells(shape, config, n)
    if shape is Shape.PLAIN:
        return AbstractPattern(shape, config, 1, n, np.zeros(n * n, dtype=np.uint8))
    mask = np.where(fig, FIGURE_SLOT, BACKGROUND_SLOT).astype(np.uint8)
    return AbstractPattern(shape, config, 2, n, mask)


def enumerate_patterns(
    n: int, shapes: tuple[Shape, ...] = DEFAULT_SHAPES
) -> list[AbstractPattern]:
    """Every (shape, config) placement once, in catalogue order."""
    if n < 2:
        raise ValueError(f"grid side must be >= 2, got {n}")
    shapes = tuple(shapes)
    if not shapes:
        raise ValueError("shape set must be non-empty")
    out = []
    for shape in DEFAULT_SHAPES:
        if shape not in shapes:
            continue
        for config in range(config_count(shape, n)):
            out.append(make_pattern(shape, config, n))
    return out


def describe_complexity(
    p: AbstractPattern, k: int, n_shapes: int = 3, n_configs: int | None = None
) -> int:
    """Code length in bits of a basic state built on pattern p.

    n_shapes is how many non-plain shapes the shape field discriminates
    (3 in the shipped catalogue); n_configs defaults to the shape's full
    placement count for the pattern's grid side.
    """
    if k < p.q:
        raise ValueError(f"need at least q={p.q} colors, got k={k}")
    colour_bits = _ceil_log2(math.perm(k, p.q))
    if p.shape is Shape.PLAIN:
        return colour_bits
    if n_configs is None:
        n_configs = config_count(p.shape, p.n)
    return colour_bits + _ceil_log2(n_shapes) + _ceil_log2(n_configs)


def render(p: AbstractPattern, colors: tuple[int, ...] | list[int]) -> GridState:
    """Concrete grid from a slot -> color assignment (injective, complete)."""
    colors = tuple(int(c) for c in colors)
    if len(colors) != p.q:
        raise ValueError(f"need {p.q} slot colors, got {len(colors)}")
    if len(set(colors)) != len(colors):
        raise ValueError(f"slot colors must be distinct, got {colors}")
    palette = np.array(colors, dtype=np.uint8)
    k = max(2, max(colors) + 1)
    return GridState(p.n, k, palette[p.slot_mask])


def instantiate(
    p: AbstractPattern,
    colors: tuple[int, ...],
    k: int,
    n_shapes: int = 3,
    n_configs: int | None = None,
) -> BasicState:
    if any(not 0 <= c < k for c in colors):
        raise ValueError(f"colors {colors} out of range for k={k}")
    state = GridState(p.n, k, render(p, colors).cells)
    return BasicState(p, tuple(colors), state, describe_complexity(p, k, n_shapes, n_configs))


def pattern_distance(
    s: GridState, p: AbstractPattern, n_shapes: int = 3, n_configs: int | None = None
) -> tuple[int, BasicState]:
    """Minimum differing-cell count over all color instantiations of p.

    Returns the distance together with the minimizing instantiation; ties
    break toward the lowest lexicographic color tuple.
    """
    if s.n != p.n:
        raise ValueError(f"grid side {s.n} does not match pattern side {p.n}")
    if s.k < p.q:
        raise ValueError(f"pattern needs q={p.q} colors, grid has k={s.k}")
    # Mismatches for an assignment decompose per slot: cells of slot j that
    # are not colored colors[j]. Count matches per (slot, color) once.
    slot_sizes = np.bincount(p.slot_mask, minlength=p.q)
    matches = np.zeros((p.q, s.k), dtype=np.int64)
    np.add.at(matches, (p.slot_mask, s.cells), 1)
    best_colors = None
    best = None
    for colors in itertools.permutations(range(s.k), p.q):
        d = int(slot_sizes.sum() - sum(matches[j, c] for j, c in enumerate(colors)))
        if best is None or d < best:
            best = d
            best_colors = colors
    return best, instantiate(p, best_colors, s.k, n_shapes, n_configs)


class Catalogue:
    """An immutable pattern set with all instantiations precomputed.

    Holds the abstract patterns, every concrete basic state (with code
    lengths derived from this catalogue's own shape/configuration counts),
    and the stacked cell matrix used by the hot evaluation path.
    """

    def __init__(self, patterns: list[AbstractPattern], k: int):
        if not patterns:
            raise ValueError("catalogue needs at least one pattern")
        ns = {p.n for p in patterns}
        if len(ns) != 1:
            raise ValueError(f"patterns mix grid sides {sorted(ns)}")
        self.n = ns.pop()
        self.k = k
        self.patterns = list(patterns)
        if len({p.key for p in self.patterns}) != len(self.patterns):
            raise ValueError("duplicate (shape, config) in catalogue")

        self.n_shapes = len({p.shape for p in self.patterns if p.shape is not Shape.PLAIN})
        configs_present: dict[Shape, int] = {}
        for p in self.patterns:
            configs_present[p.shape] = configs_present.get(p.shape, 0) + 1

        self.states: list[BasicState] = []
        self.pattern_slices: list[tuple[int, int]] = []
        for p in self.patterns:
            if k < p.q:
                raise ValueError(f"pattern {p.key} needs q={p.q} colors, k={k}")
            start = len(self.states)
            for colors in itertools.permutations(range(k), p.q):
                self.states.append(
                    instantiate(p, colors, k, self.n_shapes, configs_present[p.shape])
                )
            self.pattern_slices.append((start, len(self.states)))

        self.by_id = {b.id: b for b in self.states}
        self.by_key: dict[bytes, BasicState] = {}
        for b in self.states:
            if b.state.key in self.by_key:
                raise ValueError(f"catalogue states collide on grid {b.id}")
            self.by_key[b.state.key] = b

        self._inst_cells = np.stack([b.state.cells for b in self.states])
        self._inst_cells.flags.writeable = False
        self._dist_cache: dict[bytes, list[int]] = {}

    def nearest(self, s: GridState) -> list[tuple[int, int]]:
        """Per pattern: (min distance from s, index into states of the
        lexicographically-first minimizing instantiation)."""
        dists = np.count_nonzero(self._inst_cells != s.cells, axis=1).tolist()
        out = []
        for start, stop in self.pattern_slices:
            best = start
            for r in range(start + 1, stop):
                if dists[r] < dists[best]:
                    best = r
            out.append((dists[best], best))
        return out

    def distances_from(self, s: GridState) -> list[int]:
        """Hamming distance from s to every concrete state, in state order.

        Cached by cell content: reference grids repeat for long stretches.
        """
        cached = self._dist_cache.get(s.key)
        if cached is None:
            if len(self._dist_cache) > 4096:
                self._dist_cache.clear()
            cached = np.count_nonzero(self._inst_cells != s.cells, axis=1).tolist()
            self._dist_cache[s.key] = cached
        return cached

    def match(self, s: GridState) -> BasicState | None:
        """The basic state exactly equal to s, if any."""
        return self.by_key.get(s.key)


def build_catalogue(
    n: int = 5, k: int = 2, shapes: tuple[Shape, ...] = DEFAULT_SHAPES
) -> Catalogue:
    return Catalogue(enumerate_patterns(n, shapes), k)


def format_catalogue(cat: Catalogue) -> str:
    """Text form: header, then one section per pattern with its slot mask."""
    lines = [f"n={cat.n}"]
    for p in cat.patterns:
        lines.append("")
        lines.append(f"pattern {p.shape.value} {p.config} q={p.q}")
        for r in range(p.n):
            row = p.slot_mask[r * p.n : (r + 1) * p.n]
            lines.append("".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_catalogue(text: str, k: int) -> Catalogue:
    """Inverse of format_catalogue."""
    lines = [ln.rstrip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise ValueError("catalogue text must start with 'n=<side>'")
    n = int(lines[0][2:])
    patterns = []
    i = 1
    while i < len(lines):
        head = lines[i].split()
        if len(head) != 4 or head[0] != "pattern" or not head[3].startswith("q="):
            raise ValueError(f"bad pattern header: {lines[i]!r}")
        shape = Shape(head[1])
        config = int(head[2])
        q = int(head[3][2:])
        mask_rows = lines[i + 1 : i + 1 + n]
        if len(mask_rows) != n or any(len(r) != n for r in mask_rows):
            raise ValueError(f"pattern {head[1]} {head[2]}: expected {n}x{n} slot mask")
        mask = np.array([int(ch) for row in mask_rows for ch in row], dtype=np.uint8)
        if mask.max() >= q:
            raise ValueError(f"pattern {head[1]} {head[2]}: slot digit >= q")
        patterns.append(AbstractPattern(shape, config, q, n, mask))
        i += 1 + n
    return Catalogue(patterns, k)
