"""The simplicity-seeking decision rule.

Generating a state from another costs a fixed number of bits per differing
cell (locate the cell, name the new color):

    bits_per_change = 2*log2(n) + log2(K)          (exact real logarithms)

A target's unexpectedness is what it would cost to generate from the shared
reference minus what it costs to describe; its desirability additionally
subtracts the cost of reaching it from the current grid:

    unexpectedness(t) = bits_per_change * H(reference, t) - code_bits(t)
    desirability(t)   = unexpectedness(t) - bits_per_change * H(current, t)

(The same quantity can be read as expected-generation cost minus observed
description cost; no separate representation is kept for that reading.)
Agents pursue the most desirable target if any has strictly positive
desirability, and otherwise act at random with a configured probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import GridState, hamming
from .patterns import BasicState, Catalogue


def bits_per_change(n: int, k: int) -> float:
    """Generation cost in bits of one cell change on an n x n, K-color grid."""
    return 2.0 * math.log2(n) + math.log2(k)


@dataclass(frozen=True, slots=True)
class DesirabilityRecord:
    """Evaluation of one candidate target against a (reference, current) pair."""

    target: BasicState
    ref_distance: int  # differing cells between reference and target
    cur_distance: int  # differing cells between current grid and target
    unexpectedness: float
    desirability: float


def generation_complexity(reference: GridState, target: GridState, bits: float) -> float:
    """Bits to produce target from reference: one charge per differing cell."""
    return hamming(reference, target) * bits


def unexpectedness(reference: GridState, target: BasicState, bits: float) -> float:
    """Generation cost from the reference minus the target's code length."""
    return bits * hamming(reference, target.state) - target.c_d


def desirability(
    reference: GridState, current: GridState, target: BasicState, bits: float
) -> float:
    """Unexpectedness of the target minus the cost of reaching it from here."""
    return unexpectedness(reference, target, bits) - bits * hamming(current, target.state)


def candidates(
    current: GridState,
    catalogue: Catalogue,
    horizon: int,
    bits: float,
    reference: GridState,
) -> list[DesirabilityRecord]:
    """Evaluate every catalogue pattern within the horizon.

    Each pattern is instantiated by minimum distance from the current grid;
    it is a candidate iff that distance is at most the horizon. The
    reference-distance term uses the same instantiation.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if current.n != reference.n or current.k != reference.k:
        raise ValueError("current and reference grids do not match")
    if current.n != catalogue.n or current.k != catalogue.k:
        raise ValueError("grid does not match catalogue dimensions")
    ref_dists = catalogue.distances_from(reference)
    records = []
    for cur_distance, row in catalogue.nearest(current):
        if cur_distance > horizon:
            continue
        target = catalogue.states[row]
        u = bits * ref_dists[row] - target.c_d
        d = u - bits * cur_distance
        records.append(DesirabilityRecord(target, ref_dists[row], cur_distance, u, d))
    return records


def select_target(
    records: list[DesirabilityRecord], rng: np.random.Generator
) -> DesirabilityRecord | None:
    """The maximally desirable record, or None when nothing is desirable.

    Desirable means strictly positive desirability. Exact ties at the
    maximum are broken uniformly at random with the supplied generator.
    """
    desirable = [r for r in records if r.desirability > 0.0]
    if not desirable:
        return None
    top = max(r.desirability for r in desirable)
    tied = [r for r in desirable if r.desirability == top]
    if len(tied) == 1:
        return tied[0]
    return tied[int(rng.integers(0, len(tied)))]


def agent_decide(
    cell: int,
    current: GridState,
    target: BasicState | None,
    p_random: float,
    rng: np.random.Generator,
) -> int | None:
    """What the agent owning `cell` does: a new color, or None for no action.

    With a target, the agent recolors its cell iff that brings the grid
    closer to the target. Without one, it recolors at random with
    probability p_random (for K=2 that is the flip).
    """
    if not 0 <= cell < current.n * current.n:
        raise ValueError(f"cell {cell} out of range")
    own = current.cell(cell)
    if target is not None:
        want = target.state.cell(cell)
        return want if want != own else None
    if rng.random() >= p_random:
        return None
    if current.k == 2:
        return 1 - own
    others = [c for c in range(current.k) if c != own]
    return others[int(rng.integers(0, len(others)))]
