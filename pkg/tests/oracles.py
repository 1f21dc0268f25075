"""Independent brute-force evaluators used to cross-check the library.

Everything here works on plain Python lists with explicit loops: no numpy,
no shared code with the evaluation paths under test.
"""

from __future__ import annotations

import itertools
import math


def brute_render(slot_mask: list[int], colors: tuple[int, ...]) -> list[int]:
    return [colors[s] for s in slot_mask]


def brute_hamming(a: list[int], b: list[int]) -> int:
    assert len(a) == len(b)
    return sum(1 for x, y in zip(a, b) if x != y)


def brute_pattern_distance(
    cells: list[int], k: int, slot_mask: list[int], q: int
) -> tuple[int, tuple[int, ...]]:
    """Minimum mismatch count over all injective color assignments, with the
    lexicographically-first minimizing assignment."""
    best, best_colors = None, None
    for colors in itertools.permutations(range(k), q):
        d = brute_hamming(cells, brute_render(slot_mask, colors))
        if best is None or d < best:
            best, best_colors = d, colors
    return best, best_colors


def brute_evaluate(
    ref_cells: list[int],
    cur_cells: list[int],
    n: int,
    k: int,
    patterns: list[tuple[str, list[int], int, int]],
    horizon: int,
) -> list[dict]:
    """Full candidate evaluation: patterns are (key, slot_mask, q, code_bits).

    Returns one record per pattern within the horizon, with the target's
    rendered cells, color tuple, distances, and desirability.
    """
    alpha = 2.0 * math.log2(n) + math.log2(k)
    records = []
    for key, mask, q, code_bits in patterns:
        dist, colors = brute_pattern_distance(cur_cells, k, mask, q)
        if dist > horizon:
            continue
        target_cells = brute_render(mask, colors)
        ref_distance = brute_hamming(ref_cells, target_cells)
        u = alpha * ref_distance - code_bits
        d = u - alpha * dist
        records.append({
            "key": key,
            "colors": colors,
            "cells": target_cells,
            "cur_distance": dist,
            "ref_distance": ref_distance,
            "unexpectedness": u,
            "desirability": d,
        })
    return records


def desirable_and_argmax(records: list[dict]) -> tuple[set, set]:
    """(ids desirable, ids at the desirable maximum); ids are (key, colors)."""
    desirable = [r for r in records if r["desirability"] > 0.0]
    ids = {(r["key"], r["colors"]) for r in desirable}
    if not desirable:
        return set(), set()
    top = max(r["desirability"] for r in desirable)
    arg = {(r["key"], r["colors"]) for r in desirable if r["desirability"] == top}
    return ids, arg
