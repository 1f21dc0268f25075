"""Measurements over run logs.

Everything here consumes serialized (or in-memory) run logs rather than live
worlds, so archived runs reproduce every number: the per-step description
complexity trace, the fraction of decision instants with a desirable target,
the chronological visited-shape sequence, shape-to-shape transition
statistics split by background relation, and a periodogram regularity check
on the visited sequence.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .engine import RunLog, SimConfig, resolve_catalogue, run
from .patterns import Catalogue, Shape

SHAPE_ORDER = (Shape.PLAIN, Shape.DIAGONAL, Shape.TRIANGLE, Shape.LINE)


# --- description-complexity trace -------------------------------------------


@dataclass(frozen=True, slots=True)
class TracePoint:
    step: int
    value: int  # min over patterns of (pattern distance + code bits)
    exact_hit: bool  # grid equals some instantiation


def state_complexity(state, catalogue: Catalogue) -> tuple[int, bool]:
    """(min_p (H(state, p) + C_d(p)), whether some pattern matched exactly)."""
    best = None
    hit = False
    for dist, row in catalogue.nearest(state):
        v = dist + catalogue.states[row].c_d
        if dist == 0:
            hit = True
        if best is None or v < best:
            best = v
    return best, hit


def complexity_trace(log: RunLog, catalogue: Catalogue | None = None) -> list[TracePoint]:
    """One point per step: the complexity of the grid after that decision."""
    if not log.events:
        raise ValueError("log has no events")
    cat = catalogue if catalogue is not None else resolve_catalogue(log.config)
    points = []
    for event, state in zip(log.events, log.replay_states()):
        value, hit = state_complexity(state, cat)
        points.append(TracePoint(event.step, value, hit))
    return points


# --- desirable-time fraction -------------------------------------------------


def desirable_fraction(log: RunLog) -> float:
    """Fraction of decision instants at which some target was desirable."""
    if not log.events:
        raise ValueError("log has no events")
    return sum(1 for e in log.events if e.desirable_count >= 1) / len(log.events)


@dataclass(frozen=True, slots=True)
class HorizonPoint:
    horizon: int
    mean: float
    std: float
    fractions: tuple[float, ...]  # one per seed


def _fraction_for(config: SimConfig) -> float:
    return desirable_fraction(run(config))


def horizon_sweep(
    base: SimConfig,
    horizons: list[int],
    seeds: list[int],
    steps: int,
    jobs: int | None = None,
) -> list[HorizonPoint]:
    """Desirable-time fraction per horizon, averaged over seeds.

    Runs fan out over a process pool unless jobs == 1.
    """
    if not horizons or not seeds:
        raise ValueError("horizons and seeds must be non-empty")
    configs = [
        replace(base, horizon=h, seed=s, steps=steps)
        for h in horizons
        for s in seeds
    ]
    if jobs == 1:
        fractions = [_fraction_for(c) for c in configs]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            fractions = list(pool.map(_fraction_for, configs, chunksize=1))
    points = []
    for i, h in enumerate(horizons):
        fr = tuple(fractions[i * len(seeds) : (i + 1) * len(seeds)])
        points.append(HorizonPoint(h, float(np.mean(fr)), float(np.std(fr)), fr))
    return points


# --- visited-shape sequence --------------------------------------------------


@dataclass(frozen=True, slots=True)
class Visit:
    id: str
    shape: Shape
    config: int
    background: int  # color of the majority slot


def visited_sequence(log: RunLog, catalogue: Catalogue | None = None) -> list[Visit]:
    """The reached basic states in chronological order, as shape metadata."""
    cat = catalogue if catalogue is not None else resolve_catalogue(log.config)
    out = []
    for state_id in log.reached:
        b = cat.by_id[state_id]
        out.append(Visit(state_id, b.pattern.shape, b.pattern.config, b.background_color))
    return out


# --- transition statistics ----------------------------------------------------


@dataclass
class TransitionMatrix:
    """Counts of consecutive reached-shape pairs, split by whether the two
    states share their background color (bc) or not (1-bc)."""

    counts: dict[tuple[Shape, Shape, bool], int]
    totals: dict[Shape, int]
    min_transitions: int

    def frequency(self, frm: Shape, to: Shape, same_background: bool | None = None) -> float:
        total = self.totals.get(frm, 0)
        if total == 0:
            return 0.0
        if same_background is None:
            c = self.counts.get((frm, to, True), 0) + self.counts.get((frm, to, False), 0)
        else:
            c = self.counts.get((frm, to, same_background), 0)
        return c / total

    @property
    def low_confidence(self) -> set[Shape]:
        return {s for s in SHAPE_ORDER if self.totals.get(s, 0) < self.min_transitions}

    def rows(self) -> list[dict]:
        """Flat rows (from, to, relation, count, frequency) for tabular export."""
        out = []
        for frm in SHAPE_ORDER:
            for to in SHAPE_ORDER:
                for same in (True, False):
                    out.append({
                        "from": frm.value,
                        "to": to.value,
                        "relation": "bc" if same else "1-bc",
                        "count": self.counts.get((frm, to, same), 0),
                        "frequency": self.frequency(frm, to, same),
                    })
        return out


def transition_matrix(
    logs: list[RunLog],
    catalogue: Catalogue | None = None,
    min_transitions: int = 100,
) -> TransitionMatrix:
    """Pool consecutive reached pairs from each log (never across logs)."""
    counts: dict[tuple[Shape, Shape, bool], int] = {}
    totals: dict[Shape, int] = {}
    for log in logs:
        visits = visited_sequence(log, catalogue)
        for a, b in zip(visits, visits[1:]):
            key = (a.shape, b.shape, a.background == b.background)
            counts[key] = counts.get(key, 0) + 1
            totals[a.shape] = totals.get(a.shape, 0) + 1
    return TransitionMatrix(counts, totals, min_transitions)


def transition_table_text(tm: TransitionMatrix) -> str:
    """The from-shape x next-shape layout with bc / 1-bc splits per cell."""
    header = ["from (transitions)".ljust(24)] + [s.value.ljust(26) for s in SHAPE_ORDER]
    lines = ["next shape:", "  " + "".join(header)]
    for frm in SHAPE_ORDER:
        total = tm.totals.get(frm, 0)
        label = f"{frm.value} ({total})"
        if frm in tm.low_confidence:
            label += " *"
        cells = [label.ljust(24)]
        for to in SHAPE_ORDER:
            cell = (
                f"{tm.frequency(frm, to):.2f} "
                f"bc: {tm.frequency(frm, to, True):.2f} "
                f"1-bc: {tm.frequency(frm, to, False):.2f}"
            )
            cells.append(cell.ljust(26))
        lines.append("  " + "".join(cells))
    if tm.low_confidence:
        lines.append(f"  * low confidence: fewer than {tm.min_transitions} transitions")
    return "\n".join(lines) + "\n"


# --- periodogram ---------------------------------------------------------------


@dataclass(frozen=True)
class Periodogram:
    freqs: np.ndarray  # cycles per visit, DC excluded
    power: np.ndarray
    dominance: float  # max single-frequency power / total power


def _class_indices(seq) -> np.ndarray:
    vals = []
    for item in seq:
        if isinstance(item, Visit):
            item = item.shape
        if isinstance(item, Shape):
            item = SHAPE_ORDER.index(item)
        vals.append(int(item))
    return np.asarray(vals, dtype=float)


def periodogram(seq, min_length: int = 64) -> Periodogram:
    """Power spectrum of the shape-class index series, mean removed.

    The dominance ratio is how much of the total (non-DC) power the single
    strongest frequency holds; periodic sequences push it toward 1.
    """
    x = _class_indices(seq)
    if len(x) < min_length:
        raise ValueError(f"sequence too short: {len(x)} < {min_length}")
    x = x - x.mean()
    spectrum = np.fft.rfft(x)
    power = np.abs(spectrum) ** 2
    freqs = np.fft.rfftfreq(len(x))
    power, freqs = power[1:], freqs[1:]  # drop DC (zero after mean removal)
    total = float(power.sum())
    dominance = float(power.max() / total) if total > 0 else 0.0
    return Periodogram(freqs, power, dominance)


def dominance_null_band(
    length: int,
    n_classes: int = 4,
    trials: int = 2000,
    confidence: float = 0.95,
    seed: int = 0,
) -> tuple[float, float]:
    """Monte-Carlo band of the dominance ratio for uniform-random class
    sequences of the given length."""
    rng = np.random.default_rng(seed)
    ratios = np.empty(trials)
    for t in range(trials):
        ratios[t] = periodogram(rng.integers(0, n_classes, size=length), min_length=1).dominance
    tail = (1.0 - confidence) / 2.0
    lo, hi = np.quantile(ratios, [tail, 1.0 - tail])
    return float(lo), float(hi)
