"""The run loop: random agent scheduling, shared reference state, resets,
and the append-only event log everything downstream is computed from.

One step = one agent decision. The world draws one cell uniformly at random,
evaluates all candidate targets from the shared (reference, current) pair,
lets that agent act, then applies the reset rule: whenever the grid exactly
matches a catalogue state whose unexpectedness from the outgoing reference
is strictly positive, that state becomes the new reference for everyone.

Logs serialize as newline-delimited JSON: a header record carrying the full
configuration and initial cells, then one record per event. Identical
configurations (seed included) produce byte-identical logs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .decision import agent_decide, bits_per_change, candidates, select_target
from .grid import GridState, hamming, random_grid, uniform_grid
from .patterns import Catalogue, build_catalogue, parse_catalogue

INIT_CHOICES = ("random", "white")
LOG_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SimConfig:
    """Full parameterization of a run. Defaults reproduce the headline
    experiment: 5x5 grid, two colors, horizon 7, goal-free flip probability 0.5."""

    n: int = 5
    k: int = 2
    horizon: int = 7
    p_random: float = 0.5
    seed: int = 1
    steps: int = 10000
    init: str = "random"
    catalogue: str = "basic"

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not 2 <= self.k <= 10:
            raise ValueError(f"k must be in [2, 10], got {self.k}")
        if self.horizon < 0:
            raise ValueError(f"horizon must be >= 0, got {self.horizon}")
        if not 0.0 <= self.p_random <= 1.0:
            raise ValueError(f"p_random must be in [0, 1], got {self.p_random}")
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.init not in INIT_CHOICES:
            raise ValueError(f"init must be one of {INIT_CHOICES}, got {self.init!r}")


@dataclass(frozen=True, slots=True)
class Event:
    """One decision instant: who played, what changed, what was wanted."""

    step: int
    cell: int
    action: int | None  # new color, or None for no action
    target: str | None  # basic-state id of the pursued target
    max_desirability: float | None
    desirable_count: int
    reset: bool
    reached: str | None  # basic-state id that became the new reference
    source: str = "agent"


@dataclass
class RunLog:
    config: SimConfig
    init: GridState
    events: list[Event] = field(default_factory=list)
    reached: list[str] = field(default_factory=list)

    def replay_states(self) -> Iterator[GridState]:
        """Grid snapshot after each event, in order."""
        g = self.init
        for e in self.events:
            if e.action is not None:
                g = g.with_cell(e.cell, e.action)
            yield g

    def final_state(self) -> GridState:
        g = self.init
        for g in self.replay_states():
            pass
        return g


def resolve_catalogue(config: SimConfig) -> Catalogue:
    """The built-in 'basic' catalogue, or one parsed from a file path."""
    if config.catalogue == "basic":
        return build_catalogue(config.n, config.k)
    text = Path(config.catalogue).read_text()
    cat = parse_catalogue(text, config.k)
    if cat.n != config.n:
        raise ValueError(
            f"catalogue {config.catalogue} is for n={cat.n}, config has n={config.n}"
        )
    return cat


class World:
    """A single running game; one logical actor, stepped one decision at a time."""

    def __init__(self, config: SimConfig, catalogue: Catalogue | None = None):
        self.config = config
        self.catalogue = catalogue if catalogue is not None else resolve_catalogue(config)
        self.bits = bits_per_change(config.n, config.k)
        self.rng = np.random.default_rng(config.seed)
        if config.init == "white":
            grid = uniform_grid(config.n, config.k, 1)
        else:
            grid = random_grid(config.n, config.k, self.rng)
        self.init = grid
        self.grid = grid
        self.reference = grid
        self.step_count = 0
        self.events: list[Event] = []
        self.reached: list[str] = []

    def maybe_reset_reference(self) -> bool:
        """Adopt the current grid as the shared reference iff it exactly
        matches a catalogue state with strictly positive unexpectedness."""
        b = self.catalogue.match(self.grid)
        if b is None:
            return False
        u = self.bits * hamming(self.reference, self.grid) - b.c_d
        if u <= 0.0:
            return False
        self.reference = self.grid
        self.reached.append(b.id)
        return True

    def pursuable(self) -> list:
        """Candidate records the agents may actually pursue.

        Two rules on top of the raw candidate evaluation, both required to
        reproduce the measured transition statistics:
        - a target must lie strictly inside the horizon (fewer than `horizon`
          differing cells), and
        - while the reference is itself a basic state, every target sharing
          its shape and background color is spent: reaching the family that
          just became the baseline offers no unexpectedness worth acting on.
        """
        if self.config.horizon < 1:
            return []
        records = candidates(
            self.grid, self.catalogue, self.config.horizon - 1, self.bits, self.reference
        )
        ref_basic = self.catalogue.match(self.reference)
        if ref_basic is not None:
            records = [
                r for r in records
                if r.target.pattern.shape is not ref_basic.pattern.shape
                or r.target.background_color != ref_basic.background_color
            ]
        return records

    def step(self, exclude_cell: int | None = None) -> Event:
        """One agent decision. exclude_cell removes one cell from the random
        pool (used when a human occupies it)."""
        ncells = self.config.n * self.config.n
        if exclude_cell is None:
            cell = int(self.rng.integers(0, ncells))
        else:
            idx = int(self.rng.integers(0, ncells - 1))
            cell = idx if idx < exclude_cell else idx + 1
        records = self.pursuable()
        desirable_count = sum(1 for r in records if r.desirability > 0.0)
        choice = select_target(records, self.rng)
        action = agent_decide(
            cell, self.grid, choice.target if choice else None,
            self.config.p_random, self.rng,
        )
        if action is not None:
            self.grid = self.grid.with_cell(cell, action)
        reset = self.maybe_reset_reference()
        event = Event(
            step=self.step_count,
            cell=cell,
            action=action,
            target=choice.target.id if choice else None,
            max_desirability=choice.desirability if choice else None,
            desirable_count=desirable_count,
            reset=reset,
            reached=self.reached[-1] if reset else None,
        )
        self.step_count += 1
        self.events.append(event)
        return event

    def apply_external(self, cell: int, color: int) -> Event:
        """A color change imposed from outside the agent loop (a human act).
        The reset rule applies exactly as for agent moves."""
        ncells = self.config.n * self.config.n
        if not 0 <= cell < ncells:
            raise ValueError(f"cell {cell} out of range")
        if not 0 <= color < self.config.k:
            raise ValueError(f"color {color} out of range [0, {self.config.k})")
        changed = color != self.grid.cell(cell)
        if changed:
            self.grid = self.grid.with_cell(cell, color)
        reset = self.maybe_reset_reference()
        event = Event(
            step=self.step_count,
            cell=cell,
            action=color if changed else None,
            target=None,
            max_desirability=None,
            desirable_count=0,
            reset=reset,
            reached=self.reached[-1] if reset else None,
            source="human",
        )
        self.events.append(event)
        return event

    def runlog(self) -> RunLog:
        return RunLog(self.config, self.init, list(self.events), list(self.reached))


def run(config: SimConfig, catalogue: Catalogue | None = None) -> RunLog:
    """Execute config.steps agent decisions from a fresh world."""
    world = World(config, catalogue)
    for _ in range(config.steps):
        world.step()
    return world.runlog()


# --- serialization ---------------------------------------------------------


class LogParseError(ValueError):
    """Malformed run log; message names the offending line."""


def config_to_dict(config: SimConfig) -> dict:
    return {
        "n": config.n,
        "k": config.k,
        "horizon": config.horizon,
        "p_random": config.p_random,
        "seed": config.seed,
        "steps": config.steps,
        "init": config.init,
        "catalogue": config.catalogue,
    }


def config_from_dict(d: dict) -> SimConfig:
    return SimConfig(**{k: d[k] for k in (
        "n", "k", "horizon", "p_random", "seed", "steps", "init", "catalogue"
    )})


def _dumps(obj: dict) -> str:
    return json.dumps(obj, separators=(",", ":"))


def serialize_event(e: Event) -> str:
    return _dumps({
        "kind": "event",
        "step": e.step,
        "cell": e.cell,
        "action": e.action,
        "target": e.target,
        "max_desirability": e.max_desirability,
        "desirable_count": e.desirable_count,
        "reset": e.reset,
        "reached": e.reached,
        "source": e.source,
    })


def serialize_runlog(log: RunLog) -> str:
    header = _dumps({
        "kind": "header",
        "format": LOG_FORMAT_VERSION,
        "config": config_to_dict(log.config),
        "init_cells": [int(c) for c in log.init.cells],
    })
    lines = [header]
    lines.extend(serialize_event(e) for e in log.events)
    return "\n".join(lines) + "\n"


def write_runlog(log: RunLog, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_runlog(log))
    return path


_EVENT_FIELDS = {
    "step": int,
    "cell": int,
    "action": (int, type(None)),
    "target": (str, type(None)),
    "max_desirability": (int, float, type(None)),
    "desirable_count": int,
    "reset": bool,
    "reached": (str, type(None)),
    "source": str,
}


def parse_runlog(text: str, name: str = "<log>") -> RunLog:
    lines = text.splitlines()
    if not lines:
        raise LogParseError(f"{name} line 1: empty log")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise LogParseError(f"{name} line 1: {exc}") from None
    if not isinstance(header, dict) or header.get("kind") != "header":
        raise LogParseError(f"{name} line 1: expected header record")
    try:
        config = config_from_dict(header["config"])
        init = GridState(config.n, config.k,
                         np.array(header["init_cells"], dtype=np.uint8))
    except (KeyError, TypeError, ValueError) as exc:
        raise LogParseError(f"{name} line 1: bad header: {exc}") from None

    events: list[Event] = []
    for i, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LogParseError(f"{name} line {i}: {exc}") from None
        if not isinstance(rec, dict) or rec.get("kind") != "event":
            raise LogParseError(f"{name} line {i}: expected event record")
        kwargs = {}
        for fname, types in _EVENT_FIELDS.items():
            if fname not in rec:
                raise LogParseError(f"{name} line {i}: missing field {fname!r}")
            value = rec[fname]
            if not isinstance(value, types) or (
                types is int and isinstance(value, bool)
            ):
                raise LogParseError(
                    f"{name} line {i}: field {fname!r} has bad value {value!r}"
                )
            kwargs[fname] = value
        if kwargs["max_desirability"] is not None:
            kwargs["max_desirability"] = float(kwargs["max_desirability"])
        events.append(Event(**kwargs))
    reached = [e.reached for e in events if e.reset]
    return RunLog(config, init, events, reached)


def read_runlog(path: str | Path) -> RunLog:
    path = Path(path)
    return parse_runlog(path.read_text(), name=str(path))
