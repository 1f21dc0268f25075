"""Simplified Poietic Generator: a grid of one-pixel agents that act to
maximize unexpected simplicity, plus the measurement suite and a live
mixed-play service."""

from .decision import (
    DesirabilityRecord,
    agent_decide,
    bits_per_change,
    candidates,
    desirability,
    generation_complexity,
    select_target,
    unexpectedness,
)
from .engine import Event, RunLog, SimConfig, World, read_runlog, run, serialize_runlog, write_runlog
from .grid import GridState, format_grid, hamming, parse_grid, random_grid, uniform_grid
from .patterns import (
    AbstractPattern,
    BasicState,
    Catalogue,
    Shape,
    build_catalogue,
    describe_complexity,
    enumerate_patterns,
    format_catalogue,
    parse_catalogue,
    pattern_distance,
    render,
)

__version__ = "0.1.0"
