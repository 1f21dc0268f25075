"""Operator entry point: run simulations, sweep the horizon, compute metrics
from archived logs, export the pattern catalogue, and serve live sessions.

All defaults reproduce the headline experiment (5x5 grid, two colors,
horizon 7, goal-free flip probability 0.5). Data goes to files or stdout;
diagnostics go to stderr; exit code 0 means the command completed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .engine import (
    LogParseError,
    SimConfig,
    read_runlog,
    resolve_catalogue,
    run,
    write_runlog,
)
from .metrics import (
    complexity_trace,
    dominance_null_band,
    horizon_sweep,
    periodogram,
    state_complexity,
    transition_matrix,
    transition_table_text,
    visited_sequence,
)
from .patterns import build_catalogue, format_catalogue

CLI_PERIODOGRAM_MIN = 256


def default_out_dir() -> Path:
    return Path(os.environ.get("SPG_OUT_DIR", "out"))


def _add_sim_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=5, help="grid side length (default 5)")
    p.add_argument("--k", type=int, default=2, help="number of colors (default 2)")
    p.add_argument("--horizon", type=int, default=7, help="candidate horizon (default 7)")
    p.add_argument("--p-random", type=float, default=0.5, dest="p_random",
                   help="goal-free recolor probability (default 0.5)")
    p.add_argument("--seed", type=int, default=1, help="run seed (default 1)")
    p.add_argument("--init", choices=("random", "white"), default="random",
                   help="initial grid (default random)")
    p.add_argument("--catalogue", default="basic",
                   help="pattern catalogue: 'basic' or a catalogue file path")


def _config_from_args(args, steps: int) -> SimConfig:
    return SimConfig(
        n=args.n, k=args.k, horizon=args.horizon, p_random=args.p_random,
        seed=args.seed, steps=steps, init=args.init, catalogue=args.catalogue,
    )


def _parse_int_list(text: str, flag: str) -> list[int]:
    """Accepts '1,2,5' and 'A-B' ranges (inclusive)."""
    out: list[int] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        lo, sep, hi = chunk.partition("-")
        if sep and lo:
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise ValueError(f"{flag} must be a non-empty list or range")
    return out


def cmd_run(args) -> int:
    config = _config_from_args(args, steps=args.steps)
    log = run(config)
    out = Path(args.out) if args.out else (
        default_out_dir() / f"run-n{config.n}k{config.k}h{config.horizon}-s{config.seed}.jsonl"
    )
    write_runlog(log, out)
    cat = resolve_catalogue(config)
    vis = visited_sequence(log, cat)
    shapes = sorted({v.shape.value for v in vis})
    final_value, _ = state_complexity(log.final_state(), cat)
    print(f"steps={config.steps} resets={len(log.reached)} "
          f"shapes={','.join(shapes) if shapes else '-'} final_complexity={final_value}")
    print(f"wrote {out}")
    return 0


def cmd_sweep(args) -> int:
    horizons = _parse_int_list(args.horizons, "--horizons")
    seeds = _parse_int_list(args.seeds, "--seeds")
    base = _config_from_args(args, steps=args.steps)
    points = horizon_sweep(base, horizons, seeds, args.steps, jobs=args.jobs)
    out = Path(args.out) if args.out else default_out_dir() / "sweep.tsv"
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        fh.write("horizon\tmean\tstd\tseeds\tsteps\n")
        for p in points:
            fh.write(f"{p.horizon}\t{p.mean:.6f}\t{p.std:.6f}\t{len(p.fractions)}\t{args.steps}\n")
    print(f"wrote {out}")
    return 0


def _load_logs(paths: list[str]):
    logs = []
    for path in paths:
        logs.append(read_runlog(path))
    base = logs[0].config
    for log in logs[1:]:
        if (log.config.n, log.config.k, log.config.catalogue) != (base.n, base.k, base.catalogue):
            raise LogParseError("logs mix incompatible configurations")
    return logs


def cmd_metrics(args) -> int:
    if not (args.trace or args.visited or args.transitions or args.table2 or args.periodogram):
        print("error: pick at least one of --trace/--visited/--transitions/--table2/--periodogram",
              file=sys.stderr)
        return 2
    try:
        logs = _load_logs(args.logs)
    except (LogParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out_dir = Path(args.out) if args.out else default_out_dir()
    out_dir.mkdir(parents=True, exist_ok=True)
    cat = None
    if logs[0].config.catalogue == "basic":
        cat = build_catalogue(logs[0].config.n, logs[0].config.k)

    if args.trace:
        path = out_dir / "trace.tsv"
        with path.open("w") as fh:
            fh.write("step\tvalue\texact_hit\n")
            for point in complexity_trace(logs[0], cat):
                fh.write(f"{point.step}\t{point.value}\t{int(point.exact_hit)}\n")
        print(f"wrote {path}")
    if args.visited:
        path = out_dir / "visited.tsv"
        with path.open("w") as fh:
            fh.write("index\tid\tshape\tconfig\tbackground\n")
            i = 0
            for log in logs:
                for v in visited_sequence(log, cat):
                    fh.write(f"{i}\t{v.id}\t{v.shape.value}\t{v.config}\t{v.background}\n")
                    i += 1
        print(f"wrote {path}")
    if args.transitions or args.table2:
        tm = transition_matrix(logs, cat, min_transitions=args.min_transitions)
        if args.transitions:
            path = out_dir / "transitions.tsv"
            with path.open("w") as fh:
                fh.write("from\tto\trelation\tcount\tfrequency\n")
                for row in tm.rows():
                    fh.write(f"{row['from']}\t{row['to']}\t{row['relation']}\t"
                             f"{row['count']}\t{row['frequency']:.6f}\n")
            print(f"wrote {path}")
        if args.table2:
            path = out_dir / "table2.txt"
            path.write_text(transition_table_text(tm))
            print(f"wrote {path}")
    if args.periodogram:
        visits = []
        for log in logs:
            visits.extend(visited_sequence(log, cat))
        if len(visits) < args.min_length:
            print(f"error: visited sequence too short for a stable periodogram: "
                  f"{len(visits)} < {args.min_length}", file=sys.stderr)
            return 1
        pg = periodogram(visits)
        lo, hi = dominance_null_band(len(visits), trials=args.null_trials, seed=args.null_seed)
        path = out_dir / "periodogram.tsv"
        with path.open("w") as fh:
            fh.write("frequency\tpower\n")
            for f, p in zip(pg.freqs, pg.power):
                fh.write(f"{f:.6f}\t{p:.6f}\n")
        print(f"wrote {path}")
        print(f"dominance_ratio={pg.dominance:.6f} null_band=[{lo:.6f},{hi:.6f}] "
              f"within_band={lo <= pg.dominance <= hi}")
    return 0


def cmd_catalogue(args) -> int:
    cat = build_catalogue(args.n, args.k)
    text = format_catalogue(cat)
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        print(f"wrote {path}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import SessionManager, SessionSettings, create_app

    config = _config_from_args(args, steps=0)
    settings = SessionSettings(
        sim=config, tick_ms=args.tick_ms, idle_timeout_s=args.idle_timeout,
        human_cell=args.human_cell,
    )
    manager = SessionManager(max_sessions=args.max_sessions)
    app = create_app(manager, settings, args.session_id)
    print(f"session {args.session_id!r} at ws://{args.host}:{args.port}/ws", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spg",
        description="Simplicity-seeking grid agents: simulate, measure, play live.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one simulation and write its log")
    _add_sim_flags(p)
    p.add_argument("--steps", type=int, default=10000, help="agent decisions (default 10000)")
    p.add_argument("--out", help="output log path (default $SPG_OUT_DIR/run-*.jsonl)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="desirable-time fraction across horizons")
    _add_sim_flags(p)
    p.add_argument("--horizons", default="0-25", help="list/range, e.g. 0-25 or 0,5,10")
    p.add_argument("--seeds", default="1-10", help="list/range of seeds")
    p.add_argument("--steps", type=int, default=20000, help="steps per run (default 20000)")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers (default: cpu count)")
    p.add_argument("--out", help="output TSV path (default $SPG_OUT_DIR/sweep.tsv)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("metrics", help="compute metrics from run logs")
    p.add_argument("--logs", nargs="+", required=True, help="run log files")
    p.add_argument("--trace", action="store_true", help="per-step description complexity")
    p.add_argument("--visited", action="store_true", help="chronological reached shapes")
    p.add_argument("--transitions", action="store_true", help="flat transition table")
    p.add_argument("--table2", action="store_true", help="shape-to-shape frequency layout")
    p.add_argument("--periodogram", action="store_true", help="visited-sequence regularity check")
    p.add_argument("--min-transitions", type=int, default=100,
                   help="below this, a row is marked low-confidence (default 100)")
    p.add_argument("--min-length", type=int, default=CLI_PERIODOGRAM_MIN,
                   help=f"minimum visits for --periodogram (default {CLI_PERIODOGRAM_MIN})")
    p.add_argument("--null-trials", type=int, default=2000,
                   help="Monte-Carlo trials for the null band (default 2000)")
    p.add_argument("--null-seed", type=int, default=0, help="null calibration seed")
    p.add_argument("--out", help="output directory (default $SPG_OUT_DIR)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("catalogue", help="export the built-in pattern catalogue")
    p.add_argument("--n", type=int, default=5, help="grid side length (default 5)")
    p.add_argument("--k", type=int, default=2, help="number of colors (default 2)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_catalogue)

    p = sub.add_parser("serve", help="host live sessions over WebSocket")
    _add_sim_flags(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--tick-ms", type=int, default=200, dest="tick_ms",
                   help="milliseconds per agent step (default 200)")
    p.add_argument("--idle-timeout", type=float, default=600.0, dest="idle_timeout",
                   help="stop an empty session after this many seconds (default 600)")
    p.add_argument("--session-id", default="default", dest="session_id")
    p.add_argument("--human-cell", type=int, default=None, dest="human_cell",
                   help="pin the player's cell (default: random on join)")
    p.add_argument("--max-sessions", type=int, default=64, dest="max_sessions")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LogParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
