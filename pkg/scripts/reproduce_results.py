#!/usr/bin/env python3
"""Reproduce the headline experiments end to end.

Writes, into --out (default ./out/reproduction):
  sweep.tsv        desirable-time fraction vs horizon (figure-4 analogue)
  trace.tsv        description complexity of the grid, first 1000 decisions
  visited.tsv      reached shapes in chronological order (figure-6 analogue)
  table2.txt       shape-to-shape transition frequencies with bc/1-bc splits
  transitions.tsv  the same matrix, flat
  run-*.jsonl      the raw event logs everything above is derived from

Run time is a couple of minutes at default sizes.
"""

import argparse
import math
from dataclasses import replace
from pathlib import Path

from spg.engine import SimConfig, run, write_runlog
from spg.metrics import (
    complexity_trace,
    dominance_null_band,
    horizon_sweep,
    periodogram,
    transition_matrix,
    transition_table_text,
    visited_sequence,
)
from spg.patterns import build_catalogue


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/reproduction")
    ap.add_argument("--seeds", type=int, default=12, help="pooled runs (default 12)")
    ap.add_argument("--steps", type=int, default=60_000, help="steps per run")
    ap.add_argument("--sweep-steps", type=int, default=5000)
    ap.add_argument("--sweep-seeds", type=int, default=8)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    base = SimConfig()
    catalogue = build_catalogue(base.n, base.k)

    print(f"== pooled runs: {args.seeds} x {args.steps} steps")
    logs = []
    for seed in range(1, args.seeds + 1):
        log = run(replace(base, seed=seed, steps=args.steps))
        write_runlog(log, out / f"run-s{seed}.jsonl")
        logs.append(log)
        print(f"   seed {seed:2d}: {len(log.reached)} reference resets")

    print("== transition frequencies (table2.txt)")
    tm = transition_matrix(logs, catalogue)
    (out / "table2.txt").write_text(transition_table_text(tm))
    with (out / "transitions.tsv").open("w") as fh:
        fh.write("from\tto\trelation\tcount\tfrequency\n")
        for row in tm.rows():
            fh.write(f"{row['from']}\t{row['to']}\t{row['relation']}\t"
                     f"{row['count']}\t{row['frequency']:.6f}\n")
    print(transition_table_text(tm))

    print("== complexity trace, first 1000 decisions (trace.tsv)")
    with (out / "trace.tsv").open("w") as fh:
        fh.write("step\tvalue\texact_hit\n")
        for p in complexity_trace(logs[0], catalogue)[:1000]:
            fh.write(f"{p.step}\t{p.value}\t{int(p.exact_hit)}\n")

    print("== visited sequence (visited.tsv)")
    with (out / "visited.tsv").open("w") as fh:
        fh.write("index\tid\tshape\tconfig\tbackground\n")
        for i, v in enumerate(visited_sequence(logs[0], catalogue)):
            fh.write(f"{i}\t{v.id}\t{v.shape.value}\t{v.config}\t{v.background}\n")

    visits = visited_sequence(logs[0], catalogue)
    pg = periodogram(visits)
    lo, hi = dominance_null_band(len(visits), trials=2000)
    verdict = "no periodicity detected" if lo <= pg.dominance <= hi else "REGULARITY?"
    print(f"== periodogram: dominance={pg.dominance:.4f} null-band=[{lo:.4f},{hi:.4f}] -> {verdict}")

    print(f"== horizon sweep 0..25 ({args.sweep_seeds} seeds x {args.sweep_steps} steps)")
    points = horizon_sweep(base, list(range(26)), list(range(1, args.sweep_seeds + 1)),
                           args.sweep_steps)
    with (out / "sweep.tsv").open("w") as fh:
        fh.write("horizon\tmean\tstd\tseeds\tsteps\n")
        for p in points:
            fh.write(f"{p.horizon}\t{p.mean:.6f}\t{p.std:.6f}\t"
                     f"{len(p.fractions)}\t{args.sweep_steps}\n")
            bar = "#" * round(p.mean * 40)
            print(f"   h={p.horizon:2d} {p.mean:5.3f} {bar}")

    print(f"done; outputs in {out}/")


if __name__ == "__main__":
    main()
