#!/usr/bin/env python3
"""Sweep policy x action-space x environment over a generated episode suite.

Produces one metrics row per cell: {greedy, random} x {egocentric, panoramic}
x {dynamic, static}. Static runs strip every human from the scenarios, so the
collision columns isolate how much of each policy's trouble the humans cause.
"""

import argparse
import itertools
import json
from pathlib import Path

import numpy as np

from humnav.experiments import (
    ExperimentSpec,
    make_episodes,
    rows_to_csv,
    run_experiment,
)
from humnav.world import generate_scenario


def build_suite(n_scenarios, per_scenario, seed0):
    scenarios, episodes = [], []
    for i in range(n_scenarios):
        s = generate_scenario(seed0 + i)
        scenarios.append(s)
        rng = np.random.default_rng(10_000 + seed0 + i)
        episodes.extend((s.id, e) for e in make_episodes(s, per_scenario, rng))
    return scenarios, episodes


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--scenarios", type=int, default=10)
    ap.add_argument("--per-scenario", type=int, default=10)
    ap.add_argument("--seed", type=int, default=60)
    ap.add_argument("--out", type=Path, default=Path("results/ablation_grid"))
    args = ap.parse_args()

    scenarios, episodes = build_suite(args.scenarios, args.per_scenario, args.seed)
    print(f"{len(episodes)} episodes over {len(scenarios)} scenarios")

    rows = []
    grid = itertools.product(
        ("greedy", "random"), ("egocentric", "panoramic"), ("dynamic", "static"))
    for policy, mode, environment in grid:
        spec = ExperimentSpec(policy=policy, mode=mode, environment=environment, seed=args.seed)
        res = run_experiment(scenarios, episodes, spec)
        for row in res.rows:
            row = {**row, "agent": f"{policy}/{environment}"}
            rows.append(row)
            print(f"{policy:7s} {mode:11s} {environment:8s} "
                  f"NE={row['NE']:.3f} TCR={row['TCR']:.3f} "
                  f"SR={row['SR']:.3f} SR_goal={row['SR_goal']:.3f}")

    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "table.csv").write_text(rows_to_csv(rows))
    (args.out / "rows.json").write_text(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    print(f"wrote {args.out}/table.csv and rows.json")


if __name__ == "__main__":
    main()
