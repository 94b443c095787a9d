#!/usr/bin/env python3
"""Generate scenarios, sample episodes, and write a return-labelled walk dataset.

End-to-end driver for the offline-learning pipeline: the resulting JSONL file
has a header record describing the configuration followed by one trajectory
record per random walk, each step labelled with its reward-to-go.
"""

import argparse
from pathlib import Path

import numpy as np

from humnav.datagen import DatasetConfig, write_dataset
from humnav.experiments import make_episodes, save_episode_file
from humnav.world import generate_scenario, save_scenario


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--buildings", type=int, default=10)
    ap.add_argument("--episodes-per-building", type=int, default=5)
    ap.add_argument("--trajectories", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workdir", type=Path, default=Path("results/dataset"))
    args = ap.parse_args()

    scen_dir = args.workdir / "scenarios"
    scen_dir.mkdir(parents=True, exist_ok=True)
    scenarios, episodes = [], []
    for b in range(args.buildings):
        s = generate_scenario(args.seed + b)
        save_scenario(s, scen_dir / f"{s.id}.json")
        scenarios.append(s)
        rng = np.random.default_rng(args.seed + 10_000 + b)
        episodes.extend((s.id, e) for e in make_episodes(s, args.episodes_per_building, rng))
    episode_file = scen_dir / "episodes.json"
    save_episode_file(episode_file, episodes)
    print(f"{args.buildings} scenarios, {len(episodes)} episodes -> {scen_dir}")

    config = DatasetConfig(num_trajectories=args.trajectories, seed=args.seed)
    out = args.workdir / "walks.jsonl"
    n = write_dataset(out, scenarios, episodes, config)
    print(f"wrote {n} trajectories to {out} ({out.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
