"""Offline trajectory dataset generation: random walks, return-to-go, context slicing."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from typing import Iterable, Iterator

import numpy as np

from .experts import RandomPolicy
from .sim import Episode, EpisodeSpec
from .world import Scenario

DATASET_SCHEMA_VERSION = 1


@dataclass(frozen=True)
class DatasetConfig:
    num_trajectories: int = 10_000
    max_len: int = 30
    context_window: int = 15
    initial_rtg: float = 5.0
    seed: int = 0
    mode: str = "egocentric"

    def __post_init__(self):
        if not 1 <= self.context_window <= self.max_len:
            raise ValueError("require 1 <= context_window <= max_len")
        if self.num_trajectories < 1:
            raise ValueError("need at least one trajectory")


@dataclass(frozen=True)
class TrajectoryStep:
    node: str
    heading: int
    elevation: int
    frame: int
    action: str
    reward: float
    rtg: float


@dataclass(frozen=True)
class TrajectoryRecord:
    index: int
    scenario: str
    episode: str
    steps: tuple[TrajectoryStep, ...]
    collisions: int
    reached_goal: bool

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "scenario": self.scenario,
            "episode": self.episode,
            "steps": [
                {**asdict(st), "reward": round(st.reward, 6), "rtg": round(st.rtg, 6)}
                for st in self.steps
            ],
            "collisions": self.collisions,
            "reached_goal": self.reached_goal,
        }


def returns_to_go(rewards: list[float]) -> list[float]:
    """Suffix sums: rtg_t = reward_t + rtg_{t+1}, exact by construction."""
    out = [0.0] * len(rewards)
    acc = 0.0
    for i in range(len(rewards) - 1, -1, -1):
        acc = rewards[i] + acc
        out[i] = acc
    return out


def slice_contexts(rec: TrajectoryRecord, k: int) -> list[tuple[TrajectoryStep, ...]]:
    """All suffix-aligned windows of up to k steps ending at each timestep."""
    if k < 1:
        raise ValueError("context window must be >= 1")
    steps = rec.steps
    return [steps[max(0, t + 1 - k): t + 1] for t in range(len(steps))]


def gen_random_walks(
    scenarios: list[Scenario],
    episodes: list[tuple[str, EpisodeSpec]],
    cfg: DatasetConfig = DatasetConfig(),
) -> Iterator[TrajectoryRecord]:
    """Roll out uniform-random walks over sampled episodes, deterministic in cfg.seed."""
    if not scenarios or not episodes:
        raise ValueError("need a non-empty scenario and episode pool")
    by_id = {s.id: s for s in scenarios}
    root = np.random.SeedSequence(cfg.seed)
    picker = np.random.default_rng(root.spawn(1)[0])
    episode_choices = picker.integers(len(episodes), size=cfg.num_trajectories)
    for i in range(cfg.num_trajectories):
        sid, spec = episodes[int(episode_choices[i])]
        scenario = by_id[sid]
        spec = EpisodeSpec(**{**spec.__dict__, "step_cap": cfg.max_len})
        ep = Episode(scenario, spec, mode=cfg.mode, seed=cfg.seed)
        policy = RandomPolicy(np.random.default_rng(np.random.SeedSequence(entropy=cfg.seed, spawn_key=(1, i))))
        ep.reset()
        states, actions, rewards = [], [], []
        while not ep.done:
            st = ep.state
            action, target = policy.next_action(ep)
            out = ep.step(action, target)
            states.append(st)
            actions.append(action if target is None else f"{action}:{target}")
            rewards.append(sum(out.rewards.values()))
        rtgs = returns_to_go(rewards)
        steps = tuple(
            TrajectoryStep(
                node=st.node, heading=st.heading, elevation=st.elevation, frame=st.frame,
                action=a, reward=r, rtg=g,
            )
            for st, a, r, g in zip(states, actions, rewards, rtgs)
        )
        yield TrajectoryRecord(
            index=i,
            scenario=scenario.id,
            episode=spec.id,
            steps=steps,
            collisions=ep.total_collisions,
            reached_goal=ep.state.node == spec.goal,
        )


def dataset_header(cfg: DatasetConfig) -> dict:
    return {"schema": DATASET_SCHEMA_VERSION, "config": asdict(cfg)}


def write_dataset(path, scenarios, episodes, cfg: DatasetConfig = DatasetConfig()) -> int:
    """Write the dataset as JSON-lines; returns the number of trajectories written."""
    n = 0
    with open(path, "wb") as f:
        f.write((json.dumps(dataset_header(cfg), sort_keys=True, separators=(",", ":")) + "\n").encode())
        for rec in gen_random_walks(scenarios, episodes, cfg):
            f.write((json.dumps(rec.to_dict(), sort_keys=True, separators=(",", ":")) + "\n").encode())
            n += 1
    return n
