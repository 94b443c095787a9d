"""Experiment runner: episode suites, scripted-agent evaluation, table assembly."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experts import make_policy
from .metrics import EpisodeCounters, MetricsReport, aggregate, episode_counters
from .planner import dijkstra_distances
from .sim import DEFAULT_STEP_CAP, Episode, EpisodeSpec, TrajectoryLog
from .world import Scenario, ScenarioMeta

CSV_COLUMNS = ("agent", "split", "mode", "NE", "TCR", "CR", "SR", "SR_raw", "SR_goal", "beta", "L")


def shortest_path(graph, start: str, goal: str) -> list[str] | None:
    from .planner import plan_path

    result = plan_path(graph, start, goal)
    return result.path if result.reached_goal else None


def make_episodes(
    scenario: Scenario,
    n: int,
    rng: np.random.Generator,
    min_hops: int = 3,
    max_hops: int = 6,
    step_cap: int = DEFAULT_STEP_CAP,
) -> list[EpisodeSpec]:
    """Sample start/goal pairs whose shortest paths have min_hops..max_hops edges."""
    g = scenario.graph
    ids = g.node_ids()
    episodes = []
    attempts = 0
    while len(episodes) < n and attempts < 200 * n:
        attempts += 1
        start = ids[int(rng.integers(len(ids)))]
        goal = ids[int(rng.integers(len(ids)))]
        if start == goal:
            continue
        path = shortest_path(g, start, goal)
        if path is None or not min_hops <= len(path) - 1 <= max_hops:
            continue
        heading = int(rng.integers(12)) * 30
        episodes.append(EpisodeSpec(
            id=f"{scenario.id}-e{len(episodes):03d}",
            instruction=f"go from {start} to {goal}",
            start_node=start,
            start_heading=heading,
            start_elevation=0,
            goal=goal,
            reference_path=tuple(path),
            step_cap=step_cap,
        ))
    if len(episodes) < n:
        raise ValueError(f"could not sample {n} episodes from scenario {scenario.id}")
    return episodes


def strip_humans(s: Scenario) -> Scenario:
    return Scenario(id=s.id, graph=s.graph, humans=[], meta=s.meta)


def make_blocked_suite(
    n: int,
    block_goal_every: int = 8,
    seed0: int = 5000,
) -> tuple[list[Scenario], list[tuple[str, EpisodeSpec]], list[str]]:
    """Build episodes whose reference paths cross human activity.

    Each scenario gets a human pacing the middle edge of the reference path;
    every block_goal_every-th episode additionally has a stationary human
    parked on the goal, forcing avoidance planners onto a fallback node.
    Returns (scenarios, episodes, ids of goal-blocked episodes).
    """
    from .regions import activities_for_region
    from .world import GenerationParams, HumanActivity, HumanInstance, generate_scenario

    def activity_for(region: str) -> HumanActivity:
        a = activities_for_region(region)[0]
        return HumanActivity(id=a.id, description=a.description, region=a.region)

    scenarios: list[Scenario] = []
    episodes: list[tuple[str, EpisodeSpec]] = []
    goal_blocked: list[str] = []
    for i in range(n):
        base = generate_scenario(seed0 + i, GenerationParams(mean_humans=0.0))
        g = base.graph
        ep = make_episodes(base, 1, np.random.default_rng(seed0 + 4000 + i),
                           min_hops=4, max_hops=6)[0]
        path = ep.reference_path
        mid, nxt = path[len(path) // 2], path[len(path) // 2 + 1]
        humans = [HumanInstance(
            id="h00", activity=activity_for(g.nodes[mid].region),
            anchor=mid, waypoints=(g.position(mid), g.position(nxt)),
        )]
        sid = f"x{i:04d}"
        eid = f"{sid}-e0"
        if i % block_goal_every == 0:
            humans.append(HumanInstance(
                id="h01", activity=activity_for(g.nodes[ep.goal].region),
                anchor=ep.goal, waypoints=(g.position(ep.goal),),
            ))
            goal_blocked.append(eid)
        s = Scenario(id=sid, graph=g, humans=humans,
                     meta=ScenarioMeta(name=sid, split="seen"))
        scenarios.append(s)
        episodes.append((sid, EpisodeSpec(**{**ep.__dict__, "id": eid})))
    return scenarios, episodes, goal_blocked


@dataclass(frozen=True)
class ExperimentSpec:
    policy: str
    mode: str = "egocentric"
    environment: str = "dynamic"  # "static" strips humans from every scenario
    seed: int = 0

    def __post_init__(self):
        if self.environment not in ("static", "dynamic"):
            raise ValueError("environment must be static or dynamic")


@dataclass
class ExperimentResult:
    rows: list[dict]
    reports: dict[str, MetricsReport]
    counters: dict[str, list[EpisodeCounters]]
    errors: list[dict]
    logs: dict[str, TrajectoryLog]

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "reports": {k: r.to_dict() for k, r in self.reports.items()},
            "counters": {
                k: [{"c": ec.c, "a_crit": ec.a_crit, "d": round(ec.d, 6), "affected": ec.affected}
                    for ec in v]
                for k, v in self.counters.items()
            },
            "errors": self.errors,
        }


def run_experiment(
    scenarios: list[Scenario],
    episodes: list[tuple[str, EpisodeSpec]],
    spec: ExperimentSpec,
    log_dir: str | Path | None = None,
) -> ExperimentResult:
    """Run every episode under the policy; aggregate metrics per scenario split."""
    by_id = {s.id: s for s in scenarios}
    env_by_id = {
        sid: (strip_humans(s) if spec.environment == "static" else s)
        for sid, s in by_id.items()
    }
    counters_by_split: dict[str, list[EpisodeCounters]] = {}
    logs: dict[str, TrajectoryLog] = {}
    errors: list[dict] = []
    for i, (sid, ep_spec) in enumerate(episodes):
        scenario = env_by_id[sid]
        try:
            episode = Episode(scenario, ep_spec, mode=spec.mode, seed=spec.seed)
            policy = make_policy(spec.policy, seed=spec.seed * 100_003 + i)
            episode.reset()
            while not episode.done:
                action, target = policy.next_action(episode)
                episode.step(action, target)
            log = episode.log
            assert log is not None
            logs[ep_spec.id] = log
            ec = episode_counters(log, ep_spec, scenario)
            counters_by_split.setdefault(scenario.meta.split, []).append(ec)
        except Exception as e:  # episode-level failures are recorded, not fatal
            errors.append({"episode": ep_spec.id, "scenario": sid, "error": str(e)})
    if log_dir is not None:
        log_dir = Path(log_dir)
        log_dir.mkdir(parents=True, exist_ok=True)
        for eid, log in logs.items():
            (log_dir / f"{eid}.jsonl").write_bytes(log.to_bytes())
    reports = {split: aggregate(cs) for split, cs in sorted(counters_by_split.items())}
    rows = [
        table_row(spec.policy, split, spec.mode, rep) for split, rep in reports.items()
    ]
    return ExperimentResult(rows=rows, reports=reports, counters=counters_by_split,
                            errors=errors, logs=logs)


def table_row(agent: str, split: str, mode: str, rep: MetricsReport) -> dict:
    def fmt(x):
        return None if x is None else round(x, 6)

    return {
        "agent": agent, "split": split, "mode": mode,
        "NE": fmt(rep.NE), "TCR": fmt(rep.TCR), "CR": fmt(rep.CR), "SR": fmt(rep.SR),
        "SR_raw": fmt(rep.SR_raw), "SR_goal": fmt(rep.SR_goal),
        "beta": fmt(rep.beta), "L": rep.L,
    }


def rows_to_csv(rows: list[dict]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join("" if row[c] is None else str(row[c]) for c in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def load_episode_file(path) -> list[tuple[str, EpisodeSpec]]:
    doc = json.loads(Path(path).read_text())
    return [(e["scenario"], EpisodeSpec.from_dict(e)) for e in doc["episodes"]]


def save_episode_file(path, episodes: list[tuple[str, EpisodeSpec]]) -> None:
    doc = {"episodes": [{"scenario": sid, **spec.to_dict()} for sid, spec in episodes]}
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
