"""Step-level policies: optimal and human-avoiding experts, plus scripted baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .planner import plan_path, dijkstra_distances
from .sim import (
    DEFAULT_SUCCESS_RADIUS,
    Episode,
    FOV_HALF_ANGLE,
    HEADING_STEP,
    TrajectoryLog,
    bearing_deg,
    wrap_deg,
)
from .world import occupied_nodes


@dataclass(frozen=True)
class PlannerConfig:
    epsilon: float = 1.0  # minimum safe distance
    delta: float = 2.0  # avoidance threshold: reroute when a human is this close
    occupancy_radius: float = 1.0
    replan_every: int = 1

    def __post_init__(self):
        if not 0 < self.epsilon <= self.delta:
            raise ValueError("require 0 < epsilon <= delta")
        if self.replan_every < 1:
            raise ValueError("replan_every must be >= 1")


def steer_toward(episode: Episode, target: str) -> tuple[str, str | None]:
    """Emit the rotation or forward needed to traverse the edge to an adjacent node."""
    if episode.mode == "panoramic":
        return "forward", target
    g = episode.scenario.graph
    state = episode.state
    b = bearing_deg(g.position(state.node), g.position(target))
    diff = wrap_deg(b - state.heading)
    if abs(diff) <= HEADING_STEP / 2:
        return "forward", None
    return ("right" if diff > 0 else "left"), None


class OptimalExpert:
    """Human-oblivious shortest-path policy: always reaches the goal, may collide."""

    def next_action(self, episode: Episode) -> tuple[str, str | None]:
        state = episode.state
        if state.node == episode.spec.goal:
            return "stop", None
        plan = plan_path(episode.scenario.graph, state.node, episode.spec.goal)
        nxt = plan.next_node
        if nxt is None:
            return "stop", None
        return steer_toward(episode, nxt)


class SuboptimalExpert:
    """Plans on the human-excluded graph, adjusts dynamically, reroutes when too close."""

    def __init__(self, cfg: PlannerConfig = PlannerConfig()):
        self.cfg = cfg
        self._plan: list[str] | None = None
        self._fallback: str | None = None
        self._since_replan = 0

    def next_action(self, episode: Episode) -> tuple[str, str | None]:
        cfg = self.cfg
        state = episode.state
        s = episode.scenario
        g = s.graph
        goal = episode.spec.goal
        if state.node == goal:
            return "stop", None

        occ = set(occupied_nodes(s, state.frame, cfg.occupancy_radius).nodes)
        excluded = occ - {state.node}

        # Reroute when the nearest human is within the avoidance threshold:
        # its zone is inflated to delta before planning.
        if s.humans:
            agent_pos = np.asarray(g.position(state.node))
            hp = s.human_positions(state.frame)
            dists = np.linalg.norm(hp - agent_pos[None, :], axis=1)
            nearest = int(np.argmin(dists))
            if dists[nearest] < cfg.delta:
                near = hp[nearest]
                for nid in g.node_ids():
                    if np.linalg.norm(np.asarray(g.position(nid)) - near) < cfg.delta:
                        excluded.add(nid)
                excluded.discard(state.node)
                self._plan = None  # force replanning under the inflated zone

        stale = (
            self._plan is None
            or state.node not in self._plan
            or self._since_replan >= cfg.replan_every
        )
        if stale:
            result = plan_path(g, state.node, goal, frozenset(excluded))
            self._plan = result.path
            self._fallback = result.fallback
            self._since_replan = 0
        else:
            self._since_replan += 1

        path = self._plan or [state.node]
        i = path.index(state.node)
        if i + 1 >= len(path):
            # At the goal-side end of the plan; with the goal excluded this is
            # the fallback node and no further progress is possible.
            return "stop", None
        nxt = path[i + 1]

        # Dynamic adjustment for cached plans whose next hop became occupied.
        if nxt in occ:
            self._plan = None
            gdist = dijkstra_distances(g, goal, excluded=frozenset(excluded))
            cands = [n for n in g.neighbors(state.node) if n not in excluded]
            if not cands:
                return "left", None  # boxed in: wait a beat while humans move
            nxt = min(cands, key=lambda n: (g.weight(state.node, n) + gdist.get(n, math.inf), n))
        return steer_toward(episode, nxt)


class GreedyPolicy:
    """Moves to the admissible neighbor nearest the goal; stops inside the success radius."""

    def __init__(self, success_radius: float = DEFAULT_SUCCESS_RADIUS):
        self.success_radius = success_radius

    def next_action(self, episode: Episode) -> tuple[str, str | None]:
        if episode.goal_distance() <= self.success_radius:
            return "stop", None
        g = episode.scenario.graph
        state = episode.state
        cands = list(g.neighbors(state.node))
        best = min(cands, key=lambda n: (episode.goal_distance(n), n))
        # Turning in place keeps the current distance, so a neighbor that moves
        # away from the goal never beats rotating toward a better one.
        return steer_toward(episode, best)


class RandomPolicy:
    """Uniform over currently valid actions; stop withheld for the first few steps."""

    def __init__(self, rng: np.random.Generator, min_steps_before_stop: int = 3):
        self.rng = rng
        self.min_steps_before_stop = min_steps_before_stop

    def next_action(self, episode: Episode) -> tuple[str, str | None]:
        state = episode.state
        g = episode.scenario.graph
        options: list[tuple[str, str | None]] = [("left", None), ("right", None)]
        if state.elevation < 30:
            options.append(("up", None))
        if state.elevation > -30:
            options.append(("down", None))
        if episode.mode == "panoramic":
            for n in sorted(g.neighbors(state.node)):
                options.append(("forward", n))
        else:
            pos = g.position(state.node)
            if any(
                abs(wrap_deg(bearing_deg(pos, g.position(n)) - state.heading)) <= FOV_HALF_ANGLE
                for n in g.neighbors(state.node)
            ):
                options.append(("forward", None))
        if episode.steps_taken >= self.min_steps_before_stop:
            options.append(("stop", None))
        return options[int(self.rng.integers(len(options)))]


def run_policy(episode: Episode, policy) -> TrajectoryLog:
    """Drive an episode to completion under a policy and return its log."""
    episode.reset()
    while not episode.done:
        action, target = policy.next_action(episode)
        episode.step(action, target)
    assert episode.log is not None
    return episode.log


def make_policy(name: str, seed: int = 0, cfg: PlannerConfig | None = None):
    if name == "oracle-optimal":
        return OptimalExpert()
    if name == "oracle-suboptimal":
        return SuboptimalExpert(cfg or PlannerConfig())
    if name == "greedy":
        return GreedyPolicy()
    if name == "random":
        return RandomPolicy(np.random.default_rng(seed))
    raise ValueError(f"unknown policy {name!r}")
