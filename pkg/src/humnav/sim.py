"""Discrete-time episode engine: agent pose, action semantics, collisions, rewards."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .planner import dijkstra_distances
from .world import (
    DEFAULT_VISIBILITY_RANGE,
    FPS,
    Scenario,
    ScenarioError,
    Vec3,
    _dist,
)

ACTIONS = ("forward", "left", "right", "up", "down", "stop")
HEADING_STEP = 30
ELEVATIONS = (-30, 0, 30)
FOV_HALF_ANGLE = 30.0
ROTATION_FRAMES = 8
OBSERVATION_WINDOW_FRAMES = 32  # 2 s at 16 FPS
AGENT_SPEED = 1.0  # m/s
DEFAULT_COLLISION_THRESHOLD = 1.0
DEFAULT_SUCCESS_RADIUS = 3.0
DEFAULT_STEP_CAP = 30

REWARD_TARGET_SUCCESS = 5.0
REWARD_TARGET_FAIL = -5.0
REWARD_DISTANCE_GAIN = 1.0
REWARD_DISTANCE_LOSS = -0.1
REWARD_PER_COLLISION = -2.0


class EpisodeDone(RuntimeError):
    """Raised when stepping a finished episode."""


def bearing_deg(a: Vec3, b: Vec3) -> float:
    """Horizontal bearing from a to b, degrees in [0, 360), 0 along +y, clockwise."""
    return math.degrees(math.atan2(b[0] - a[0], b[1] - a[1])) % 360.0


def wrap_deg(x: float) -> float:
    """Wrap an angle difference into [-180, 180)."""
    return (x + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class AgentState:
    node: str
    heading: int
    elevation: int
    frame: int


@dataclass(frozen=True)
class NavigableEntry:
    node: str
    bearing: float
    distance: float


@dataclass(frozen=True)
class HumanSighting:
    human: str
    bearing: float
    distance: float


@dataclass(frozen=True)
class Observation:
    agent: AgentState
    navigable: tuple[NavigableEntry, ...]
    humans_visible: tuple[HumanSighting, ...]
    collision: bool
    window_frames: int


@dataclass(frozen=True)
class StepOutcome:
    observation: Observation
    rewards: dict[str, float]
    collision_events: int
    done: bool
    invalid_action: bool


@dataclass(frozen=True)
class EpisodeSpec:
    id: str
    instruction: str
    start_node: str
    start_heading: int
    start_elevation: int
    goal: str
    reference_path: tuple[str, ...]
    step_cap: int = DEFAULT_STEP_CAP

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "instruction": self.instruction,
            "start": {
                "node": self.start_node,
                "heading": self.start_heading,
                "elevation": self.start_elevation,
            },
            "goal": self.goal,
            "reference_path": list(self.reference_path),
            "step_cap": self.step_cap,
        }

    @staticmethod
    def from_dict(d: dict) -> "EpisodeSpec":
        st = d["start"]
        return EpisodeSpec(
            id=d["id"],
            instruction=d.get("instruction", ""),
            start_node=st["node"],
            start_heading=int(st.get("heading", 0)),
            start_elevation=int(st.get("elevation", 0)),
            goal=d["goal"],
            reference_path=tuple(d["reference_path"]),
            step_cap=int(d.get("step_cap", DEFAULT_STEP_CAP)),
        )


def detect_collisions(
    agent_positions,
    human_positions,
    threshold: float = DEFAULT_COLLISION_THRESHOLD,
    initially_inside=None,
) -> int:
    """Count zone-entry events over a frame-aligned segment.

    agent_positions: (F, 3) agent position per frame.
    human_positions: (H, F, 3) human positions over the same frames.
    One event per human per entry into the < threshold zone; a segment that
    begins inside the zone counts as an entry unless initially_inside marks
    that human as already inside.
    """
    events, _ = detect_collisions_stateful(agent_positions, human_positions, threshold, initially_inside)
    return events


def detect_collisions_stateful(agent_positions, human_positions, threshold, initially_inside=None):
    ap = np.asarray(agent_positions, dtype=float)
    hp = np.asarray(human_positions, dtype=float)
    if hp.size == 0 or ap.size == 0:
        n_h = hp.shape[0] if hp.ndim == 3 else 0
        inside = list(initially_inside) if initially_inside is not None else [False] * n_h
        return 0, inside
    d = np.linalg.norm(hp - ap[None, :, :], axis=2)  # (H, F)
    in_zone = d < threshold
    if initially_inside is None:
        prev = np.zeros(in_zone.shape[0], dtype=bool)
    else:
        prev = np.asarray(initially_inside, dtype=bool)
    entries = in_zone & ~np.concatenate([prev[:, None], in_zone[:, :-1]], axis=1)
    return int(entries.sum()), list(in_zone[:, -1])


def compute_rewards(
    prev_dist: float,
    new_dist: float,
    stopped: bool,
    collision_events: int,
    success_radius: float = DEFAULT_SUCCESS_RADIUS,
) -> dict[str, float]:
    target = 0.0
    if stopped:
        target = REWARD_TARGET_SUCCESS if new_dist <= success_radius else REWARD_TARGET_FAIL
    distance = REWARD_DISTANCE_GAIN if new_dist < prev_dist else REWARD_DISTANCE_LOSS
    human = REWARD_PER_COLLISION * collision_events if collision_events else 0.0
    return {"target": target, "distance": distance, "human": human}


@dataclass
class CollisionEvent:
    frame: int
    human: str
    agent_xyz: Vec3

    def to_dict(self) -> dict:
        return {
            "frame": self.frame,
            "human": self.human,
            "xyz": [round(c, 6) for c in self.agent_xyz],
        }


class TrajectoryLog:
    """Recorded step stream of one episode; JSON-lines with a header line."""

    def __init__(self, header: dict):
        self.header = header
        self.records: list[dict] = []

    def append(self, record: dict) -> None:
        self.records.append(record)

    def to_bytes(self) -> bytes:
        lines = [json.dumps(self.header, sort_keys=True, separators=(",", ":"))]
        lines += [json.dumps(r, sort_keys=True, separators=(",", ":")) for r in self.records]
        return ("\n".join(lines) + "\n").encode()

    @staticmethod
    def from_bytes(raw: bytes) -> "TrajectoryLog":
        lines = raw.decode().splitlines()
        log = TrajectoryLog(json.loads(lines[0]))
        for line in lines[1:]:
            log.append(json.loads(line))
        return log

    @property
    def done(self) -> bool:
        return bool(self.records) and self.records[-1]["done"]

    @property
    def final_node(self) -> str:
        if self.records:
            return self.records[-1]["node"]
        return self.header["start"]["node"]

    def all_events(self) -> list[dict]:
        events = list(self.header.get("initial_events", []))
        for r in self.records:
            events.extend(r.get("events", []))
        return events

    def total_collisions(self) -> int:
        return len(self.all_events())

    def actions(self) -> list[tuple[str, str | None]]:
        out = []
        for r in self.records:
            a = r["action"]
            if ":" in a:
                kind, target = a.split(":", 1)
                out.append((kind, target))
            else:
                out.append((a, None))
        return out


class Episode:
    """A single-writer episode session over a shared immutable scenario."""

    def __init__(
        self,
        scenario: Scenario,
        spec: EpisodeSpec,
        mode: str = "egocentric",
        seed: int = 0,
        collision_threshold: float = DEFAULT_COLLISION_THRESHOLD,
        visibility_range: float = DEFAULT_VISIBILITY_RANGE,
        success_radius: float = DEFAULT_SUCCESS_RADIUS,
    ):
        if mode not in ("egocentric", "panoramic"):
            raise ValueError(f"unknown mode {mode!r}")
        g = scenario.graph
        for nid in (spec.start_node, spec.goal):
            if nid not in g.nodes:
                raise ScenarioError(f"episode references unknown node {nid!r}")
        if spec.reference_path:
            if spec.reference_path[0] != spec.start_node or spec.reference_path[-1] != spec.goal:
                raise ScenarioError("reference path must run from start to goal")
            for a, b in zip(spec.reference_path, spec.reference_path[1:]):
                if not g.has_edge(a, b):
                    raise ScenarioError(f"reference path nodes {a!r}, {b!r} not adjacent")
        if spec.start_heading % HEADING_STEP or not 0 <= spec.start_heading < 360:
            raise ScenarioError("start heading must be on the 30-degree lattice")
        if spec.start_elevation not in ELEVATIONS:
            raise ScenarioError("start elevation must be one of -30, 0, 30")

        self.scenario = scenario
        self.spec = spec
        self.mode = mode
        self.seed = seed
        self.collision_threshold = collision_threshold
        self.visibility_range = visibility_range
        self.success_radius = success_radius

        self.dist_to_goal = dijkstra_distances(g, spec.goal)
        self._node = spec.start_node
        self._heading = spec.start_heading
        self._elevation = spec.start_elevation
        self._frame = 0
        self._steps = 0
        self._done = False
        self._in_zone = [False] * len(scenario.humans)
        self.total_collisions = 0
        self.log: TrajectoryLog | None = None
        self._initial_obs: Observation | None = None

    # -- state ---------------------------------------------------------------

    @property
    def state(self) -> AgentState:
        return AgentState(self._node, self._heading, self._elevation, self._frame)

    @property
    def done(self) -> bool:
        return self._done

    @property
    def steps_taken(self) -> int:
        return self._steps

    def goal_distance(self, node: str | None = None) -> float:
        return self.dist_to_goal.get(node or self._node, math.inf)

    # -- lifecycle -----------------------------------------------------------

    def reset(self) -> Observation:
        """Place the agent and play out the initial 2 s observation window."""
        self._node = self.spec.start_node
        self._heading = self.spec.start_heading
        self._elevation = self.spec.start_elevation
        self._frame = 0
        self._steps = 0
        self._done = False
        self._in_zone = [False] * len(self.scenario.humans)
        self.total_collisions = 0

        frames = list(range(OBSERVATION_WINDOW_FRAMES))
        pos = self.scenario.graph.position(self._node)
        agent_traj = [pos] * len(frames)
        events, detail = self._collide(agent_traj, frames)
        self._frame = OBSERVATION_WINDOW_FRAMES
        self.total_collisions += events

        self.log = TrajectoryLog({
            "episode": self.spec.id,
            "scenario": self.scenario.id,
            "mode": self.mode,
            "seed": self.seed,
            "start": {"node": self._node, "heading": self._heading, "elevation": self._elevation},
            "goal": self.spec.goal,
            "window_frames": OBSERVATION_WINDOW_FRAMES,
            "initial_events": [e.to_dict() for e in detail],
        })
        obs = self._observe(agent_traj, frames, events > 0, OBSERVATION_WINDOW_FRAMES)
        self._initial_obs = obs
        return obs

    def step(self, action: str, target: str | None = None) -> StepOutcome:
        if self.log is None:
            raise EpisodeDone("call reset() before step()")
        if self._done:
            raise EpisodeDone("episode already finished")
        if action not in ACTIONS:
            raise ValueError(f"unknown action {action!r}")

        g = self.scenario.graph
        prev_node = self._node
        prev_dist = self.goal_distance(prev_node)
        invalid = False
        stopped = False
        action_label = action

        if action == "stop":
            stopped = True
            frames: list[int] = []
            agent_traj: list[Vec3] = []
        elif action in ("left", "right"):
            delta = -HEADING_STEP if action == "left" else HEADING_STEP
            self._heading = (self._heading + delta) % 360
            frames, agent_traj = self._hold_frames(ROTATION_FRAMES)
        elif action in ("up", "down"):
            delta = HEADING_STEP if action == "up" else -HEADING_STEP
            new_elev = self._elevation + delta
            if new_elev in ELEVATIONS:
                self._elevation = new_elev
            else:
                invalid = True
            frames, agent_traj = self._hold_frames(ROTATION_FRAMES)
        else:  # forward
            dest = self._forward_destination(target)
            if dest is None:
                invalid = True
                frames, agent_traj = self._hold_frames(ROTATION_FRAMES)
            else:
                if self.mode == "panoramic":
                    action_label = f"forward:{dest}"
                a, b = g.position(self._node), g.position(dest)
                d = g.weight(self._node, dest)
                k = max(1, math.ceil(FPS * d / AGENT_SPEED))
                frames = list(range(self._frame, self._frame + k))
                agent_traj = [
                    (
                        a[0] + (i + 1) / k * (b[0] - a[0]),
                        a[1] + (i + 1) / k * (b[1] - a[1]),
                        a[2] + (i + 1) / k * (b[2] - a[2]),
                    )
                    for i in range(k)
                ]
                self._node = dest

        events, detail = self._collide(agent_traj, frames)
        self._frame += len(frames)
        self.total_collisions += events
        self._steps += 1

        new_dist = self.goal_distance(self._node)
        rewards = compute_rewards(prev_dist, new_dist, stopped, events, self.success_radius)
        self._done = stopped or self._steps >= self.spec.step_cap

        obs = self._observe(agent_traj or [g.position(self._node)], frames or [self._frame],
                            events > 0, len(frames))
        outcome = StepOutcome(
            observation=obs,
            rewards=rewards,
            collision_events=events,
            done=self._done,
            invalid_action=invalid,
        )
        self.log.append({
            "t_frame": self._frame,
            "node": self._node,
            "heading": self._heading,
            "elevation": self._elevation,
            "action": action_label,
            "rewards": {k: round(v, 6) for k, v in rewards.items()},
            "collisions": events,
            "invalid": invalid,
            "done": self._done,
            "events": [e.to_dict() for e in detail],
        })
        return outcome

    # -- internals -----------------------------------------------------------

    def _hold_frames(self, n: int) -> tuple[list[int], list[Vec3]]:
        pos = self.scenario.graph.position(self._node)
        frames = list(range(self._frame, self._frame + n))
        return frames, [pos] * n

    def _fov_neighbors(self) -> list[NavigableEntry]:
        g = self.scenario.graph
        pos = g.position(self._node)
        out = []
        for nid in sorted(g.neighbors(self._node)):
            b = bearing_deg(pos, g.position(nid))
            if self.mode == "panoramic" or abs(wrap_deg(b - self._heading)) <= FOV_HALF_ANGLE:
                out.append(NavigableEntry(node=nid, bearing=b, distance=g.weight(self._node, nid)))
        return out

    def _forward_destination(self, target: str | None) -> str | None:
        g = self.scenario.graph
        if self.mode == "panoramic":
            if target is None:
                return None
            if not g.has_edge(self._node, target):
                raise ValueError(f"target {target!r} is not adjacent to {self._node!r}")
            return target
        candidates = self._fov_neighbors()
        if not candidates:
            return None
        best = min(candidates, key=lambda e: (abs(wrap_deg(e.bearing - self._heading)), e.node))
        return best.node

    def _collide(self, agent_traj: list[Vec3], frames: list[int]) -> tuple[int, list[CollisionEvent]]:
        humans = self.scenario.humans
        if not humans or not frames:
            return 0, []
        table = self.scenario.human_table()
        idx = np.asarray(frames) % table.shape[1]
        hp = table[:, idx, :]  # (H, F, 3)
        ap = np.asarray(agent_traj, dtype=float)
        d = np.linalg.norm(hp - ap[None, :, :], axis=2)
        in_zone = d < self.collision_threshold
        prev = np.asarray(self._in_zone, dtype=bool)
        entries = in_zone & ~np.concatenate([prev[:, None], in_zone[:, :-1]], axis=1)
        self._in_zone = list(in_zone[:, -1])
        detail = []
        for hi, fi in zip(*np.nonzero(entries)):
            detail.append(CollisionEvent(
                frame=int(frames[fi]),
                human=humans[hi].id,
                agent_xyz=tuple(float(c) for c in ap[fi]),
            ))
        detail.sort(key=lambda e: (e.frame, e.human))
        return len(detail), detail

    def _observe(self, agent_traj: list[Vec3], frames: list[int], collided: bool, window: int) -> Observation:
        humans = self.scenario.humans
        sightings = []
        if humans:
            table = self.scenario.human_table()
            idx = np.asarray(frames) % table.shape[1]
            hp = table[:, idx, :]
            ap = np.asarray(agent_traj, dtype=float)
            d = np.linalg.norm(hp - ap[None, :, :], axis=2)  # (H, F)
            for hi, h in enumerate(humans):
                best_f = None
                best_d = math.inf
                for fi in range(d.shape[1]):
                    dist = d[hi, fi]
                    if dist >= self.visibility_range or dist >= best_d:
                        continue
                    b = bearing_deg(tuple(ap[fi]), tuple(hp[hi, fi]))
                    if self.mode == "egocentric" and abs(wrap_deg(b - self._heading)) > FOV_HALF_ANGLE:
                        continue
                    best_f, best_d = fi, dist
                if best_f is not None:
                    b = bearing_deg(tuple(ap[best_f]), tuple(hp[hi, best_f]))
                    sightings.append(HumanSighting(human=h.id, bearing=b, distance=float(best_d)))
        return Observation(
            agent=self.state,
            navigable=tuple(self._fov_neighbors()),
            humans_visible=tuple(sightings),
            collision=collided,
            window_frames=window,
        )
