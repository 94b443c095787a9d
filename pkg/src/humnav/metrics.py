"""Per-episode counters and aggregate human-aware metrics (raw and critical-node-corrected)."""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

from .sim import DEFAULT_SUCCESS_RADIUS, EpisodeSpec, TrajectoryLog
from .world import (
    DEFAULT_OCCUPANCY_RADIUS,
    DEFAULT_VISIBILITY_RANGE,
    Scenario,
    _dist,
    classify_viewpoints,
    critical_nodes,
    occupied_nodes,
)


class MetricsError(ValueError):
    pass


@dataclass(frozen=True)
class EpisodeCounters:
    c: int  # collision events
    a_crit: int  # events attributable to critical-node activities
    d: float  # geodesic final-to-goal distance, meters
    affected: bool  # human activity impinges on this instruction

    def __post_init__(self):
        if not 0 <= self.a_crit <= self.c:
            raise MetricsError("require 0 <= a_crit <= c")
        if self.d < 0:
            raise MetricsError("distance must be non-negative")


@dataclass(frozen=True)
class MetricsReport:
    TCR: float
    CR: float | None
    NE: float
    SR: float
    TCR_raw: float
    CR_raw: float | None
    NE_raw: float
    SR_raw: float
    SR_goal: float
    beta: float
    L: int

    def to_dict(self) -> dict:
        return asdict(self)


def episode_counters(
    log: TrajectoryLog,
    spec: EpisodeSpec,
    s: Scenario,
    occupancy_radius: float = DEFAULT_OCCUPANCY_RADIUS,
    visibility_range: float = DEFAULT_VISIBILITY_RANGE,
) -> EpisodeCounters:
    if not log.done:
        raise MetricsError("trajectory log is incomplete (episode not done)")
    events = log.all_events()
    c = len(events)

    crit = critical_nodes(s.graph, list(spec.reference_path))
    a_crit = 0
    for ev in events:
        frame = ev["frame"]
        xyz = tuple(ev["xyz"])
        occ = occupied_nodes(s, frame, occupancy_radius).nodes
        for n in crit:
            if n in occ and _dist(xyz, s.graph.position(n)) < occupancy_radius:
                a_crit += 1
                break

    from .planner import dijkstra_distances

    d = dijkstra_distances(s.graph, spec.goal).get(log.final_node, math.inf)
    labels = classify_viewpoints(s, visibility_range, occupancy_radius)
    affected = any(labels[n] != "unaffected" for n in spec.reference_path)
    return EpisodeCounters(c=c, a_crit=a_crit, d=d, affected=affected)


def aggregate(
    counters: list[EpisodeCounters],
    success_radius: float = DEFAULT_SUCCESS_RADIUS,
) -> MetricsReport:
    if not counters:
        raise MetricsError("no episode counters to aggregate")
    L = len(counters)
    beta = sum(1 for ec in counters if ec.affected) / L

    corrected = [ec.c - ec.a_crit for ec in counters]
    tcr = sum(corrected) / L
    tcr_raw = sum(ec.c for ec in counters) / L
    ne = sum(ec.d for ec in counters) / L
    sr = sum(1 for ec, cc in zip(counters, corrected) if cc == 0 and ec.d <= success_radius) / L
    sr_raw = sum(1 for ec in counters if ec.c == 0 and ec.d <= success_radius) / L
    sr_goal = sum(1 for ec in counters if ec.d <= success_radius) / L

    if beta > 0:
        cr = sum(min(cc, 1) for cc in corrected) / (beta * L)
        cr_raw = sum(min(ec.c, 1) for ec in counters) / (beta * L)
    else:
        if any(corrected):
            raise MetricsError("beta is zero but corrected collisions are nonzero")
        cr = None
        cr_raw = None

    return MetricsReport(
        TCR=tcr, CR=cr, NE=ne, SR=sr,
        TCR_raw=tcr_raw, CR_raw=cr_raw, NE_raw=ne, SR_raw=sr_raw,
        SR_goal=sr_goal, beta=beta, L=L,
    )
