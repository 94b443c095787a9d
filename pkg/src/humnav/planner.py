"""Shortest-path planning on navigation graphs with node exclusion sets."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from .world import NavGraph, _dist


class PlannerError(ValueError):
    """Raised for invalid planning queries (unknown or excluded start)."""


@dataclass
class PlanResult:
    path: list[str] | None
    cost: float
    fallback: str | None = None
    expansions: int = 0

    @property
    def reached_goal(self) -> bool:
        return self.fallback is None and self.path is not None

    @property
    def next_node(self) -> str | None:
        if self.path is not None and len(self.path) > 1:
            return self.path[1]
        return None


def dijkstra_distances(g: NavGraph, source: str, excluded: frozenset[str] | set[str] = frozenset()) -> dict[str, float]:
    """Geodesic distances from source to every reachable node, skipping excluded nodes."""
    if source not in g.nodes:
        raise PlannerError(f"unknown node {source!r}")
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done: set[str] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, w in g.neighbors(u).items():
            if v in excluded:
                continue
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _astar(g: NavGraph, start: str, goal: str, excluded) -> tuple[list[str] | None, float, int]:
    """A* with Euclidean heuristic (admissible: edge weights are Euclidean distances)."""
    gp = g.position(goal)
    h0 = _dist(g.position(start), gp)
    gscore = {start: 0.0}
    came: dict[str, str] = {}
    heap = [(h0, start)]
    closed: set[str] = set()
    expansions = 0
    while heap:
        f, u = heapq.heappop(heap)
        if u in closed:
            continue
        closed.add(u)
        expansions += 1
        if u == goal:
            path = [u]
            while path[-1] != start:
                path.append(came[path[-1]])
            path.reverse()
            return path, gscore[u], expansions
        for v, w in g.neighbors(u).items():
            if v in excluded or v in closed:
                continue
            nd = gscore[u] + w
            if nd < gscore.get(v, math.inf):
                gscore[v] = nd
                came[v] = u
                heapq.heappush(heap, (nd + _dist(g.position(v), gp), v))
    return None, math.inf, expansions


def plan_path(g: NavGraph, start: str, goal: str, excluded: frozenset[str] | set[str] = frozenset()) -> PlanResult:
    """Shortest path from start to goal avoiding excluded nodes.

    When the goal is excluded or unreachable, falls back to the reachable
    node nearest the goal (by geodesic distance on the full graph, ties by
    smaller id) and returns the path to it.
    """
    if start not in g.nodes:
        raise PlannerError(f"unknown start node {start!r}")
    if goal not in g.nodes:
        raise PlannerError(f"unknown goal node {goal!r}")
    if start in excluded:
        raise PlannerError(f"start node {start!r} is excluded")

    if goal not in excluded:
        path, cost, exp = _astar(g, start, goal, excluded)
        if path is not None:
            return PlanResult(path=path, cost=cost, expansions=exp)

    # Goal excluded or disconnected: pick the reachable node nearest the goal.
    reachable = dijkstra_distances(g, start, excluded)
    goal_dist = dijkstra_distances(g, goal)
    best = min(
        reachable,
        key=lambda n: (goal_dist.get(n, math.inf), n),
    )
    path, cost, exp = _astar(g, start, best, excluded)
    return PlanResult(path=path, cost=cost, fallback=best, expansions=exp)
