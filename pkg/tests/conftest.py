"""Shared builders for small hand-made scenarios used across the suite."""

from __future__ import annotations

import itertools

import pytest

from humnav.world import (
    HumanActivity,
    HumanInstance,
    NavGraph,
    Scenario,
    ScenarioMeta,
    Viewpoint,
)

_id_counter = itertools.count()


def make_graph(positions: dict[str, tuple], edges: list[tuple[str, str]], region: str = "hallway") -> NavGraph:
    vps = [Viewpoint(id=n, position=tuple(float(x) for x in p), region=region) for n, p in positions.items()]
    return NavGraph(vps, edges)


def make_human(hid: str, anchor: str, waypoints, region: str = "hallway", radius: float = 0.3) -> HumanInstance:
    act = HumanActivity(id=f"act-test-{next(_id_counter)}", description="walking down the hall", region=region)
    return HumanInstance(
        id=hid,
        activity=act,
        anchor=anchor,
        waypoints=tuple(tuple(float(x) for x in w) for w in waypoints),
        footprint_radius=radius,
    )


def make_scenario(positions, edges, humans=(), sid: str = "s-test", split: str = "seen") -> Scenario:
    g = make_graph(positions, edges)
    return Scenario(id=sid, graph=g, humans=list(humans), meta=ScenarioMeta(name=sid, split=split))


def line_positions(n: int, spacing: float = 4.0) -> dict[str, tuple]:
    return {f"n{i}": (i * spacing, 0.0, 0.0) for i in range(n)}


def line_edges(n: int) -> list[tuple[str, str]]:
    return [(f"n{i}", f"n{i + 1}") for i in range(n - 1)]


def grid_positions(cols: int, rows: int, spacing: float = 4.0) -> dict[str, tuple]:
    return {f"g{r}{c}": (c * spacing, r * spacing, 0.0) for r in range(rows) for c in range(cols)}


def grid_edges(cols: int, rows: int) -> list[tuple[str, str]]:
    out = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                out.append((f"g{r}{c}", f"g{r}{c + 1}"))
            if r + 1 < rows:
                out.append((f"g{r}{c}", f"g{r + 1}{c}"))
    return out


@pytest.fixture
def corridor():
    """Five-node straight corridor, 4 m spacing, no humans."""
    return make_scenario(line_positions(5), line_edges(5), sid="corridor")


@pytest.fixture
def small_grid():
    """4x3 grid scenario with no humans."""
    return make_scenario(grid_positions(4, 3), grid_edges(4, 3), sid="grid43")
