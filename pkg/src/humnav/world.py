"""Navigation graphs, scenarios, human trajectory kinematics, and procedural generation."""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from dataclasses import dataclass, field, replace

import numpy as np

from .regions import ACTIVITY_CATALOG, REGION_SET, activities_for_region

SCHEMA_VERSION = 1
CYCLE_FRAMES = 120
FPS = 16
DEFAULT_OCCUPANCY_RADIUS = 1.0
DEFAULT_VISIBILITY_RANGE = 10.0
DEFAULT_FOOTPRINT_RADIUS = 0.3
EDGE_WEIGHT_TOL = 1e-9

Vec3 = tuple[float, float, float]


class ScenarioError(ValueError):
    """Raised for malformed or inconsistent scenario documents."""


def _dist(a: Vec3, b: Vec3) -> float:
    return math.sqrt((a[0] - b[0]) ** 2 + (a[1] - b[1]) ** 2 + (a[2] - b[2]) ** 2)


@dataclass(frozen=True)
class Viewpoint:
    id: str
    position: Vec3
    region: str


class NavGraph:
    """Undirected navigation graph; edge weights are Euclidean distances, always derived."""

    def __init__(self, viewpoints: list[Viewpoint], edges: list[tuple[str, str]]):
        self.nodes: dict[str, Viewpoint] = {}
        for vp in viewpoints:
            if vp.id in self.nodes:
                raise ScenarioError(f"duplicate node id {vp.id!r}")
            if vp.region not in REGION_SET:
                raise ScenarioError(f"unknown region label {vp.region!r} on node {vp.id!r}")
            self.nodes[vp.id] = vp
        self._adj: dict[str, dict[str, float]] = {nid: {} for nid in self.nodes}
        self.edges: set[tuple[str, str]] = set()
        for a, b in edges:
            if a == b:
                raise ScenarioError(f"self-loop on node {a!r}")
            for nid in (a, b):
                if nid not in self.nodes:
                    raise ScenarioError(f"edge references unknown node {nid!r}")
            key = (a, b) if a < b else (b, a)
            if key in self.edges:
                continue
            w = _dist(self.nodes[a].position, self.nodes[b].position)
            self.edges.add(key)
            self._adj[a][b] = w
            self._adj[b][a] = w

    def neighbors(self, nid: str) -> dict[str, float]:
        return self._adj[nid]

    def weight(self, a: str, b: str) -> float:
        return self._adj[a][b]

    def has_edge(self, a: str, b: str) -> bool:
        return b in self._adj.get(a, {})

    def position(self, nid: str) -> Vec3:
        return self.nodes[nid].position

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)


@dataclass(frozen=True)
class HumanActivity:
    id: str
    description: str
    region: str
    cycle_frames: int = CYCLE_FRAMES
    fps: int = FPS

    def __post_init__(self):
        if self.cycle_frames != CYCLE_FRAMES or self.fps != FPS:
            raise ScenarioError("activities run on a 120-frame cycle at 16 FPS")


@dataclass(frozen=True)
class HumanInstance:
    id: str
    activity: HumanActivity
    anchor: str
    waypoints: tuple[Vec3, ...]
    footprint_radius: float = DEFAULT_FOOTPRINT_RADIUS

    def __post_init__(self):
        if not self.waypoints:
            raise ScenarioError(f"human {self.id!r} has no waypoints")

    @property
    def trajectory_length(self) -> float:
        return sum(_dist(a, b) for a, b in zip(self.waypoints, self.waypoints[1:]))

    def length_category(self) -> str:
        return trajectory_category(self.trajectory_length)


def trajectory_category(length: float) -> str:
    if length < 1.0:
        return "stationary"
    if length < 5.0:
        return "short"
    if length < 15.0:
        return "long"
    return "very_long"


TRAJECTORY_CATEGORIES = ("stationary", "short", "long", "very_long")


def human_position_at(h: HumanInstance, frame: int) -> Vec3:
    """Position by arc-length-uniform interpolation over one 120-frame cycle, looping."""
    pts = h.waypoints
    if len(pts) == 1:
        return pts[0]
    seglens = [_dist(a, b) for a, b in zip(pts, pts[1:])]
    total = sum(seglens)
    if total == 0.0:
        return pts[0]
    arc = (frame % CYCLE_FRAMES) / CYCLE_FRAMES * total
    for (a, b), sl in zip(zip(pts, pts[1:]), seglens):
        if sl > 0.0 and arc <= sl:
            t = min(max(arc / sl, 0.0), 1.0)
            return (
                a[0] + t * (b[0] - a[0]),
                a[1] + t * (b[1] - a[1]),
                a[2] + t * (b[2] - a[2]),
            )
        arc -= sl
    return pts[-1]


@dataclass(frozen=True)
class ScenarioMeta:
    name: str
    split: str


@dataclass(frozen=True)
class OccupancySet:
    frame: int
    nodes: frozenset[str]


class Scenario:
    """A building: navigation graph plus placed human activity instances.

    Immutable after construction; all derived tables are safe to share
    across threads.
    """

    def __init__(self, id: str, graph: NavGraph, humans: list[HumanInstance], meta: ScenarioMeta):
        self.id = id
        self.graph = graph
        self.humans = sorted(humans, key=lambda h: h.id)
        self.meta = meta
        seen = set()
        for h in self.humans:
            if h.id in seen:
                raise ScenarioError(f"duplicate human id {h.id!r}")
            seen.add(h.id)
            if h.anchor not in graph.nodes:
                raise ScenarioError(f"human {h.id!r} anchored at unknown node {h.anchor!r}")
            if _dist(h.waypoints[0], graph.position(h.anchor)) > 1e-5:
                raise ScenarioError(f"human {h.id!r} first waypoint is not its anchor position")
        # (H, 120, 3) table of human positions, one row per 16ths-of-a-second frame
        if self.humans:
            self._htable = np.array(
                [[human_position_at(h, f) for f in range(CYCLE_FRAMES)] for h in self.humans]
            )
        else:
            self._htable = np.zeros((0, CYCLE_FRAMES, 3))
        self._node_ids = self.graph.node_ids()
        self._npos = np.array([self.graph.position(n) for n in self._node_ids]) if self._node_ids else np.zeros((0, 3))

    def human_positions(self, frame: int) -> np.ndarray:
        """(H, 3) array of human positions at a frame."""
        return self._htable[:, frame % CYCLE_FRAMES, :]

    def human_table(self) -> np.ndarray:
        return self._htable


def occupied_nodes(s: Scenario, frame: int, r: float = DEFAULT_OCCUPANCY_RADIUS) -> OccupancySet:
    if r <= 0:
        raise ValueError("occupancy radius must be positive")
    if not s.humans:
        return OccupancySet(frame=frame, nodes=frozenset())
    hp = s.human_positions(frame)  # (H, 3)
    d = np.linalg.norm(s._npos[:, None, :] - hp[None, :, :], axis=2)  # (N, H)
    hit = (d < r).any(axis=1)
    return OccupancySet(frame=frame, nodes=frozenset(n for n, h in zip(s._node_ids, hit) if h))


def critical_nodes(g: NavGraph, path: list[str]) -> set[str]:
    """Path nodes with no shared one-hop neighbor with their successor (no bypass around that hop)."""
    for nid in path:
        if nid not in g.nodes:
            raise ScenarioError(f"path references unknown node {nid!r}")
    for a, b in zip(path, path[1:]):
        if not g.has_edge(a, b):
            raise ScenarioError(f"path nodes {a!r} and {b!r} are not adjacent")
    out = set()
    for a, b in zip(path, path[1:]):
        if not set(g.neighbors(a)) & set(g.neighbors(b)):
            out.add(a)
    return out


def _occupancy_profile(s: Scenario, r: float) -> np.ndarray:
    """(N,) bool: node comes within r of some human at some frame of the cycle."""
    if not s.humans:
        return np.zeros(len(s._node_ids), dtype=bool)
    hp = s.human_table().reshape(-1, 3)  # (H*120, 3)
    d = np.linalg.norm(s._npos[:, None, :] - hp[None, :, :], axis=2)
    return (d < r).any(axis=1)


def classify_viewpoints(
    s: Scenario,
    visibility_range: float = DEFAULT_VISIBILITY_RANGE,
    r: float = DEFAULT_OCCUPANCY_RADIUS,
) -> dict[str, str]:
    """Label every node occupied / isolated / visible / unaffected (priority in that order)."""
    if visibility_range <= 0:
        raise ValueError("visibility range must be positive")
    node_ids = s._node_ids
    occ = _occupancy_profile(s, r)
    if s.humans:
        hp = s.human_table().reshape(-1, 3)
        d = np.linalg.norm(s._npos[:, None, :] - hp[None, :, :], axis=2)
        vis = (d < visibility_range).any(axis=1)
    else:
        vis = np.zeros(len(node_ids), dtype=bool)
    occ_by_id = dict(zip(node_ids, occ))
    out: dict[str, str] = {}
    for i, nid in enumerate(node_ids):
        if occ[i]:
            out[nid] = "occupied"
            continue
        nbrs = set(s.graph.neighbors(nid))
        neighborhood_occupied = any(occ_by_id[m] for m in nbrs)
        is_critical = any(not (nbrs & set(s.graph.neighbors(w))) for w in nbrs)
        if neighborhood_occupied and is_critical:
            out[nid] = "isolated"
        elif vis[i]:
            out[nid] = "visible"
        else:
            out[nid] = "unaffected"
    return out


# ---------------------------------------------------------------------------
# Serialization (canonical: sorted keys, 6-decimal floats, byte-stable)

def _r6(x: float) -> float:
    return round(float(x), 6)


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "version": SCHEMA_VERSION,
        "id": s.id,
        "meta": {"name": s.meta.name, "split": s.meta.split},
        "nodes": [
            {"id": n.id, "xyz": [_r6(c) for c in n.position], "region": n.region}
            for n in sorted(s.graph.nodes.values(), key=lambda v: v.id)
        ],
        "edges": sorted([list(e) for e in s.graph.edges]),
        "humans": [
            {
                "id": h.id,
                "activity": {
                    "id": h.activity.id,
                    "description": h.activity.description,
                    "region": h.activity.region,
                },
                "anchor": h.anchor,
                "waypoints": [[_r6(c) for c in w] for w in h.waypoints],
                "footprint_radius": _r6(h.footprint_radius),
            }
            for h in s.humans
        ],
    }


def scenario_to_bytes(s: Scenario) -> bytes:
    return (json.dumps(scenario_to_dict(s), sort_keys=True, separators=(",", ":")) + "\n").encode()


def scenario_hash(s: Scenario) -> str:
    return hashlib.sha256(scenario_to_bytes(s)).hexdigest()


def save_scenario(s: Scenario, path) -> None:
    with open(path, "wb") as f:
        f.write(scenario_to_bytes(s))


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ScenarioError(f"unknown fields {sorted(extra)} in {where}")
    missing = required - set(obj)
    if missing:
        raise ScenarioError(f"missing fields {sorted(missing)} in {where}")


def _vec3(raw, where: str) -> Vec3:
    if not isinstance(raw, list) or len(raw) != 3:
        raise ScenarioError(f"{where} must be a 3-element array")
    return (float(raw[0]), float(raw[1]), float(raw[2]))


def scenario_from_dict(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be a JSON object")
    _require_keys(doc, {"version", "id", "meta", "nodes", "edges", "humans"},
                  {"version", "id", "meta", "nodes", "edges", "humans"}, "scenario")
    if doc["version"] != SCHEMA_VERSION:
        raise ScenarioError(f"unsupported schema version {doc['version']!r}")
    _require_keys(doc["meta"], {"name", "split"}, {"name", "split"}, "meta")
    viewpoints = []
    for nd in doc["nodes"]:
        _require_keys(nd, {"id", "xyz", "region"}, {"id", "xyz", "region"}, "node")
        viewpoints.append(Viewpoint(id=str(nd["id"]), position=_vec3(nd["xyz"], "node xyz"), region=nd["region"]))
    edges = []
    for ed in doc["edges"]:
        if not isinstance(ed, list) or len(ed) != 2:
            raise ScenarioError("each edge must be a 2-element array of node ids")
        edges.append((str(ed[0]), str(ed[1])))
    graph = NavGraph(viewpoints, edges)
    humans = []
    for hd in doc["humans"]:
        _require_keys(hd, {"id", "activity", "anchor", "waypoints", "footprint_radius"},
                      {"id", "activity", "anchor", "waypoints"}, "human")
        ad = hd["activity"]
        _require_keys(ad, {"id", "description", "region"}, {"id", "description", "region"}, "activity")
        humans.append(HumanInstance(
            id=str(hd["id"]),
            activity=HumanActivity(id=str(ad["id"]), description=ad["description"], region=ad["region"]),
            anchor=str(hd["anchor"]),
            waypoints=tuple(_vec3(w, "waypoint") for w in hd["waypoints"]),
            footprint_radius=float(hd.get("footprint_radius", DEFAULT_FOOTPRINT_RADIUS)),
        ))
    return Scenario(id=str(doc["id"]), graph=graph, humans=humans,
                    meta=ScenarioMeta(name=doc["meta"]["name"], split=doc["meta"]["split"]))


def load_scenario(source) -> Scenario:
    """Load a scenario from bytes, a file path, or a readable binary stream."""
    if isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    elif isinstance(source, (str, Path)):
        with open(source, "rb") as f:
            raw = f.read()
    else:
        raw = source.read()
        if isinstance(raw, str):
            raw = raw.encode()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario parse error: {e}") from e
    return scenario_from_dict(doc)


# ---------------------------------------------------------------------------
# Procedural generation

# Category sampling weights and per-category trajectory length ranges (meters).
TRAJECTORY_MIX = (0.492, 0.305, 0.184, 0.019)
_CATEGORY_RANGES = {"short": (1.5, 5.0), "long": (5.0, 15.0), "very_long": (15.0, 24.0)}


@dataclass(frozen=True)
class GenerationParams:
    grid_cols: int = 12
    grid_rows: int = 9
    spacing: float = 4.0
    jitter: float = 0.35
    mean_humans: float = 4.0
    trajectory_mix: tuple[float, float, float, float] = TRAJECTORY_MIX
    split: str = "seen"

    def __post_init__(self):
        if self.grid_cols * self.grid_rows < 2:
            raise ValueError("need at least 2 nodes")
        if self.mean_humans < 0:
            raise ValueError("mean_humans must be non-negative")


def generate_scenario(seed: int, params: GenerationParams = GenerationParams()) -> Scenario:
    """Deterministically generate one building scenario from a seed."""
    rng = np.random.default_rng(seed)
    cols, rows, sp = params.grid_cols, params.grid_rows, params.spacing

    # Region bands: contiguous column strips, each a random region.
    n_bands = max(1, cols // 3)
    band_regions = [ACTIVITY_CATALOG[rng.integers(len(ACTIVITY_CATALOG))].region for _ in range(n_bands)]

    viewpoints = []
    for r in range(rows):
        for c in range(cols):
            jx, jy = rng.uniform(-params.jitter, params.jitter, size=2)
            viewpoints.append(Viewpoint(
                id=f"n{r:02d}{c:02d}",
                position=(c * sp + jx, r * sp + jy, 0.0),
                region=band_regions[min(c // 3, n_bands - 1)],
            ))
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((f"n{r:02d}{c:02d}", f"n{r:02d}{c + 1:02d}"))
            if r + 1 < rows:
                edges.append((f"n{r:02d}{c:02d}", f"n{r + 1:02d}{c:02d}"))
    graph = NavGraph(viewpoints, edges)

    n_humans = int(rng.poisson(params.mean_humans))
    if n_humans > len(viewpoints):
        raise ValueError("more humans requested than available anchors")
    anchor_ids = [viewpoints[i].id for i in rng.choice(len(viewpoints), size=n_humans, replace=False)]

    humans = []
    mix = np.array(params.trajectory_mix) / sum(params.trajectory_mix)
    for hi, anchor in enumerate(anchor_ids):
        category = TRAJECTORY_CATEGORIES[rng.choice(4, p=mix)]
        waypoints = _walk_waypoints(graph, anchor, category, rng)
        region = graph.nodes[anchor].region
        choices = activities_for_region(region)
        act = choices[rng.integers(len(choices))]
        humans.append(HumanInstance(
            id=f"h{hi:02d}",
            activity=HumanActivity(id=act.id, description=act.description, region=act.region),
            anchor=anchor,
            waypoints=waypoints,
        ))

    return Scenario(
        id=f"b{seed:05d}",
        graph=graph,
        humans=humans,
        meta=ScenarioMeta(name=f"building-{seed:05d}", split=params.split),
    )


def _walk_waypoints(g: NavGraph, anchor: str, category: str, rng) -> tuple[Vec3, ...]:
    """Random walk along graph edges, truncated to land in the category's length range."""
    start = g.position(anchor)
    if category == "stationary":
        return (start,)
    lo, hi = _CATEGORY_RANGES[category]
    target = float(rng.uniform(lo, hi))
    pts = [start]
    cur, prev = anchor, None
    remaining = target
    while remaining > 1e-9:
        nbrs = sorted(g.neighbors(cur))
        options = [n for n in nbrs if n != prev] or nbrs
        nxt = options[rng.integers(len(options))]
        w = g.weight(cur, nxt)
        a, b = g.position(cur), g.position(nxt)
        if w >= remaining:
            t = remaining / w
            pts.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])))
            remaining = 0.0
        else:
            pts.append(b)
            remaining -= w
            prev, cur = cur, nxt
    return tuple(pts)
