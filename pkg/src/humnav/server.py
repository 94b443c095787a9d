"""HTTP API: scenario store and annotation endpoints plus the agent session protocol."""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import asdict
from pathlib import Path

from fastapi import Body, FastAPI, Header, HTTPException, Response

from .regions import ACTIVITY_CATALOG
from .sim import Episode, EpisodeSpec, Observation, StepOutcome, ACTIONS
from .world import (
    DEFAULT_FOOTPRINT_RADIUS,
    DEFAULT_OCCUPANCY_RADIUS,
    HumanActivity,
    HumanInstance,
    Scenario,
    ScenarioError,
    classify_viewpoints,
    occupied_nodes,
    scenario_from_dict,
    scenario_hash,
    scenario_to_bytes,
    scenario_to_dict,
)

DEFAULT_SESSION_TIMEOUT = 600.0


def _err(status: int, code: str, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail={"code": code, "message": message})


class ScenarioStore:
    """Disk-backed scenario collection; mutations are serialized per scenario id."""

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._scenarios: dict[str, Scenario] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._global = threading.Lock()
        for path in sorted(self.directory.glob("*.json")):
            if path.name == "episodes.json":  # episode suites share the directory
                continue
            from .world import load_scenario

            s = load_scenario(str(path))
            self._scenarios[s.id] = s
            self._locks[s.id] = threading.Lock()

    def ids(self) -> list[str]:
        with self._global:
            return sorted(self._scenarios)

    def get(self, sid: str) -> Scenario:
        with self._global:
            s = self._scenarios.get(sid)
        if s is None:
            raise _err(404, "not-found", f"unknown scenario {sid!r}")
        return s

    def lock(self, sid: str) -> threading.Lock:
        with self._global:
            return self._locks.setdefault(sid, threading.Lock())

    def put(self, s: Scenario) -> None:
        with self._global:
            self._scenarios[s.id] = s
            self._locks.setdefault(s.id, threading.Lock())
        (self.directory / f"{s.id}.json").write_bytes(scenario_to_bytes(s))


class _Session:
    def __init__(self, episode: Episode, initial: Observation):
        self.id = uuid.uuid4().hex[:16]
        self.episode = episode
        self.last_observation = initial
        self.last_used = time.monotonic()
        self.lock = threading.Lock()


def _obs_dict(obs: Observation) -> dict:
    return {
        "agent": asdict(obs.agent),
        "navigable": [
            {"node": e.node, "bearing": round(e.bearing, 6), "distance": round(e.distance, 6)}
            for e in obs.navigable
        ],
        "humans_visible": [
            {"human": h.human, "bearing": round(h.bearing, 6), "distance": round(h.distance, 6)}
            for h in obs.humans_visible
        ],
        "collision": obs.collision,
        "window_frames": obs.window_frames,
    }


def _outcome_dict(out: StepOutcome) -> dict:
    return {
        "observation": _obs_dict(out.observation),
        "rewards": {k: round(v, 6) for k, v in out.rewards.items()},
        "collision_events": out.collision_events,
        "done": out.done,
        "invalid_action": out.invalid_action,
    }


def create_app(
    scenario_dir: str | Path,
    session_timeout: float = DEFAULT_SESSION_TIMEOUT,
    episode_file: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="humnav", version="0.1.0")
    store = ScenarioStore(scenario_dir)
    sessions: dict[str, _Session] = {}
    sessions_lock = threading.Lock()

    episode_index: dict[str, tuple[str, EpisodeSpec]] = {}
    if episode_file is not None:
        from .experiments import load_episode_file

        for sid, spec in load_episode_file(episode_file):
            episode_index[spec.id] = (sid, spec)

    def _purge_sessions() -> None:
        now = time.monotonic()
        with sessions_lock:
            for sid in [k for k, s in sessions.items() if now - s.last_used > session_timeout]:
                del sessions[sid]

    def _session(sid: str) -> _Session:
        _purge_sessions()
        with sessions_lock:
            s = sessions.get(sid)
        if s is None:
            raise _err(404, "unknown-session", f"unknown or expired session {sid!r}")
        s.last_used = time.monotonic()
        return s

    # -- scenarios ----------------------------------------------------------

    @app.get("/v1/scenarios")
    def list_scenarios():
        out = []
        for sid in store.ids():
            s = store.get(sid)
            out.append({
                "id": s.id, "name": s.meta.name, "split": s.meta.split,
                "nodes": len(s.graph.nodes), "humans": len(s.humans),
                "hash": scenario_hash(s),
            })
        return {"scenarios": out}

    @app.get("/v1/scenarios/{sid}")
    def get_scenario(sid: str):
        s = store.get(sid)
        return Response(
            content=scenario_to_bytes(s),
            media_type="application/json",
            headers={"ETag": scenario_hash(s)},
        )

    @app.put("/v1/scenarios/{sid}")
    def put_scenario(sid: str, doc: dict = Body(...), if_match: str | None = Header(default=None)):
        try:
            s = scenario_from_dict(doc)
        except ScenarioError as e:
            raise _err(422, "invalid-scenario", str(e))
        if s.id != sid:
            raise _err(400, "id-mismatch", "scenario id in body must match the path")
        with store.lock(sid):
            try:
                current = store.get(sid)
            except HTTPException:
                current = None
            if if_match is not None and current is not None and scenario_hash(current) != if_match:
                raise _err(409, "conflict", "scenario changed since it was fetched; reload")
            store.put(s)
            return {"id": sid, "hash": scenario_hash(s)}

    @app.get("/v1/scenarios/{sid}/occupancy")
    def get_occupancy(sid: str, frame: int = 0, r: float = DEFAULT_OCCUPANCY_RADIUS):
        s = store.get(sid)
        if r <= 0:
            raise _err(422, "invalid-radius", "r must be positive")
        occ = occupied_nodes(s, frame, r)
        return {"frame": frame, "r": r, "nodes": sorted(occ.nodes)}

    @app.get("/v1/scenarios/{sid}/classification")
    def get_classification(sid: str, visibility_range: float = 10.0, r: float = DEFAULT_OCCUPANCY_RADIUS):
        s = store.get(sid)
        return {"labels": classify_viewpoints(s, visibility_range, r)}

    @app.get("/v1/activities")
    def get_activities():
        return {"activities": [
            {"id": a.id, "description": a.description, "region": a.region}
            for a in ACTIVITY_CATALOG
        ]}

    @app.post("/v1/scenarios/{sid}/humans")
    def post_human(sid: str, body: dict = Body(...)):
        with store.lock(sid):
            s = store.get(sid)
            node = body.get("node")
            if node not in s.graph.nodes:
                raise _err(422, "dangling-reference", f"unknown node {node!r}")
            act = next((a for a in ACTIVITY_CATALOG if a.id == body.get("activity")), None)
            if act is None:
                raise _err(422, "unknown-activity", f"unknown activity {body.get('activity')!r}")
            anchor_pos = s.graph.position(node)
            raw_wps = body.get("waypoints") or [list(anchor_pos)]
            try:
                waypoints = tuple((float(w[0]), float(w[1]), float(w[2])) for w in raw_wps)
            except (TypeError, ValueError, IndexError):
                raise _err(422, "invalid-waypoints", "waypoints must be [x,y,z] triples")
            existing = {h.id for h in s.humans}
            i = 0
            while f"h{i:02d}" in existing:
                i += 1
            human = HumanInstance(
                id=f"h{i:02d}",
                activity=HumanActivity(id=act.id, description=act.description, region=act.region),
                anchor=node,
                waypoints=waypoints,
                footprint_radius=float(body.get("footprint_radius", DEFAULT_FOOTPRINT_RADIUS)),
            )
            try:
                updated = Scenario(id=s.id, graph=s.graph, humans=list(s.humans) + [human], meta=s.meta)
            except ScenarioError as e:
                raise _err(422, "invalid-human", str(e))
            store.put(updated)
            frame = int(body.get("preview_frame", 0))
            return {
                "human": human.id,
                "hash": scenario_hash(updated),
                "occupancy": sorted(occupied_nodes(updated, frame).nodes),
            }

    @app.delete("/v1/scenarios/{sid}/humans/{hid}")
    def delete_human(sid: str, hid: str):
        with store.lock(sid):
            s = store.get(sid)
            remaining = [h for h in s.humans if h.id != hid]
            if len(remaining) == len(s.humans):
                raise _err(404, "not-found", f"no human {hid!r} in scenario {sid!r}")
            updated = Scenario(id=s.id, graph=s.graph, humans=remaining, meta=s.meta)
            store.put(updated)
            return {"hash": scenario_hash(updated)}

    # -- sessions -----------------------------------------------------------

    @app.post("/v1/sessions")
    def create_session(body: dict = Body(...)):
        _purge_sessions()
        s = store.get(body.get("scenario", ""))
        ep = body.get("episode")
        if isinstance(ep, str):
            if ep not in episode_index:
                raise _err(404, "unknown-episode", f"unknown episode {ep!r}")
            sid, spec = episode_index[ep]
            if sid != s.id:
                raise _err(400, "scenario-mismatch", "episode belongs to a different scenario")
        elif isinstance(ep, dict):
            try:
                spec = EpisodeSpec.from_dict(ep)
            except (KeyError, TypeError, ValueError) as e:
                raise _err(422, "invalid-episode", str(e))
        else:
            raise _err(422, "invalid-episode", "episode must be an id or an episode object")
        mode = body.get("mode", "egocentric")
        seed = int(body.get("seed", 0))
        try:
            episode = Episode(s, spec, mode=mode, seed=seed)
        except (ScenarioError, ValueError) as e:
            raise _err(422, "invalid-episode", str(e))
        obs = episode.reset()
        session = _Session(episode, obs)
        with sessions_lock:
            sessions[session.id] = session
        return {"session": session.id, "observation": _obs_dict(obs)}

    @app.get("/v1/sessions/{sid}/observation")
    def get_observation(sid: str):
        session = _session(sid)
        return {"observation": _obs_dict(session.last_observation), "done": session.episode.done}

    @app.post("/v1/sessions/{sid}/action")
    def post_action(sid: str, body: dict = Body(...)):
        session = _session(sid)
        action = body.get("action")
        if action not in ACTIONS:
            raise _err(422, "malformed-action", f"action must be one of {ACTIONS}")
        target = body.get("target")
        with session.lock:
            if session.episode.done:
                raise _err(409, "episode-done", "cannot act on a finished episode")
            try:
                out = session.episode.step(action, target)
            except ValueError as e:
                raise _err(422, "malformed-action", str(e))
            session.last_observation = out.observation
        return _outcome_dict(out)

    @app.get("/v1/sessions/{sid}/log")
    def get_log(sid: str):
        session = _session(sid)
        log = session.episode.log
        if log is None:
            raise _err(409, "no-log", "session has no trajectory log")
        return Response(content=log.to_bytes(), media_type="application/x-ndjson")

    return app
