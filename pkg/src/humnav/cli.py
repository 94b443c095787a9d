"""Command-line entry points: generate, eval, datagen, serve."""

from __future__ import annotations

import json
from pathlib import Path

import click
import numpy as np

from .datagen import DatasetConfig, write_dataset
from .experiments import (
    ExperimentSpec,
    load_episode_file,
    make_episodes,
    rows_to_csv,
    run_experiment,
    save_episode_file,
)
from .world import GenerationParams, generate_scenario, load_scenario, save_scenario


def _load_scenario_dir(directory: str):
    paths = [p for p in sorted(Path(directory).glob("*.json")) if p.name != "episodes.json"]
    if not paths:
        raise click.ClickException(f"no scenario files in {directory}")
    return [load_scenario(str(p)) for p in paths]


@click.group()
def main():
    """Human-aware navigation simulation toolkit."""


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--buildings", type=int, default=10, show_default=True)
@click.option("--split", type=click.Choice(["seen", "unseen"]), default="seen", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), required=True)
@click.option("--episodes-per-building", type=int, default=0,
              help="Also sample this many episodes per building into episodes.json.")
def generate(seed, buildings, split, out, episodes_per_building):
    """Generate procedural building scenarios."""
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    params = GenerationParams(split=split)
    episodes = []
    for b in range(buildings):
        s = generate_scenario(seed + b, params)
        save_scenario(s, out_dir / f"{s.id}.json")
        if episodes_per_building:
            rng = np.random.default_rng(seed + 10_000 + b)
            episodes.extend((s.id, e) for e in make_episodes(s, episodes_per_building, rng))
    if episodes:
        save_episode_file(out_dir / "episodes.json", episodes)
    click.echo(f"wrote {buildings} scenarios to {out_dir}")


@main.command("eval")
@click.option("--policy", type=click.Choice(["oracle-suboptimal", "oracle-optimal", "random", "greedy"]), required=True)
@click.option("--scenarios", "scenario_dir", type=click.Path(exists=True, file_okay=False), required=True)
@click.option("--episodes", "episode_file", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--mode", type=click.Choice(["egocentric", "panoramic"]), default="egocentric", show_default=True)
@click.option("--env", type=click.Choice(["static", "dynamic"]), default="dynamic", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--report", "report_path", type=click.Path(dir_okay=False), required=True)
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), default=None)
@click.option("--logs", "log_dir", type=click.Path(file_okay=False), default=None)
def eval_cmd(policy, scenario_dir, episode_file, mode, env, seed, report_path, csv_path, log_dir):
    """Evaluate a scripted policy over an episode suite."""
    scenarios = _load_scenario_dir(scenario_dir)
    episodes = load_episode_file(episode_file)
    spec = ExperimentSpec(policy=policy, mode=mode, environment=env, seed=seed)
    result = run_experiment(scenarios, episodes, spec, log_dir=log_dir)
    Path(report_path).write_text(json.dumps(result.to_dict(), indent=2, sort_keys=True) + "\n")
    if csv_path:
        Path(csv_path).write_text(rows_to_csv(result.rows))
    for row in result.rows:
        click.echo(json.dumps(row))
    if result.errors:
        click.echo(f"{len(result.errors)} episode errors (recorded in report)", err=True)


@main.command("datagen")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
def datagen_cmd(config_path, out_path):
    """Generate an offline random-walk trajectory dataset.

    The config file is JSON: DatasetConfig fields plus "scenario_dir" and
    "episode_file".
    """
    doc = json.loads(Path(config_path).read_text())
    scenario_dir = doc.pop("scenario_dir")
    episode_file = doc.pop("episode_file")
    cfg = DatasetConfig(**doc)
    scenarios = _load_scenario_dir(scenario_dir)
    episodes = load_episode_file(episode_file)
    n = write_dataset(out_path, scenarios, episodes, cfg)
    click.echo(f"wrote {n} trajectories to {out_path}")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--scenarios", "scenario_dir", type=click.Path(file_okay=False), required=True)
@click.option("--episodes", "episode_file", type=click.Path(dir_okay=False), default=None)
def serve(port, host, scenario_dir, episode_file):
    """Serve the annotation/session HTTP API."""
    import uvicorn

    from .server import create_app

    app = create_app(scenario_dir, episode_file=episode_file)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
