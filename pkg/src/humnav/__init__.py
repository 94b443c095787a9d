"""Desk-scale human-aware navigation simulation engine.

Graph-world scenarios with dynamic human trajectories, an episode engine
with egocentric/panoramic action spaces, expert planners with collision
avoidance, human-aware metrics, offline trajectory dataset generation,
and an HTTP API backing the scenario annotation UI.
"""

__version__ = "0.1.0"
