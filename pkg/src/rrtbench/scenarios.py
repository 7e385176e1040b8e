"""Scenario documents: a world plus a start/goal query, with JSON round-trip.

Format:
    {
      "name": "...",
      "bounds": {"min": [x, y], "max": [x, y]},
      "obstacles": [{"circle": {"center": [x, y], "r": r}},
                    {"polygon": {"vertices": [[x, y], ...]}}],
      "start": [x, y],
      "goal": [x, y],
      "goal_radius": r
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .geometry import Circle, Config, ConvexPolygon, World, dist


class ScenarioParseError(ValueError):
    """Malformed scenario document (bad JSON or wrong structure)."""


class ScenarioValidationError(ValueError):
    """Structurally sound document with impossible geometry."""


@dataclass
class Scenario:
    """A planning query: world, start, goal, and the goal-acceptance radius."""

    name: str
    world: World
    q_start: Config
    q_goal: Config
    goal_radius: float = 0.5

    def validate(self) -> None:
        if self.q_start == self.q_goal:
            raise ScenarioValidationError("start and goal must differ")
        if self.goal_radius < 0.0:
            raise ScenarioValidationError("goal_radius must be non-negative")
        if not self.world.point_free(self.q_start):
            raise ScenarioValidationError(f"start {tuple(self.q_start)} is in collision")
        if not self.world.point_free(self.q_goal):
            raise ScenarioValidationError(f"goal {tuple(self.q_goal)} is in collision")


def _pair(value, label: str) -> Config:
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(c, (int, float)) for c in value)):
        raise ScenarioParseError(f"{label} must be a [x, y] pair, got {value!r}")
    return Config(float(value[0]), float(value[1]))


def load_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise ScenarioParseError("scenario document must be a JSON object")
    for key in ("bounds", "start", "goal"):
        if key not in doc:
            raise ScenarioParseError(f"scenario is missing required key {key!r}")
    bounds = doc["bounds"]
    if not isinstance(bounds, dict) or "min" not in bounds or "max" not in bounds:
        raise ScenarioParseError("bounds must be an object with 'min' and 'max'")
    lo = _pair(bounds["min"], "bounds.min")
    hi = _pair(bounds["max"], "bounds.max")
    obstacles = []
    raw_obstacles = doc.get("obstacles", [])
    if not isinstance(raw_obstacles, list):
        raise ScenarioParseError("obstacles must be a list")
    for idx, entry in enumerate(raw_obstacles):
        if not isinstance(entry, dict) or len(entry) != 1:
            raise ScenarioParseError(
                f"obstacle {idx} must be an object with a single "
                f"'circle' or 'polygon' key, got {entry!r}"
            )
        (kind, body), = entry.items()
        try:
            if kind == "circle":
                if not isinstance(body, dict) or "center" not in body or "r" not in body:
                    raise ScenarioParseError(
                        f"obstacle {idx}: circle needs 'center' and 'r'")
                obstacles.append(Circle(_pair(body["center"], "circle.center"),
                                        float(body["r"])))
            elif kind == "polygon":
                if not isinstance(body, dict) or "vertices" not in body:
                    raise ScenarioParseError(f"obstacle {idx}: polygon needs 'vertices'")
                verts = [_pair(v, f"polygon vertex {j}")
                         for j, v in enumerate(body["vertices"])]
                obstacles.append(ConvexPolygon(verts))
            else:
                raise ScenarioParseError(
                    f"obstacle {idx}: unknown kind {kind!r} (circle or polygon)")
        except ValueError as exc:
            if isinstance(exc, ScenarioParseError):
                raise
            raise ScenarioValidationError(f"obstacle {idx}: {exc}") from exc
    try:
        world = World(lo, hi, obstacles)
    except ValueError as exc:
        raise ScenarioValidationError(str(exc)) from exc
    goal_radius = doc.get("goal_radius", 0.5)
    if not isinstance(goal_radius, (int, float)):
        raise ScenarioParseError("goal_radius must be a number")
    scenario = Scenario(
        name=str(doc.get("name", "scenario")),
        world=world,
        q_start=_pair(doc["start"], "start"),
        q_goal=_pair(doc["goal"], "goal"),
        goal_radius=float(goal_radius),
    )
    scenario.validate()
    return scenario


def write_scenario(scenario: Scenario) -> str:
    """Serialize a scenario; load_scenario(write_scenario(s)) is equivalent to s."""
    obstacles = []
    for obs in scenario.world.obstacles:
        if isinstance(obs, Circle):
            obstacles.append({"circle": {"center": list(obs.center), "r": obs.radius}})
        else:
            obstacles.append({"polygon": {"vertices": [list(v) for v in obs.vertices]}})
    doc = {
        "name": scenario.name,
        "bounds": {"min": list(scenario.world.lo), "max": list(scenario.world.hi)},
        "obstacles": obstacles,
        "start": list(scenario.q_start),
        "goal": list(scenario.q_goal),
        "goal_radius": scenario.goal_radius,
    }
    return json.dumps(doc, indent=2) + "\n"
