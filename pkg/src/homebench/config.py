"""Runtime configuration as plain dataclasses.

Every tunable named here is deliberate: simulator thresholds that the task
definition leaves open (reach, view distance, FOV), the memory match
thresholds, the metric segmentation maximum, and the agent's correction
budgets. Values can come from a JSON config file, environment variables
(HOMEBENCH_*), or CLI flags; precedence is flag > env > file > default.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import Any

from .jsonutil import digest


@dataclass(frozen=True)
class SimConfig:
    cell_size: float = 0.05          # movement quantum, meters
    rotation_step: int = 30          # degrees per rotation/tilt
    pitch_min: int = -60
    pitch_max: int = 60
    reach_distance: float = 1.5      # meters
    view_distance: float = 5.0       # meters
    fov_degrees: float = 90.0        # horizontal cone
    meters_per_nav_step: float = 0.25
    action_cap: int = 16000
    occupancy_patch_radius: int = 10  # cells, for Observation.localOccupancy

    @property
    def quanta_per_nav_step(self) -> int:
        return round(self.meters_per_nav_step / self.cell_size)


@dataclass(frozen=True)
class MemoryConfig:
    feature_dim: int = 128
    voxel_iou_threshold: float = 0.3
    cosine_threshold: float = 0.8
    retrieve_k: int = 5


@dataclass(frozen=True)
class MetricsConfig:
    max_segments: int = 10           # highest segmentation level used by the trend metric
    ever_satisfied: bool = True      # monotone score series; instantaneous variant kept for study


@dataclass(frozen=True)
class AgentConfig:
    refine_budget: int = 2           # local corrections before escalating to replanning
    replan_budget: int = 3           # replans per goal before it is skipped
    cross_episode_experience: bool = True
    search_spin_steps: int = 12      # 12 x 30 degrees = full turn
    random_walk_goals: int = 30      # RandomReasoner wander budget


@dataclass(frozen=True)
class GeneratorConfig:
    goal_min: int = 4
    goal_max: int = 14
    max_retries: int = 20            # per-episode regeneration attempts


@dataclass(frozen=True)
class Config:
    sim: SimConfig = field(default_factory=SimConfig)
    memory: MemoryConfig = field(default_factory=MemoryConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    agent: AgentConfig = field(default_factory=AgentConfig)
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        return digest(self.to_dict())


_SECTIONS = {
    "sim": SimConfig,
    "memory": MemoryConfig,
    "metrics": MetricsConfig,
    "agent": AgentConfig,
    "generator": GeneratorConfig,
}


def _coerce(kind, raw: str) -> Any:
    if kind is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    return kind(raw)


def load_config(path: str | None = None, overrides: dict[str, Any] | None = None) -> Config:
    """Build a Config honoring precedence: overrides > HOMEBENCH_* env > file > defaults.

    `overrides` keys are dotted paths like "sim.reach_distance".
    Environment variables use HOMEBENCH_<SECTION>_<FIELD>, e.g.
    HOMEBENCH_SIM_REACH_DISTANCE=2.0.
    """
    values: dict[str, dict[str, Any]] = {name: {} for name in _SECTIONS}

    if path:
        with open(path) as fh:
            doc = json.load(fh)
        for section, fields in doc.items():
            if section not in _SECTIONS:
                raise ValueError(f"unknown config section: {section}")
            values[section].update(fields)

    for section, cls in _SECTIONS.items():
        for f in dataclasses.fields(cls):
            env_key = f"HOMEBENCH_{section.upper()}_{f.name.upper()}"
            if env_key in os.environ:
                values[section][f.name] = _coerce(f.type_obj if hasattr(f, "type_obj") else _field_type(cls, f.name), os.environ[env_key])

    for dotted, value in (overrides or {}).items():
        section, _, name = dotted.partition(".")
        if section not in _SECTIONS:
            raise ValueError(f"unknown config key: {dotted}")
        values[section][name] = value

    built = {}
    for section, cls in _SECTIONS.items():
        valid = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values[section]) - valid
        if unknown:
            raise ValueError(f"unknown fields in [{section}]: {sorted(unknown)}")
        built[section] = cls(**values[section])
    return Config(**built)


def _field_type(cls, name: str):
    hints = {f.name: f.type for f in dataclasses.fields(cls)}
    raw = hints[name]
    return {"int": int, "float": float, "bool": bool, "str": str}.get(raw, str) if isinstance(raw, str) else raw
