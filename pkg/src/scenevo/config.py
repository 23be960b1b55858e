"""JSON experiment configuration.

Layout::

    {
      "ga":    {"pop_size": 150, "n_gen": 200, "mut_rate": 0.4, "cross_rate": 0.9,
                "test_suite_size": 30},
      "files": {"stats_path": "stats", "tcs_path": "tcs", "images_path": "images"},
      "lkas":  {... RoadParams fields, "vehicle": {... VehicleParams fields}},
      "robot": {... GridParams fields}
    }

Every block is optional; missing keys take the dataclass defaults. Unknown
keys are rejected.
"""
from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .evo import SearchConfig
from .lkas import RoadParams, VehicleParams
from .robot import GridParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GAConfig:
    pop_size: int = 150
    n_gen: int = 200
    mut_rate: float = 0.4
    cross_rate: float = 0.9
    test_suite_size: int = 30

    def __post_init__(self):
        self.search(0)

    def search(self, seed: int) -> SearchConfig:
        return SearchConfig(seed=seed, **dataclasses.asdict(self))


@dataclass(frozen=True)
class FilesConfig:
    stats_path: str = "stats"
    tcs_path: str = "tcs"
    images_path: str = "images"

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if not getattr(self, f.name):
                raise ValueError(f"{f.name} must be a non-empty path")


@dataclass(frozen=True)
class Config:
    ga: GAConfig = field(default_factory=GAConfig)
    files: FilesConfig = field(default_factory=FilesConfig)
    lkas: RoadParams = field(default_factory=RoadParams)
    robot: GridParams = field(default_factory=GridParams)

    def to_dict(self) -> dict:
        return _to_plain(dataclasses.asdict(self))


def _to_plain(obj):
    if isinstance(obj, dict):
        return {k: _to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_to_plain(v) for v in obj]
    return obj


_NESTED = {(RoadParams, "vehicle"): VehicleParams}
_TUPLES = {"straight_range", "angle_range", "start"}


def _build(cls, doc, where: str):
    if not isinstance(doc, dict):
        raise ConfigError(f"{where or 'config'}: expected an object, got {type(doc).__name__}")
    known = {f.name for f in dataclasses.fields(cls)}
    for key in doc:
        if key not in known:
            raise ConfigError(f"unknown config key {where + '.' if where else ''}{key!r}")
    kwargs = {}
    for key, value in doc.items():
        sub = _NESTED.get((cls, key))
        if sub is not None:
            value = _build(sub, value, f"{where}.{key}")
        elif key in _TUPLES and value is not None:
            value = tuple(value)
        kwargs[key] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_BLOCKS = {"ga": GAConfig, "files": FilesConfig, "lkas": RoadParams, "robot": GridParams}


def config_from_dict(doc: dict) -> Config:
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    for key in doc:
        if key not in _BLOCKS:
            raise ConfigError(f"unknown config key {key!r}")
    return Config(**{k: _build(_BLOCKS[k], v, k) for k, v in doc.items()})


def load_config(path: str | Path) -> Config:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {p}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {p} is not valid JSON: {exc}") from exc
    return config_from_dict(doc)
