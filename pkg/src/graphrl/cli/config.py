"""Run configuration: a flat ``key = value`` file plus command-line overrides."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields
from pathlib import Path

from graphrl.agents import AGENTS
from graphrl.environments import ENVIRONMENTS


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    # what to search
    invariant: str = "conjecture1"
    env: str = "linear_build"
    agent: str = "dce"
    order: int = 16
    # environment
    edge_colors: int = 2
    is_directed: bool = False
    allow_loops: bool = False
    ordering: str = "row_major"
    episode_length: int | None = None  # global/local only; defaults to the flattened length
    flip_only: bool = False
    starting_vertex: int = 0
    generator: str = "monochromatic:0"
    # agent
    hidden: tuple[int, ...] = (72, 12)
    dropout: float = 0.2
    learning_rate: float = 0.003
    batch_size: int | None = None  # agent default when unset
    elite_fraction: float = 0.07
    carry_fraction: float = 0.06
    top_fraction: float = 0.25
    gamma: float = 0.95
    use_baseline: bool = True
    epochs: int = 4
    clip: float = 0.2
    value_coef: float = 0.5
    entropy_coef: float = 0.0
    random_action: str = "constant:0"
    # driver
    seed: int = 0
    target_score: float = 1e-4
    restart_every: int = 1000
    max_steps: int = 10000
    time_limit: float | None = None  # seconds; stop searching once exceeded
    out: str = "runs/latest"
    timing: bool = True

    def with_overrides(self, **overrides) -> "RunConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in values:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = _coerce(key, value)
        cfg = RunConfig(**values)
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.order < 1:
            raise ConfigError("order must be positive")
        if self.restart_every < 1:
            raise ConfigError("restart_every must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ConfigError("time_limit must be positive")
        if self.max_steps < 0:
            raise ConfigError("max_steps must be nonnegative")
        if self.agent not in AGENTS:
            raise ConfigError(f"unknown agent {self.agent!r}; choose from {sorted(AGENTS)}")
        if self.env not in ENVIRONMENTS:
            raise ConfigError(f"unknown environment {self.env!r}; choose from {sorted(ENVIRONMENTS)}")
        if self.ordering not in ("row_major", "clockwise"):
            raise ConfigError("ordering must be row_major or clockwise")


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value):
    if not isinstance(value, str):
        return value
    kind = _TYPES[key]
    text = value.strip()
    try:
        if "None" in kind and text.lower() in ("", "none", "default"):
            return None
        if kind.startswith("bool"):
            lowered = text.lower()
            if lowered in ("1", "true", "yes", "on"):
                return True
            if lowered in ("0", "false", "no", "off"):
                return False
            raise ValueError(text)
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
        if kind.startswith("tuple"):
            return tuple(int(t) for t in text.replace(",", " ").split())
    except ValueError:
        raise ConfigError(f"bad value for {key}: {value!r}") from None
    return text


def load_config(path: str | Path | None, **overrides) -> RunConfig:
    values: dict[str, str] = {}
    if path is not None:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {p}")
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
        parser.optionxform = str
        try:
            parser.read_string("[run]\n" + p.read_text())
        except configparser.Error as exc:
            raise ConfigError(f"cannot parse {p}: {exc}") from None
        values = dict(parser["run"])
    values.update({k: v for k, v in overrides.items() if v is not None})
    return RunConfig().with_overrides(**values)
