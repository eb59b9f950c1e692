"""Run configuration files (TOML) and their validation."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core.spaces import DEFAULT_SPACE, SpaceSpec

COMMANDS = ("norm", "witness", "oracle-check", "alpha", "lemma", "block", "spreading", "sandwich",
            "symmetry", "asmodel")
FORMATS = ("csv", "jsonl")
TOP_KEYS = {"command", "space", "inputs", "params", "output"}
OUTPUT_KEYS = {"path", "format"}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    space: SpaceSpec = DEFAULT_SPACE
    inputs: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    out: str | None = None
    format: str = "jsonl"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}, got {self.format!r}")

    def resolved(self) -> dict:
        """Everything that determines the results, in a stable order."""
        return {
            "command": self.command,
            "space": self.space.to_dict(),
            "inputs": list(self.inputs),
            "params": {k: self.params[k] for k in sorted(self.params)},
            "format": self.format,
        }


def _load(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read {path}: {e}") from e
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"{path}: {e}") from e


def load_space(path) -> SpaceSpec:
    """A space file holds the keys of ``SpaceSpec`` at top level or under ``[space]``."""
    d = _load(path)
    if set(d) == {"space"} and isinstance(d["space"], dict):
        d = d["space"]
    try:
        return SpaceSpec.from_dict(d)
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from e


def load_config(path) -> RunConfig:
    d = _load(path)
    return config_from_dict(d, str(Path(path)))


def config_from_dict(d: dict, where: str = "config") -> RunConfig:
    unknown = set(d) - TOP_KEYS
    if unknown:
        raise ConfigError(f"{where}: unknown keys {sorted(unknown)}")
    if "command" not in d:
        raise ConfigError(f"{where}: missing 'command'")
    out = d.get("output", {})
    if not isinstance(out, dict) or set(out) - OUTPUT_KEYS:
        raise ConfigError(f"{where}: [output] accepts only {sorted(OUTPUT_KEYS)}")
    try:
        space = SpaceSpec.from_dict(d.get("space", {}))
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e
    inputs = d.get("inputs", [])
    if isinstance(inputs, str):
        inputs = [inputs]
    params = d.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError(f"{where}: [params] must be a table")
    return RunConfig(d["command"], space, list(inputs), dict(params), out.get("path"),
                     out.get("format", "jsonl"))
