import pytest

from normset.config import ConfigError, RunConfig, config_from_dict, load_config, load_space
from normset.core import SpaceSpec


def test_load_config(tmp_path):
    p = tmp_path / "run.toml"
    p.write_text('command = "sandwich"\n[space]\ntheta = "1/2"\n[params]\neps = "1/4"\n'
                 '[output]\npath = "out.jsonl"\nformat = "jsonl"\n')
    cfg = load_config(p)
    assert cfg.command == "sandwich" and cfg.params == {"eps": "1/4"}
    assert cfg.space == SpaceSpec() and cfg.out == "out.jsonl"


def test_unknown_keys_rejected(tmp_path):
    with pytest.raises(ConfigError, match="unknown keys"):
        config_from_dict({"command": "norm", "colour": 1})
    with pytest.raises(ConfigError):
        config_from_dict({"command": "norm", "output": {"path": "x", "mode": "w"}})
    with pytest.raises(ConfigError):
        config_from_dict({"command": "norm", "space": {"theta": "1/2", "speed": 3}})
    with pytest.raises(ConfigError, match="missing"):
        config_from_dict({})
    with pytest.raises(ConfigError):
        config_from_dict({"command": "plot"})
    with pytest.raises(ConfigError):
        RunConfig("norm", format="xml")


def test_bad_toml(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("command = \n")
    with pytest.raises(ConfigError):
        load_config(p)
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")


def test_space_files(tmp_path):
    p = tmp_path / "s.toml"
    p.write_text('theta = "1/3"\nenforce_vfg = false\n')
    assert load_space(p) == SpaceSpec(theta=__import__("fractions").Fraction(1, 3), enforce_vfg=False)
    p.write_text('[space]\ntheta = 1\n')
    assert load_space(p).theta == 1
    p.write_text('enforce_vfg = "no"\n')
    with pytest.raises(ConfigError):
        load_space(p)


def test_resolved_is_stable():
    a = RunConfig("norm", params={"b": 1, "a": 2}, inputs=["x"])
    b = RunConfig("norm", params={"a": 2, "b": 1}, inputs=["x"])
    assert a.resolved() == b.resolved()
    assert list(a.resolved()["params"]) == ["a", "b"]
