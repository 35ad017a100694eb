import json

import pytest

from conftest import SCENARIO_DIR
from netlogo_assistant.config import ConfigError, ServiceConfig, load_config


def write_config(tmp_path, **overrides):
    obj = {
        "data_dir": str(tmp_path / "sessions"),
        "backends": {
            "scripted": {"type": "scripted", "scenario_path": str(SCENARIO_DIR / "predation.json")}
        },
        "routing": {"default": "scripted"},
    }
    obj.update(overrides)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(obj), encoding="utf-8")
    return path


def test_minimal_config_loads_with_bundled_defaults(tmp_path):
    config = load_config(write_config(tmp_path))
    assert config.corpus_path.exists()
    assert config.template_dir.exists()
    assert config.max_iterations == 6


def test_missing_corpus_path_fails_with_named_error(tmp_path):
    path = write_config(tmp_path, corpus_path=str(tmp_path / "nope.jsonl"))
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert "corpus" in str(excinfo.value)
    assert "nope.jsonl" in str(excinfo.value)


def test_missing_scenario_fails(tmp_path):
    path = write_config(
        tmp_path,
        backends={"scripted": {"type": "scripted", "scenario_path": str(tmp_path / "ghost.json")}},
    )
    with pytest.raises(ConfigError):
        load_config(path)


def test_routing_to_unknown_backend_fails(tmp_path):
    path = write_config(tmp_path, routing={"default": "scripted", "fix": "missing"})
    with pytest.raises(ConfigError) as excinfo:
        load_config(path)
    assert "missing" in str(excinfo.value)


def test_backends_without_default_route_fail(tmp_path):
    path = write_config(tmp_path, routing={"planning": "scripted"})
    with pytest.raises(ConfigError):
        load_config(path)


def test_http_backend_requires_url_and_model(tmp_path):
    path = write_config(
        tmp_path,
        backends={"remote": {"type": "http", "base_url": "http://localhost:1"}},
        routing={"default": "remote"},
    )
    with pytest.raises(ConfigError):
        load_config(path)


def test_default_config_validates():
    ServiceConfig().validate()
