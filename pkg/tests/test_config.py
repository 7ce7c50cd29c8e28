import json

import pytest

from kgwebqa.config import RunConfig, TickClock, load_config
from kgwebqa.errors import ConfigError


def test_defaults_are_paper_values():
    cfg = RunConfig(mode="web")
    assert (cfg.beam_width, cfg.beam_depth) == (3, 3)
    assert (cfg.keep_filter, cfg.keep_final) == (70, 5)
    assert cfg.search_k == 10
    assert cfg.refs_total == 5


def test_mode_kg_requires_graph_path():
    with pytest.raises(ConfigError, match="--kg"):
        RunConfig(mode="kg")
    RunConfig(mode="kg", kg_path="g.tsv")  # ok


def test_flags_beat_config_file_beat_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SEARCH_API_ENDPOINT", "http://env.example/search")
    monkeypatch.setenv("SEARCH_API_KEY", "env-key")
    config_file = tmp_path / "cfg.json"
    config_file.write_text(json.dumps({
        "mode": "web",
        "beam_width": 2,
        "search_endpoint": "http://file.example/search",
    }), encoding="utf-8")

    cfg = load_config({"beam_width": 4}, config_file=str(config_file))
    assert cfg.beam_width == 4                                # flag wins
    assert cfg.search_endpoint == "http://file.example/search"  # file beats env
    assert cfg.search_api_key == "env-key"                    # env only

    cfg = load_config({}, config_file=str(config_file))
    assert cfg.beam_width == 2                                # file when no flag


def test_config_file_rejects_unknown_keys_and_secrets(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"mode": "web", "beam_widht": 2}), encoding="utf-8")
    with pytest.raises(ConfigError, match="unknown"):
        load_config({}, config_file=str(bad))
    secret = tmp_path / "secret.json"
    secret.write_text(json.dumps({"mode": "web", "search_api_key": "k"}),
                      encoding="utf-8")
    with pytest.raises(ConfigError, match="environment"):
        load_config({}, config_file=str(secret))


def test_positive_numeric_validation():
    with pytest.raises(ConfigError):
        RunConfig(mode="web", keep_final=0)


def test_tick_clock_is_monotone_and_deterministic():
    a, b = TickClock(), TickClock()
    readings_a = [a() for _ in range(5)]
    readings_b = [b() for _ in range(5)]
    assert readings_a == readings_b
    assert all(y > x for x, y in zip(readings_a, readings_a[1:]))
