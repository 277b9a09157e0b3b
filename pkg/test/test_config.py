import json

import pytest

from config import Config


@pytest.fixture
def fresh_config():
    yield Config
    Config._config = None


def test_dotted_lookup(fresh_config):
    assert Config.get("verify.bounds.max_modulus") == 4
    assert Config.get("verify.bounds.identity_modulus") == 6
    assert Config.get("verify.bounds.words") == 1000
    assert Config.get("logging.level") == "INFO"
    assert Config.get("verify.bounds.missing", 7) == 7
    assert Config.get("series_precision.deeper") is None


def test_environment_overrides(tmp_path, monkeypatch, fresh_config):
    path = tmp_path / "settings.json"
    path.write_text(json.dumps({"series_precision": 8, "max_steps": 3}))
    monkeypatch.setenv("WEYLFORMS_SETTINGS", str(path))
    monkeypatch.setenv("WEYLFORMS_PRECISION", "30")
    Config.reload_config()
    assert Config.get("series_precision") == 30
    assert Config.get("max_steps") == 3
    assert Config.get("schur_depth") is None
