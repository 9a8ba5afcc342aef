import json

import pytest

from app.core import config
from tests.factories import DOCUMENT


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings, ignoring any local .env."""
    for name in config.Settings.model_fields:
        monkeypatch.delenv(f"SPHERES_{name.upper()}", raising=False)
    monkeypatch.setitem(config.Settings.model_config, "env_file", None)
    config.reload_settings()
    yield
    config._settings = None


@pytest.fixture
def document_json():
    return json.dumps(DOCUMENT)


@pytest.fixture
def document_file(tmp_path, document_json):
    path = tmp_path / "classes.json"
    path.write_text(document_json, encoding="utf-8")
    return path
