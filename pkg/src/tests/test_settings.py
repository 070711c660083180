import json

import numpy as np
import pytest
from pydantic import ValidationError

from program.settings.manager import settings_manager
from program.settings.models import AppModel
from program.utils.export import ArtifactWriter, sha256_of


@pytest.fixture(autouse=True)
def fresh_settings():
    settings_manager.reset()
    yield
    settings_manager.reset()


def test_environment_overrides_defaults(monkeypatch):
    monkeypatch.setenv("DELTASCATTER_GRID_X_MAX", "12.5")
    monkeypatch.setenv("DELTASCATTER_NLS_SIGN", "focusing")
    monkeypatch.setenv("DELTASCATTER_WAVEOPS_P_VALUES", "[2.0, 3.0]")
    settings_manager.reset()
    assert settings_manager.settings.grid.x_max == 12.5
    assert settings_manager.settings.nls.sign == "focusing"
    assert settings_manager.settings.waveops.p_values == [2.0, 3.0]


def test_load_applies_environment_on_top(monkeypatch):
    settings = json.loads(AppModel().model_dump_json())
    settings["grid"]["dx"] = 0.1
    monkeypatch.setenv("DELTASCATTER_SEED", "99")
    settings_manager.load(settings)
    assert settings_manager.settings.grid.dx == 0.1
    assert settings_manager.settings.seed == 99


def test_invalid_settings_are_rejected():
    settings = json.loads(AppModel().model_dump_json())
    settings["grid"]["dx"] = -0.05
    with pytest.raises(ValidationError):
        settings_manager.load(settings)
    settings["grid"]["dx"] = 0.05
    settings["nls"]["sigma"] = 0.0
    with pytest.raises(ValidationError):
        settings_manager.load(settings)


def test_writer_splits_complex_columns(tmp_path):
    writer = ArtifactWriter(tmp_path)
    path = writer.table("t.csv", {"k": np.array([1.0, 2.0]), "T": np.array([1 + 2j, 3 - 4j])})
    lines = path.read_text().splitlines()
    assert lines[0] == "k,Re T,Im T"
    assert [float(v) for v in lines[2].split(",")] == [2.0, 3.0, -4.0]
    with pytest.raises(ValueError, match="differ in length"):
        writer.table("bad.csv", {"a": np.zeros(2), "b": np.zeros(3)})


def test_manifest_hashes_every_file(tmp_path):
    writer = ArtifactWriter(tmp_path)
    writer.report("r.json", {"x": 1.0})
    writer.rows("s.csv", ["name", "passed"], [["unitarity", True]])
    manifest = json.loads(writer.manifest({"command": "scatter"}).read_text())
    assert [entry["file"] for entry in manifest["files"]] == ["r.json", "s.csv"]
    assert manifest["files"][0]["sha256"] == sha256_of(tmp_path / "r.json")
    other = ArtifactWriter(tmp_path / "other")
    assert json.loads(other.manifest({"command": "jost"}).read_text())["config_sha256"] != manifest["config_sha256"]
