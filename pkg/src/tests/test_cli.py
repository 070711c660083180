import json
from pathlib import Path

import numpy as np
import pytest

from main import main
from program.potential import double_delta_spec
from program.program import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, Program
from program.services.evolve import EvolveService
from program.services.shared import RunContext
from program.services.waveop import WaveOpService
from program.settings.manager import settings_manager
from program.spectral import GridFunction, SpatialGrid, WavenumberGrid, build_decomposition
from program.utils.cli import handle_args, settings_overrides
from program.utils.export import ArtifactWriter

TEST_DATA = Path(__file__).parent / "test_data"


@pytest.fixture(autouse=True)
def fresh_settings():
    settings_manager.reset()
    yield
    settings_manager.reset()


def test_commands_need_a_potential():
    with pytest.raises(SystemExit) as error:
        handle_args(["scatter"])
    assert error.value.code == 2


def test_unknown_flag_is_rejected():
    with pytest.raises(SystemExit):
        handle_args(["scatter", "--potential", "p.json", "--no-such-flag"])


def test_overrides_follow_the_flags():
    args = handle_args(
        ["evolve", "--potential", "p.json", "--xmax", "12", "--tol-identity", "1e-3", "--coupling", "0", "--out", "runs/a", "--mode", "nls", "--mode", "linear"]
    )
    overrides = settings_overrides(args)
    assert overrides[("grid", "x_max")] == 12.0
    assert overrides[("waveops", "identity_tolerance")] == 1e-3
    assert overrides[("nls", "coupling")] == 0.0
    assert overrides[("output", "directory")] == "runs/a"
    assert ("grid", "dx") not in overrides
    assert args.modes == ["nls", "linear"]


def test_nls_flags_only_on_evolve_and_verify():
    with pytest.raises(SystemExit):
        handle_args(["scatter", "--potential", "p.json", "--sigma", "2"])
    assert handle_args(["verify", "--potential", "p.json", "--sigma", "2"]).sigma == 2.0


def test_malformed_potential_is_a_config_error(tmp_path):
    code = Program(handle_args(["scatter", "--potential", str(TEST_DATA / "malformed.json"), "--out", str(tmp_path)])).run()
    assert code == EXIT_CONFIG_ERROR


def test_unordered_deltas_are_a_config_error(tmp_path):
    code = Program(handle_args(["scatter", "--potential", str(TEST_DATA / "unordered.json"), "--out", str(tmp_path)])).run()
    assert code == EXIT_CONFIG_ERROR


def test_invalid_grid_is_a_config_error(tmp_path):
    code = Program(handle_args(["scatter", "--potential", str(TEST_DATA / "single_delta.json"), "--dx", "-1", "--out", str(tmp_path)])).run()
    assert code == EXIT_CONFIG_ERROR


def test_scatter_writes_artifacts_and_manifest(tmp_path):
    code = main(["scatter", "--potential", str(TEST_DATA / "single_delta.json"), "--out", str(tmp_path), "--log-level", "WARNING"])
    assert code == EXIT_OK
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    files = {entry["file"] for entry in manifest["files"]}
    assert {"scattering.csv", "bound_states.csv"} <= files
    assert all((tmp_path / name).exists() for name in files)
    header = (tmp_path / "scattering.csv").read_text().splitlines()[0]
    assert header.startswith("k,Re T,Im T")


def test_runs_are_deterministic(tmp_path):
    hashes = []
    for run in ("first", "second"):
        out = tmp_path / run
        assert main(["scatter", "--potential", str(TEST_DATA / "double_delta.toml"), "--out", str(out), "--seed", "7"]) == EXIT_OK
        hashes.append(json.loads((out / "manifest.json").read_text()))
    assert hashes[0] == hashes[1]


def test_failing_check_exits_one(tmp_path):
    args = handle_args(["scatter", "--potential", str(TEST_DATA / "single_delta.json"), "--tol-unitarity", "0", "--out", str(tmp_path)])
    assert Program(args).run() == EXIT_CHECK_FAILED


def test_waveop_records_spectral_checks(tmp_path):
    spec = double_delta_spec(1.0, 1.0)
    decomp = build_decomposition(spec, SpatialGrid.symmetric(15.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 60.0))
    context = RunContext(spec, ArtifactWriter(tmp_path))
    datum = GridFunction.sample(decomp.x_grid, lambda x: np.exp(-(x**2)))
    WaveOpService()._spectral(context, decomp, datum)
    names = {check.name: check for check in context.checks}
    assert {"P_c routes", "P_c half-line form", "Lippmann-Schwinger residual", "transfer-matrix vs Jost waves"} <= set(names)
    assert context.passed, [check for check in context.checks if not check.passed]
    report = json.loads((tmp_path / "spectral.json").read_text())
    assert report["route_agreement"] < 1e-8


def test_even_double_well_datum_checks_balance(tmp_path):
    spec = double_delta_spec(1.0, 1.0)
    decomp = build_decomposition(spec, SpatialGrid.symmetric(10.0, 0.05), WavenumberGrid.midpoint(12.0, np.pi / 40.0))
    context = RunContext(spec, ArtifactWriter(tmp_path), options={"recipe": "symmetric", "coupling": 0.0})
    EvolveService()._double_well(context, decomp)
    names = [check.name for check in context.checks]
    assert names == ["double-well even datum balance"]
    assert context.passed
    report = json.loads((tmp_path / "double_well.json").read_text())
    assert report["mode"] == "balance"
    assert report["imbalance"] < 1e-10
