# Copyright (c) ddbench contributors. All rights reserved.
#
# This source code is licensed under the BSD license found in the
# LICENSE file in the root directory of this source tree.

import json
import math
from pathlib import Path
from typing import Any, Dict

import pandas as pd
import pytest

from ddbench.experiments import cli
from ddbench.experiments.config import (
    config_from_dict,
    config_hash,
    ConfigError,
    load_config,
    NUM_WORKERS_ENV,
    with_output_dir,
)
from ddbench.experiments.report import (
    build_tables,
    EMSR_FILE,
    EmptyResultError,
    load_runs,
    pair_runs,
    report,
    RUNS_FILE,
    SUMMARY_FILE,
)
from ddbench.experiments.sweep import CONFIG_FILE, execute_sweep, grid_cells, run_sweep
from ddbench.passes import DDSequence, DecompositionStyle, OptPreset

BASE: Dict[str, Any] = {
    "devices": ["cairo-like"],
    "qubit_range": [3, 4],
    "styles": ["CX_IMPL"],
    "sequences": ["CPMG"],
    "presets": ["OPT3"],
    "shots": 2000,
    "grid_resolution": 8,
    "noise": {"detuning_samples": 4},
}

PROVENANCE_KEYS = {
    "config_sha256",
    "device_ref",
    "instance_seed",
    "noise_seed",
    "shot_seed",
    "version",
}


def _config(tmp_path: Path, **overrides: Any):
    data = {**BASE, "output_dir": str(tmp_path / "out"), **overrides}
    return config_from_dict(data)


def _synthetic_run(sequence: str, n_qubits: int, r: float, sp: float, instance: int = 0) -> Dict[str, Any]:
    return {
        "device": "cairo-like",
        "n_qubits": n_qubits,
        "style": "CX_IMPL",
        "preset": "OPT3",
        "instance": instance,
        "sequence": sequence,
        "r0": 0.9,
        "p0": 0.5,
        "result": {"r": r, "sp": sp, "fq": 0.95 - 0.05 * n_qubits, "tau_dt": 1000 * n_qubits},
    }


def _write_runs(path: Path, runs) -> Path:
    path.mkdir(parents=True, exist_ok=True)
    with open(path / RUNS_FILE, "w") as f:
        for run in runs:
            f.write(json.dumps(run) + "\n")
    return path


def test_config_defaults(tmp_path: Path) -> None:
    config = config_from_dict({"devices": ["cairo-like"], "qubit_range": [3, 5]})
    assert config.qubit_counts == (3, 4, 5)
    assert config.styles == (DecompositionStyle.CX_IMPL,)
    assert config.presets == (OptPreset.OPT3,)
    assert config.shots == 30000
    # lower case enum names are accepted
    config = _config(tmp_path, sequences=["none", "xy4", "cpmg"])
    assert config.dd_sequences == (DDSequence.XY4, DDSequence.CPMG)


@pytest.mark.parametrize(
    "overrides",
    [
        pytest.param({"devices": []}, id="no-devices"),
        pytest.param({"styles": []}, id="no-styles"),
        pytest.param({"qubit_range": [2, 4]}, id="range-low"),
        pytest.param({"qubit_range": [5, 4]}, id="range-inverted"),
        pytest.param({"qubit_range": [3, 13]}, id="range-high"),
        pytest.param({"qubit_range": [3]}, id="range-shape"),
        pytest.param({"instance_seed": -1}, id="negative-seed"),
        pytest.param({"noise": {"rng_seed": -3}}, id="negative-noise-seed"),
        pytest.param({"noise": {"detuning_samples": 0}}, id="no-detuning-samples"),
        pytest.param({"noise": {"bogus": 1}}, id="unknown-noise-key"),
        pytest.param({"shots": 0}, id="no-shots"),
        pytest.param({"instances": 0}, id="no-instances"),
        pytest.param({"two_qubit_fidelities": [0.99, 1.2]}, id="fidelity"),
        pytest.param({"presets": ["OPT2"]}, id="unknown-preset"),
        pytest.param({"colour": "blue"}, id="unknown-key"),
    ],
)
def test_config_rejects(tmp_path: Path, overrides: Dict[str, Any]) -> None:
    with pytest.raises(ConfigError):
        _config(tmp_path, **overrides)


def test_config_requires_devices_and_range() -> None:
    with pytest.raises(ConfigError, match="devices"):
        config_from_dict({"qubit_range": [3, 4]})
    with pytest.raises(ConfigError, match="qubit_range"):
        config_from_dict({"devices": ["cairo-like"]})


def test_load_config(tmp_path: Path) -> None:
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError, match="JSON"):
        load_config(bad)
    good = tmp_path / "sweep.json"
    good.write_text(json.dumps({**BASE, "output_dir": "out", "devices": ["cairo-like", "my_device.json"]}))
    config = load_config(good)
    # relative paths resolve against the config file, bundled names stay as they are
    assert config.devices == ("cairo-like", str(tmp_path.resolve() / "my_device.json"))
    assert config.output_dir == str(tmp_path.resolve() / "out")


def test_config_hash_ignores_location_and_workers(tmp_path: Path) -> None:
    config = _config(tmp_path)
    moved = with_output_dir(config, tmp_path / "elsewhere")
    assert config_hash(moved) == config_hash(config)
    assert config_hash(_config(tmp_path, num_workers=4)) == config_hash(config)
    assert config_hash(_config(tmp_path, shots=2001)) != config_hash(config)
    assert len(config_hash(config)) == 64


def test_effective_num_workers(tmp_path: Path, monkeypatch) -> None:
    config = _config(tmp_path, num_workers=3)
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    assert config.effective_num_workers() == 3
    monkeypatch.setenv(NUM_WORKERS_ENV, "2")
    assert config.effective_num_workers() == 2
    monkeypatch.setenv(NUM_WORKERS_ENV, "many")
    with pytest.raises(ConfigError):
        config.effective_num_workers()


def test_grid_cells_order(tmp_path: Path) -> None:
    config = _config(
        tmp_path,
        styles=["CX_IMPL", "CZ_IMPL"],
        presets=["OPT1", "OPT3"],
        instances=2,
        two_qubit_fidelities=[0.99, 0.995],
    )
    cells = grid_cells(config)
    assert len(cells) == 2 * 2 * 2 * 2 * 2
    assert cells[0].two_qubit_fidelity == 0.99 and cells[0].n_qubits == 3
    # instance varies fastest, the fidelity slowest
    assert [c.instance for c in cells[:2]] == [0, 1]
    assert cells[16].two_qubit_fidelity == 0.995
    assert "@f2q=0.99" in str(cells[0])


def test_minimal_sweep(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    config = _config(tmp_path)
    outcome = run_sweep(config, quiet=True)
    assert outcome.ok
    assert outcome.num_cells == 2
    assert outcome.num_runs == 4

    out = Path(config.output_dir)
    assert (out / CONFIG_FILE).is_file()
    runs = load_runs(out)
    assert [(run["n_qubits"], run["sequence"]) for run in runs] == [
        (3, "NONE"),
        (3, "CPMG"),
        (4, "NONE"),
        (4, "CPMG"),
    ]
    for run in runs:
        assert set(run["provenance"]) == PROVENANCE_KEYS
        assert run["provenance"]["config_sha256"] == config_hash(config)
        assert sum(run["result"]["counts"].values()) == config.shots
        assert 0.0 <= run["result"]["sp"] <= 1.0
        assert 0.0 < run["result"]["fq"] <= 1.0
    # the pulses cost fidelity and never shorten the schedule
    for base, dd in zip(runs[::2], runs[1::2]):
        assert dd["result"]["tau_dt"] == base["result"]["tau_dt"]
        assert dd["result"]["fq"] <= base["result"]["fq"]
        assert dd["provenance"] == base["provenance"]

    records = pair_runs(runs)
    assert len(records) == 2
    assert all(record.sequence == "CPMG" for record in records)
    summary = pd.read_csv(out / SUMMARY_FILE)
    assert summary.loc[summary["factor"] == "all", "n_trials"].item() == 2


def test_sweep_is_deterministic(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    config = _config(tmp_path, qubit_range=[3, 3], sequences=["CPMG", "XY4"])
    first = execute_sweep(with_output_dir(config, tmp_path / "a"), quiet=True)
    second = execute_sweep(with_output_dir(config, tmp_path / "b"), quiet=True)
    assert first.num_runs == second.num_runs == 3
    a = (tmp_path / "a" / RUNS_FILE).read_bytes()
    b = (tmp_path / "b" / RUNS_FILE).read_bytes()
    assert a == b


@pytest.mark.timeout(600)
def test_sweep_worker_count_does_not_change_output(tmp_path: Path, monkeypatch) -> None:
    config = _config(tmp_path, instances=2)
    monkeypatch.setenv(NUM_WORKERS_ENV, "1")
    execute_sweep(with_output_dir(config, tmp_path / "serial"), quiet=True)
    monkeypatch.setenv(NUM_WORKERS_ENV, "2")
    execute_sweep(with_output_dir(config, tmp_path / "pool"), quiet=True)
    assert (tmp_path / "serial" / RUNS_FILE).read_bytes() == (tmp_path / "pool" / RUNS_FILE).read_bytes()


def test_sweep_skips_failed_cells(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    config = _config(tmp_path, devices=["cairo-like", str(tmp_path / "nowhere.json")], qubit_range=[3, 3])
    outcome = execute_sweep(config, quiet=True)
    assert not outcome.ok
    assert [cell.device for cell in outcome.failed] == [str(tmp_path / "nowhere.json")]
    assert outcome.num_runs == 2


def test_report_emsr(tmp_path: Path) -> None:
    runs = []
    # DD beats the baseline ratio on two of four cells, ties on one
    for n, (d_r, d_sp) in zip(range(3, 7), [(0.09, 0.1), (0.045, -0.1), (-0.09, -0.05), (0.0, -0.2)]):
        runs.append(_synthetic_run("NONE", n, 0.6, 0.3))
        runs.append(_synthetic_run("CPMG", n, 0.6 + d_r, 0.3 + d_sp))
    tables = report(_write_runs(tmp_path / "res", runs))
    assert len(tables.metrics) == 4
    overall = tables.emsr[tables.emsr["factor"] == "all"].iloc[0]
    assert overall["emsr_ar"] == 50.0
    assert overall["emsr_sp"] == 25.0
    assert overall["n_trials"] == 4
    assert tables.metrics["delta_nar"].tolist() == pytest.approx([0.1, 0.05, -0.1, 0.0])

    fits = tables.fits
    assert set(fits["axis"]) >= {"fq", "log_tau", "n_qubits", "nar_b"}
    by_n = fits[(fits["factor"] == "sequence") & (fits["metric"] == "log_tau") & (fits["axis"] == "n_qubits")]
    assert by_n["c_r"].item() > 0.99
    assert (tmp_path / "res" / EMSR_FILE).is_file()
    written = pd.read_csv(tmp_path / "res" / EMSR_FILE)
    assert written["emsr_ar"].tolist() == tables.emsr["emsr_ar"].tolist()


def test_report_single_pair(tmp_path: Path) -> None:
    runs = [_synthetic_run("NONE", 4, 0.5, 0.2), _synthetic_run("XY4", 4, 0.55, 0.25)]
    tables = build_tables(runs)
    row = tables.summary[tables.summary["factor"] == "all"].iloc[0]
    assert row["nar_b"] == pytest.approx(0.5 / 0.9)
    assert row["delta_nar"] == pytest.approx(0.05 / 0.9)
    assert row["delta_nsp"] == pytest.approx(0.1)
    for axis in ("fq", "log_tau", "n_qubits"):
        assert math.isnan(row[f"slope_delta_nar_{axis}"])
        assert math.isnan(row[f"slope_delta_nsp_{axis}"])
    assert tables.fits["c_r"].isna().all()
    assert (tables.fits["strength"] == "").all()


def test_report_ignores_unpaired_runs(tmp_path: Path) -> None:
    runs = [_synthetic_run("CPMG", 3, 0.5, 0.2), _synthetic_run("NONE", 4, 0.5, 0.2)]
    assert pair_runs(runs) == []
    with pytest.raises(EmptyResultError):
        build_tables(runs)


def test_load_runs_errors(tmp_path: Path) -> None:
    with pytest.raises(EmptyResultError):
        load_runs(tmp_path)
    (tmp_path / RUNS_FILE).write_text("\n")
    with pytest.raises(EmptyResultError, match="no runs"):
        load_runs(tmp_path)
    (tmp_path / RUNS_FILE).write_text('{"a": 1}\n{oops\n')
    with pytest.raises(EmptyResultError, match=":2:"):
        load_runs(tmp_path / RUNS_FILE)


def test_cli_bad_input(tmp_path: Path) -> None:
    assert cli.main(["run", str(tmp_path / "missing.json")]) == cli.EXIT_BAD_INPUT
    assert cli.main(["report", str(tmp_path)]) == cli.EXIT_BAD_INPUT
    assert cli.main(["inspect", str(tmp_path / RUNS_FILE)]) == cli.EXIT_BAD_INPUT


def test_cli_run_report_inspect(tmp_path: Path, monkeypatch, capsys) -> None:
    monkeypatch.setenv(NUM_WORKERS_ENV, "1")
    config_path = tmp_path / "sweep.json"
    config_path.write_text(json.dumps({**BASE, "qubit_range": [3, 3]}))
    out = tmp_path / "cli-out"
    argv = ["run", str(config_path), "--output-dir", str(out), "--workers", "1", "--quiet"]
    assert cli.main(argv) == cli.EXIT_OK
    assert (out / RUNS_FILE).is_file()

    capsys.readouterr()
    assert cli.main(["report", str(out)]) == cli.EXIT_OK
    assert "emsr_ar" in capsys.readouterr().out
    assert cli.main(["inspect", str(out / RUNS_FILE)]) == cli.EXIT_OK
    printed = capsys.readouterr().out
    assert "runs:" in printed and "CPMG" in printed


def test_cli_cell_failure_exit_code(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.setenv(NUM_WORKERS_ENV, "1")
    config_path = tmp_path / "sweep.json"
    config_path.write_text(
        json.dumps({**BASE, "qubit_range": [3, 3], "devices": ["cairo-like", "nowhere.json"], "output_dir": "out"})
    )
    assert cli.main(["run", str(config_path), "--quiet"]) == cli.EXIT_CELL_FAILED


@pytest.mark.timeout(600)
def test_dd_gain_grows_as_baseline_drops(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    config = _config(
        tmp_path,
        qubit_range=[6, 6],
        two_qubit_fidelities=[0.985, 0.99, 0.995, 0.999],
        instances=20,
        exact_metrics=True,
    )
    assert run_sweep(config, quiet=True).ok
    fits = report(config.output_dir).fits
    inverse = fits[(fits["metric"] == "delta_nar") & (fits["axis"] == "nar_b")].iloc[0]
    # 20 seeded instances on each of the 4 fidelity variants
    assert inverse["n_points"] == 80
    assert inverse["slope"] < 0
    assert inverse["p_value"] < 0.05


@pytest.mark.timeout(600)
def test_pulses_cost_without_detuning(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.delenv(NUM_WORKERS_ENV, raising=False)
    config = _config(
        tmp_path,
        qubit_range=[4, 4],
        sequences=["XY4"],
        instances=20,
        exact_metrics=True,
        noise={"enable_detuning": False},
    )
    assert run_sweep(config, quiet=True).ok
    tables = report(config.output_dir)
    assert len(tables.metrics) == 20
    assert tables.metrics["instance"].nunique() == 20
    assert tables.metrics["delta_nsp"].mean() < 0
