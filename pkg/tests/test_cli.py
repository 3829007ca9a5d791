"""Scenario runner: validation, exit codes, artifacts and determinism."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from ecwave.cli import (
    EXIT_CHECK,
    EXIT_OK,
    EXIT_VALIDATION,
    SCENARIOS,
    ScenarioConfig,
    list_scenarios,
    main,
    parse_value,
    run_scenario,
)

SEVEN = {"simulate", "decompose", "elliptic", "verify-estimate", "bootstrap", "radiation",
         "tau-diagnostic"}


def test_seven_scenarios_listed():
    assert set(SCENARIOS) == SEVEN
    text = list_scenarios()
    assert text == list_scenarios()
    heads = [line.split(":")[0] for line in text.splitlines() if not line.startswith(" ")]
    assert heads == sorted(SEVEN)


def test_list_command(capsys):
    assert main(["list"]) == EXIT_OK
    assert "bootstrap:" in capsys.readouterr().out


def test_parse_value():
    assert parse_value(" 1e-3 ") == 1e-3
    assert parse_value("[(1, 1.0), (-1, 2)]") == [(1, 1.0), (-1, 2)]
    assert parse_value("True") is True
    assert parse_value("synthetic") == "synthetic"


def test_decompose_synthetic(tmp_path):
    cfg = ScenarioConfig("decompose", {"state": "synthetic", "expected_J": 2, "refine": True},
                         tmp_path)
    rep = run_scenario(cfg, quiet=True)
    assert rep.exit_code == EXIT_OK, rep.message
    assert rep.summary["J"] == 2
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["scenario"] == "decompose" and man["exit_code"] == 0
    assert man["params"]["c2"] == 100.0
    assert "kernel_backend" in man["versions"]
    assert {"bubbles.csv", "decomposition.json", "state.csv"} <= set(man["artifacts"])


def test_wrong_expected_count_is_a_check_failure(tmp_path):
    cfg = ScenarioConfig("decompose", {"state": "synthetic", "expected_J": 3}, tmp_path)
    assert run_scenario(cfg, quiet=True).exit_code == EXIT_CHECK


def test_bootstrap_zero_tau(tmp_path):
    rep = run_scenario(ScenarioConfig("bootstrap", {"tau": 0.0}, tmp_path), quiet=True)
    assert rep.exit_code == EXIT_OK and rep.summary["M"] == 0.0


def test_bootstrap_inadmissible_is_a_validation_error(tmp_path):
    rep = run_scenario(ScenarioConfig("bootstrap", {"gamma": 10.0}, tmp_path), quiet=True)
    assert rep.exit_code == EXIT_VALIDATION and "gamma" in rep.message


def test_validation_errors(tmp_path):
    assert run_scenario(ScenarioConfig("nope", {}, tmp_path)).exit_code == EXIT_VALIDATION
    rep = run_scenario(ScenarioConfig("decompose", {}, tmp_path))
    assert rep.exit_code == EXIT_VALIDATION and "'state'" in rep.message
    rep = run_scenario(ScenarioConfig("bootstrap", {"K": "ten", "bogus": 1}, tmp_path))
    assert "bogus" in rep.message and "K" in rep.message
    rep = run_scenario(ScenarioConfig("bootstrap", {}, tmp_path, seed=1.5))
    assert rep.exit_code == EXIT_VALIDATION


def test_main_exit_codes(tmp_path):
    assert main(["no-such-scenario"]) == EXIT_VALIDATION
    assert main(["bootstrap", "--out", str(tmp_path), "--set", "K"]) == EXIT_VALIDATION
    assert main(["bootstrap", "--out", str(tmp_path), "--quiet", "--set", "tau=0.0",
                 "--set", "K=4"]) == EXIT_OK
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert man["params"]["K"] == 4 and man["params"]["tau"] == 0.0


def test_config_file(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[scenario]\nname = bootstrap\nseed = 3\n\n[params]\nK = 5\n")
    cfg = ScenarioConfig.from_file(ini, tmp_path / "out")
    assert cfg.scenario == "bootstrap" and cfg.seed == 3 and cfg.params == {"K": 5}
    assert main(["decompose", "--config", str(ini), "--out", str(tmp_path)]) == EXIT_VALIDATION
    assert main(["bootstrap", "--config", str(ini), "--out", str(tmp_path / "o"),
                 "--quiet"]) == EXIT_OK


def test_runs_are_deterministic(tmp_path):
    params = {"n_random": 2, "n": 4001, "radii": [0.0, 1.0], "t_factor": 10.0,
              "defect_tol": 1.0, "iso_tol": 1e-4}
    for d in ("a", "b"):
        rep = run_scenario(ScenarioConfig("radiation", dict(params), tmp_path / d, seed=7),
                           quiet=True)
        assert rep.exit_code == EXIT_OK, rep.message
    for name in ("isometry.csv", "defects.csv", "profiles/profile_000.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_tau_diagnostic_of_indicator(tmp_path):
    params = {"kappas": [1e-2, 1e-1, 1.0], "t_lo": -200.0, "t_hi": 200.0, "samples": 40001}
    rep = run_scenario(ScenarioConfig("tau-diagnostic", params, tmp_path), quiet=True)
    assert rep.exit_code == EXIT_OK, rep.message
    assert rep.summary["term_sup_window"] == pytest.approx(1.0, abs=1e-6)


def test_simulate_small_gaussian(tmp_path):
    params = {"initial": "gaussian", "amplitude": 0.1, "radius": 10.0, "h": 0.02,
              "t_end": 1.0, "snapshots": 3}
    rep = run_scenario(ScenarioConfig("simulate", params, tmp_path), quiet=True)
    assert rep.exit_code == EXIT_OK, rep.message
    assert (tmp_path / "trajectory" / "manifest.json").exists()
    assert rep.summary["relative_energy_drift"] <= 1e-4


def test_elliptic_scenario(tmp_path):
    rep = run_scenario(ScenarioConfig("elliptic", {}, tmp_path), quiet=True)
    assert rep.exit_code == EXIT_OK, rep.message
    assert rep.summary["mu0"] == pytest.approx(3**-0.5, rel=1e-9)


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "ecwave.cli", "list"], capture_output=True,
                         text=True, check=True)
    assert out.stdout == list_scenarios()
