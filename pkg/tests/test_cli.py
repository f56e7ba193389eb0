import json

import numpy as np
import pytest

from quadosc.cli import main


def write_config(tmp_path, extra=None, lam=0.2):
    config = {
        "model": {"model": "dpo", "m": 1.0, "omega": 1.0, "lambda": lam,
                  "hbar": 1.0},
        "solve": {"t_max": 3.0, "mesh": {"num": 11}},
    }
    if extra:
        config.update(extra)
    path = tmp_path / "config.json"
    path.write_text(json.dumps(config))
    return path


def test_solve_mu_writes_deterministic_csv(tmp_path):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve-mu", "--config", str(cfg), "--out", str(out1)]) == 0
    assert main(["solve-mu", "--config", str(cfg), "--out", str(out2)]) == 0
    assert (out1 / "mu.csv").read_bytes() == (out2 / "mu.csv").read_bytes()
    lines = (out1 / "mu.csv").read_text().splitlines()
    assert len(lines) == 12
    assert lines[0].startswith("t (time)")


def test_classify_ince_dpo_example(tmp_path):
    cfg = write_config(tmp_path, lam=0.5)
    out = tmp_path / "out"
    assert main(["classify-ince", "--config", str(cfg), "--out", str(out)]) == 0
    report = json.loads((out / "classify.json").read_text())
    assert report["pi_pair_possible"] is False
    assert report["two_pi_pair_possible"] is False
    assert report["p_min"] == pytest.approx(0.0625, abs=1e-12)


def test_classify_ince_sweep_with_jobs(tmp_path):
    cfg = write_config(tmp_path, extra={"classify": {"ratios": [0.2, 0.4, 0.6]}})
    out = tmp_path / "out"
    assert main(["classify-ince", "--config", str(cfg), "--out", str(out),
                 "--jobs", "3"]) == 0
    for k in range(3):
        report = json.loads((out / f"classify_{k:02d}.json").read_text())
        assert report["pi_pair_possible"] is False


def test_classify_explicit_form(tmp_path):
    cfg = write_config(tmp_path, extra={
        "classify": {"form": {"a0": 0.3, "b0": 0.6, "c0": 1.0, "d0": 0.0}}})
    out = tmp_path / "out"
    assert main(["classify-ince", "--config", str(cfg), "--out", str(out)]) == 0
    report = json.loads((out / "classify.json").read_text())
    assert report["pi_pair_possible"] is True


def test_green_outputs(tmp_path):
    cfg = write_config(tmp_path, extra={"green": {"times": [0.5, 1.0]}})
    out = tmp_path / "out"
    assert main(["green", "--config", str(cfg), "--out", str(out)]) == 0
    rows = json.loads((out / "green_coefficients.json").read_text())
    assert [row["t"] for row in rows] == [0.5, 1.0]
    assert all(set(row) == {"t", "alpha0", "beta0", "gamma0", "mu0", "branch"}
               for row in rows)
    slice_lines = (out / "kernel_slice_00.csv").read_text().splitlines()
    assert slice_lines[0].startswith("x (length)")
    assert len(slice_lines) == 258


def test_propagate_outputs_and_unitarity(tmp_path):
    cfg = write_config(tmp_path, extra={
        "propagate": {"grid": {"x_min": -10.0, "x_max": 10.0, "n": 2048},
                      "initial": {"epsilon": 1.0, "delta": 0.0, "n": 0},
                      "times": [1.0]}})
    out = tmp_path / "out"
    assert main(["propagate", "--config", str(cfg), "--out", str(out)]) == 0
    meta = json.loads((out / "psi_00.meta.json").read_text())
    assert meta["t"] == 1.0
    assert meta["norm"] == pytest.approx(1.0, abs=1e-6)
    data = np.genfromtxt(out / "psi_00.csv", delimiter=",", skip_header=1)
    assert data.shape == (2048, 3)


def test_eigenstates_outputs(tmp_path):
    cfg = write_config(tmp_path, extra={
        "eigenstates": {"n_max": 2, "C0": 1.0, "epsilon": 1.0, "delta": 0.0,
                        "times": [0.0, 0.8],
                        "grid": {"x_min": -12.0, "x_max": 12.0, "n": 2048}}})
    out = tmp_path / "out"
    assert main(["eigenstates", "--config", str(cfg), "--out", str(out)]) == 0
    gram = json.loads((out / "gram_report.json").read_text())
    assert all(dev <= 1e-8 for dev in gram.values())
    assert (out / "eigenstate_n2_t01.csv").exists()


def test_validate_subset_and_artifact(tmp_path):
    cfg = write_config(tmp_path, extra={"validate": {"criteria": [1, 2, 10]}})
    out = tmp_path / "out"
    assert main(["validate", "--config", str(cfg), "--out", str(out)]) == 0
    report = json.loads((out / "validation.json").read_text())
    assert [entry["id"] for entry in report] == [1, 2, 10]
    assert all(entry["passed"] for entry in report)
    # wall-clock checks are blanked in the artifact for determinism
    runtime_checks = [c for entry in report for c in entry["checks"]
                      if "runtime" in c["label"]]
    assert runtime_checks and all(c["measured"] is None for c in runtime_checks)


def test_validate_forced_failure_exits_2(tmp_path):
    cfg = write_config(tmp_path, extra={
        "validate": {"criteria": [2], "tolerance_scale": {"2": 1e-8}}})
    out = tmp_path / "out"
    assert main(["validate", "--config", str(cfg), "--out", str(out)]) == 2
    report = json.loads((out / "validation.json").read_text())
    assert report[0]["passed"] is False


def test_validate_unknown_criterion_exits_1(tmp_path):
    cfg = write_config(tmp_path, extra={"validate": {"criteria": [99]}})
    assert main(["validate", "--config", str(cfg),
                 "--out", str(tmp_path / "out")]) == 1


def test_missing_omega_reports_field_path(tmp_path, capsys):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"model": {"model": "dpo"},
                                "solve": {"t_max": 1.0}}))
    code = main(["solve-mu", "--config", str(path),
                 "--out", str(tmp_path / "out")])
    captured = capsys.readouterr()
    assert code == 1
    assert "config.model" in captured.err


def test_unknown_config_key_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, extra={"bogus": 1})
    code = main(["solve-mu", "--config", str(cfg),
                 "--out", str(tmp_path / "out")])
    assert code == 1
    assert "unknown keys" in capsys.readouterr().err


def test_set_overrides(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "out"
    assert main(["solve-mu", "--config", str(cfg), "--out", str(out),
                 "--set", "solve.mesh.num=5"]) == 0
    assert len((out / "mu.csv").read_text().splitlines()) == 6


def test_config_required_for_non_validate(tmp_path, capsys):
    assert main(["solve-mu", "--out", str(tmp_path)]) == 1
    assert "--config is required" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    assert main(["no-such-command"]) == 1
