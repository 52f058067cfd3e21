import json
from pathlib import Path

import numpy as np
import pytest

from shiftlab.cli import main
from shiftlab.models import dump_matrix, matrix_from_json

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"
HARDY = str(SCENARIO_DIR / "hardy-2x2.json")


def test_run_text_output(capsys):
    code = main(["run", HARDY])
    out = capsys.readouterr().out
    assert code == 0
    assert "mult(S) = 2 (certified)" in out
    assert "result: PASS" in out


def test_run_json_output(capsys):
    code = main(["run", HARDY, "--format", "json"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["dim_S"] == 12
    assert rep["passed"] is True
    assert rep["x_ranks"] == [4, 8]


def test_run_writes_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code = main(["run", HARDY, "--format", "json", "--out", str(target)])
    assert code == 0
    assert capsys.readouterr().out == ""
    rep = json.loads(target.read_text())
    assert rep["multiplicities"]["S"]["upper"] == 2


def test_suite_runs_all_scenarios(capsys):
    code = main(["suite", str(SCENARIO_DIR)])
    out = capsys.readouterr().out
    assert code == 0
    assert "4/4 scenarios passed" in out
    for name in ("hardy-2x2", "mixed-3", "quotient-zeros", "noncyclic-inequality"):
        assert name in out


def test_suite_on_empty_directory(tmp_path, capsys):
    assert main(["suite", str(tmp_path)]) == 2
    assert "no scenario files" in capsys.readouterr().err


def test_missing_scenario_is_exit_2(capsys):
    assert main(["run", "does-not-exist.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_invalid_json_is_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["run", str(bad)]) == 2
    capsys.readouterr()


def test_failed_check_is_exit_1(tmp_path, capsys):
    """An over-tight residual threshold turns real rounding into a failure."""
    obj = json.loads((SCENARIO_DIR / "quotient-zeros.json").read_text())
    obj["check_tol"] = 1e-18
    path = tmp_path / "too-strict.json"
    path.write_text(json.dumps(obj))
    assert main(["run", str(path)]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_model_dump_shorthand(capsys):
    assert main(["model", "dump", "wb2:4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["m"] == 4
    T = matrix_from_json(payload["matrix"])
    k = np.arange(3)
    assert np.allclose(np.diag(T, -1), np.sqrt((k + 1) / (k + 2)))
    assert payload["weights"] == pytest.approx(list(np.sqrt((k + 1) / (k + 2))))


def test_model_dump_from_factor_file(tmp_path, capsys):
    spec = tmp_path / "factor.json"
    spec.write_text(json.dumps({"kind": {"quotient_roots": [0.3, -0.5]}}))
    assert main(["model", "dump", str(spec)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["m"] == 2
    assert payload["roots"] == [
        {"value": [0.3, 0.0], "multiplicity": 1},
        {"value": [-0.5, 0.0], "multiplicity": 1},
    ]


def test_model_dump_bad_shorthand(capsys):
    assert main(["model", "dump", "fourier:4"]) == 2
    assert main(["model", "dump", "hardy:four"]) == 2
    capsys.readouterr()


def test_closure_command(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    dump_matrix(np.eye(4)[:, :1], gen)
    assert main(["closure", "hardy:4", str(gen)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim"] == 4

    tail = tmp_path / "tail.json"
    dump_matrix(np.eye(4)[:, 3:], tail)
    assert main(["closure", "hardy:4", str(tail)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["dim"] == 1
    basis = matrix_from_json(payload["basis"])
    assert np.allclose(np.abs(basis[:, 0]), np.eye(4)[:, 3])


def test_closure_dimension_mismatch(tmp_path, capsys):
    gen = tmp_path / "gen.json"
    dump_matrix(np.eye(3)[:, :1], gen)
    assert main(["closure", "hardy:4", str(gen)]) == 2
    capsys.readouterr()


def test_seed_and_trials_overrides(capsys):
    code = main(["run", HARDY, "--seed", "7", "--trials", "8", "--format", "json"])
    assert code == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["settings"]["seed"] == 7
    assert rep["settings"]["trials"] == 8
    assert rep["multiplicities"]["S"]["upper"] == 2  # answer is seed-independent
