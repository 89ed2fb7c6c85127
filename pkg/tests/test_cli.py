"""CLI behavior: golden outputs, exit codes, input forms, and round trips."""

import json
import math
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

import spincover.cli as cli
from spincover.cli import (
    EXIT_BAD_INPUT,
    EXIT_NUMERICAL,
    EXIT_OK,
    EXIT_REJECTED,
    EXIT_SELFCHECK,
    main,
    render_json,
)

FIXTURES = Path(__file__).parent / "fixtures"


def run_cli(*args: str, stdin: str | None = None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "spincover", *args],
        capture_output=True,
        text=True,
        input=stdin,
        cwd=FIXTURES,
    )


def test_golden_outputs_are_byte_stable():
    manifest = json.loads((FIXTURES / "manifest.json").read_text())
    assert len(manifest) == 7
    for entry in manifest:
        golden = (FIXTURES / entry["golden"]).read_text()
        for _ in range(2):
            result = run_cli(*entry["args"], entry["input"])
            assert result.returncode == entry["exit_code"], entry["golden"]
            assert result.stdout == golden, entry["golden"]


def test_rejection_also_reports_on_stderr():
    result = run_cli("rotor-from-matrix", "reject_11.json")
    assert result.returncode == EXIT_REJECTED
    assert "orthochronous" in result.stderr


def test_console_entry_point():
    result = subprocess.run(
        ["spincover", "rotor-from-matrix", str(FIXTURES / "c1_phi_pi.json")],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert json.loads(result.stdout)["rotor"] == {"e12": 1.0}


# -- input forms -----------------------------------------------------------

def test_inline_json_input(capsys):
    code = main(["rotor-from-matrix", '{"p": 2, "q": 0, "matrix": [[1, 0], [0, 1]]}'])
    doc = json.loads(capsys.readouterr().out)
    assert code == EXIT_OK
    assert doc["rotor"] == {"1": 1.0}
    assert doc["F"] == "1"


def test_stdin_input():
    payload = '{"p": 2, "q": 0, "matrix": [[-1, 0], [0, -1]]}'
    result = run_cli("rotor-from-matrix", stdin=payload)
    assert result.returncode == 0
    assert json.loads(result.stdout)["rotor"] == {"e12": 1.0}
    explicit = run_cli("rotor-from-matrix", "-", stdin=payload)
    assert explicit.stdout == result.stdout


def test_file_path_input(tmp_path, capsys):
    path = tmp_path / "input.json"
    path.write_text('{"p": 2, "q": 0, "matrix": [[1, 0], [0, 1]]}')
    assert main(["rotor-from-matrix", str(path)]) == EXIT_OK
    capsys.readouterr()


def test_missing_file_is_bad_input(capsys):
    code = main(["rotor-from-matrix", "/nonexistent/path.json"])
    assert code == EXIT_BAD_INPUT
    assert json.loads(capsys.readouterr().out)["exit_code"] == EXIT_BAD_INPUT


# -- bad input variants -------------------------------------------------------

@pytest.mark.parametrize(
    "payload",
    [
        "not json at all",
        "[1, 2, 3]",
        '{"q": 0, "matrix": [[1]]}',
        '{"p": 1.5, "q": 0, "matrix": [[1]]}',
        '{"p": true, "q": 0, "matrix": [[1]]}',
        '{"p": 2, "q": 0}',
        '{"p": 2, "q": 0, "matrix": [[1, 0]]}',
        '{"p": 2, "q": 0, "matrix": [[1, 0], [0, "x"]]}',
        '{"p": 2, "q": 0, "matrix": [[1, 0], [0, NaN]]}',
        '{"p": 0, "q": 0, "matrix": []}',
    ],
)
def test_malformed_matrix_inputs(payload, capsys):
    assert main(["rotor-from-matrix", payload]) == EXIT_BAD_INPUT
    capsys.readouterr()


@pytest.mark.parametrize(
    "payload",
    [
        '{"p": 2, "q": 0}',
        '{"p": 2, "q": 0, "rotor": {}}',
        '{"p": 2, "q": 0, "rotor": {"e9": 1}}',
        '{"p": 2, "q": 0, "rotor": {"1": "big"}}',
        '{"p": 2, "q": 0, "rotor": {"1": NaN}}',
    ],
)
def test_malformed_rotor_inputs(payload, capsys):
    assert main(["matrix-from-rotor", payload]) == EXIT_BAD_INPUT
    capsys.readouterr()


def test_quaternion_method_needs_three_generators(capsys):
    code = main(
        ["rotor-from-matrix", "--method", "quaternion", '{"p": 2, "q": 0, "matrix": [[1, 0], [0, 1]]}']
    )
    assert code == EXIT_BAD_INPUT
    assert "quaternion" in json.loads(capsys.readouterr().out)["error"]


# -- rejection paths ------------------------------------------------------------

def test_matrix_from_rotor_rejects_odd_rotor(capsys):
    code = main(["matrix-from-rotor", '{"p": 3, "q": 0, "rotor": {"e1": 1}}'])
    assert code == EXIT_REJECTED
    assert "rotor invariant violated" in json.loads(capsys.readouterr().out)["error"]


def test_matrix_from_rotor_rejects_non_unit(capsys):
    code = main(["matrix-from-rotor", '{"p": 3, "q": 0, "rotor": {"1": 2}}'])
    assert code == EXIT_REJECTED
    capsys.readouterr()


def test_check_command_reports_and_exits(capsys):
    ok = main(["check", '{"p": 2, "q": 0, "matrix": [[0, -1], [1, 0]]}'])
    doc = json.loads(capsys.readouterr().out)
    assert ok == EXIT_OK
    assert doc["ok"] is True and doc["failures"] == []
    bad = main(["check", '{"p": 2, "q": 0, "matrix": [[1, 0], [0, -1]]}'])
    doc = json.loads(capsys.readouterr().out)
    assert bad == EXIT_REJECTED
    assert doc["ok"] is False and doc["failures"]


def test_project_flag_repairs_near_member(capsys):
    angle = 0.3
    c, s = math.cos(angle), math.sin(angle)
    noisy = [[c + 1e-6, -s], [s, c - 2e-6]]
    payload = json.dumps({"p": 2, "q": 0, "matrix": noisy})
    assert main(["rotor-from-matrix", payload]) == EXIT_REJECTED
    capsys.readouterr()
    assert main(["rotor-from-matrix", "--project", payload]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual"] <= 1e-9
    assert abs(doc["rotor"]["1"] - math.cos(angle / 2.0)) <= 1e-5


def test_loose_tolerance_accepts_near_member(capsys):
    angle = 0.3
    c, s = math.cos(angle), math.sin(angle)
    noisy = [[c + 1e-6, -s], [s, c - 2e-6]]
    payload = json.dumps({"p": 2, "q": 0, "matrix": noisy})
    assert main(["rotor-from-matrix", "--tol", "1e-4", payload]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["residual"] <= 1e-4


# -- round trips -----------------------------------------------------------------

def test_cli_round_trip_matrix_rotor_matrix(capsys):
    source = json.dumps(
        {
            "p": 1,
            "q": 1,
            "matrix": [[math.cosh(1.0), math.sinh(1.0)], [math.sinh(1.0), math.cosh(1.0)]],
        }
    )
    assert main(["rotor-from-matrix", source]) == EXIT_OK
    rotor_doc = json.loads(capsys.readouterr().out)
    back_payload = json.dumps({"p": 1, "q": 1, "rotor": rotor_doc["rotor"]})
    assert main(["matrix-from-rotor", back_payload]) == EXIT_OK
    matrix_doc = json.loads(capsys.readouterr().out)
    got = np.array(matrix_doc["matrix"])
    want = np.array(json.loads(source)["matrix"])
    assert np.max(np.abs(got - want)) <= 1e-9
    assert matrix_doc["membership"]["ok"] is True


def test_output_floats_round_trip_exactly(capsys):
    assert main(["rotor-from-matrix", "--method", "n3", str(FIXTURES / "quat_rot.json")]) == EXIT_OK
    first = capsys.readouterr().out
    doc = json.loads(first)
    rebuilt = json.dumps({"p": 3, "q": 0, "rotor": doc["rotor"]})
    assert main(["matrix-from-rotor", rebuilt]) == EXIT_OK
    matrix_doc = json.loads(capsys.readouterr().out)
    assert np.max(np.abs(np.array(matrix_doc["matrix"]) - np.array([[0, -1, 0], [1, 0, 0], [0, 0, 1]]))) <= 1e-15


# -- selfcheck --------------------------------------------------------------------

def test_selfcheck_passes(capsys):
    assert main(["selfcheck", "--p", "2", "--q", "1", "--trials", "10", "--seed", "3"]) == EXIT_OK
    doc = json.loads(capsys.readouterr().out)
    assert doc["ok"] is True
    assert doc["trials"] == 10


def test_selfcheck_bad_arguments(capsys):
    assert main(["selfcheck", "--p", "0", "--q", "0"]) == EXIT_BAD_INPUT
    capsys.readouterr()
    assert main(["selfcheck", "--p", "2", "--q", "1", "--trials", "0"]) == EXIT_BAD_INPUT
    capsys.readouterr()


def test_selfcheck_failure_exit_code(monkeypatch, capsys):
    def broken(sig, trials=100, seed=1):
        return {"p": sig.p, "q": sig.q, "trials": trials, "seed": seed, "suites": {}, "ok": False}

    monkeypatch.setattr(cli, "run_selfcheck", broken)
    assert main(["selfcheck", "--p", "2", "--q", "1"]) == EXIT_SELFCHECK
    capsys.readouterr()


def test_forced_numerical_failure_exit_code(capsys):
    payload = '{"p": 1, "q": 1, "matrix": [[-1, 0], [0, -1]]}'
    assert main(["rotor-from-matrix", "--tol", "4", payload]) == EXIT_NUMERICAL
    capsys.readouterr()


# -- JSON renderer ------------------------------------------------------------------

def test_render_json_formats():
    assert render_json(True) == "true"
    assert render_json(None) == "null"
    assert render_json(3) == "3"
    assert render_json(0.1) == "0.10000000000000001"
    assert render_json(1.0) == "1"
    assert render_json({"a": [1.5, "x"]}) == '{"a": [1.5, "x"]}'
    with pytest.raises(ValueError):
        render_json(float("nan"))
    with pytest.raises(TypeError):
        render_json(object())


def test_render_json_17_digits_round_trip():
    values = [math.pi, 1e-300, 2.0**-52, 0.7071067811865476, -1.0 / 3.0]
    for v in values:
        assert float(json.loads(render_json(v))) == v
