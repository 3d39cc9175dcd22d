import csv
import json
import re
from fractions import Fraction
from pathlib import Path

import mpmath
import pytest

from modules.cli.manager import main

SCHEMA = Path(__file__).resolve().parent.parent / "schemas" / "solve_report.schema.json"


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


JSON_TYPES = {"integer": int, "string": str, "array": list, "object": dict}


def assert_matches(value, rule, defs, where="report"):
    """The subset of JSON Schema the report schema uses"""
    if "$ref" in rule:
        rule = defs[rule["$ref"].rsplit("/", 1)[1]]
    if "type" in rule:
        assert isinstance(value, JSON_TYPES[rule["type"]]), f"{where}: {value!r} is not {rule['type']}"
        assert not isinstance(value, bool), where
    if "enum" in rule:
        assert value in rule["enum"], where
    if "minimum" in rule:
        assert value >= rule["minimum"], where
    if "pattern" in rule:
        assert re.match(rule["pattern"], value), f"{where}: {value!r}"
    if "minItems" in rule:
        assert rule["minItems"] <= len(value) <= rule["maxItems"], where
    for key in rule.get("required", []):
        assert key in value, f"{where}: {key} missing"
    for key, sub in rule.get("properties", {}).items():
        if key in value:
            assert_matches(value[key], sub, defs, f"{where}.{key}")
    if "items" in rule:
        for i, item in enumerate(value):
            assert_matches(item, rule["items"], defs, f"{where}[{i}]")


def assert_report(report):
    schema = json.loads(SCHEMA.read_text(encoding="utf-8"))
    assert_matches(report, schema, schema["$defs"])
    if report["status"] == "solved":
        for key in schema["then"]["required"]:
            assert key in report


def value_of(lines, key):
    for line in lines:
        if line.startswith(f"{key} = "):
            return line.split(" = ", 1)[1]
    raise AssertionError(f"{key} missing from output")


def test_solve_text(capsys):
    assert main(["solve", "--m", "0", "--order", "2", "--digits", "12"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert value_of(lines, "status") == "solved"
    assert abs(float(value_of(lines, "omega")) - 18 / 218 ** 0.5) < 1e-10
    with mpmath.workdps(30):
        expected = float(mpmath.sqrt(218) * mpmath.pi / 9)
    assert abs(float(value_of(lines, "C_N")) - expected) < 1e-10
    assert value_of(lines, "univariate degree") == "4"


def test_solve_json_matches_schema(capsys):
    assert main(["solve", "--m", "0", "--order", "2", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert_report(report)
    assert report["status"] == "solved"
    assert report["univariate_degree"] == 4
    lo, hi = (float(Fraction(v)) for v in report["omega_interval"])
    assert lo <= 18 / 218 ** 0.5 <= hi


def test_solve_json_order_three(capsys):
    assert main(["solve", "--m", "0", "--order", "3", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert_report(report)
    assert report["status"] == "solved"
    assert report["univariate_degree"] == 8


def test_solve_csv_to_file(tmp_path):
    out = tmp_path / "solve.csv"
    assert main(["solve", "--m", "1", "--order", "1", "--format", "csv", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["name", "decimal", "lo", "hi"]
    names = [row[0] for row in rows[1:]]
    assert names == ["omega", "a1", "C_N", "residual"]


@pytest.mark.parametrize("argv", [
    ["solve", "--amplitude", "0"],
    ["solve", "--order", "0"],
    ["solve", "--m", "-1"],
    ["period", "--k", "-1"],
    ["period", "--method", "quadrature"],
    ["emit", "trajectory", "--out", "unused.csv"],
])
def test_invalid_input_exits_2(argv, capsys):
    assert main(argv) == 2
    assert "invalid input" in capsys.readouterr().err


def test_budget_exhausted_json_matches_schema(capsys):
    assert main(["solve", "--m", "0", "--order", "3", "--budget-spairs", "1", "--format", "json"]) == 3
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "budget-exhausted"
    assert_report(report)


def test_budget_exhaustion_exits_3(capsys):
    assert main(["solve", "--m", "0", "--order", "3", "--budget-spairs", "1"]) == 3
    out = capsys.readouterr().out
    assert "status = budget-exhausted" in out
    assert "spairs_processed = 2" in out


def test_table_text_and_csv(capsys, tmp_path):
    assert main(["table", "--max-m", "1", "--max-order", "1", "--workers", "1"]) == 0
    text = capsys.readouterr().out
    assert "11.38" in text and "8.54" in text
    assert text.splitlines()[0].split() == ["N", "m=0", "m=1"]

    out = tmp_path / "table.csv"
    assert main(["table", "--max-m", "0", "--max-order", "1", "--format", "csv", "--out", str(out)]) == 0
    assert read_csv(out) == [["m", "N", "C_N", "error_percent"], ["0", "1", "4.4429", "11.38"]]


def test_table_empty_range(capsys):
    assert main(["table", "--max-m", "-1", "--max-order", "3"]) == 0
    assert capsys.readouterr().out.strip() == ""


def test_period_exact(capsys):
    assert main(["period", "--amplitude", "1"]) == 0
    assert "5.0132565492620" in capsys.readouterr().out


def test_period_json_with_k(capsys):
    assert main(["period", "--method", "quadrature", "--k", "1/10", "--k", "1/100", "--format", "json"]) == 0
    results = json.loads(capsys.readouterr().out)
    assert [r["method"] for r in results] == ["quadrature", "quadrature"]
    assert [r["k"] for r in results] == [0.1, 0.01]
    assert float(results[0]["value"]) > float(results[1]["value"])


def test_emit_trajectory(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["emit", "trajectory", "--k", "0.02", "--t-max", "2", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "x", "y"]
    assert rows[1] == ["0", "1", "0"]
    assert float(rows[-1][0]) == 2.0


def test_emit_trajectory_sweep(tmp_path):
    out = tmp_path / "traj.csv"
    assert main(["emit", "trajectory", "--k-sweep", "figure3", "--t-max", "1", "--out", str(out)]) == 0
    for suffix in ("1", "0.02", "0.001"):
        assert (tmp_path / f"traj_k{suffix}.csv").exists()


def test_emit_weak_solution_and_orbit(tmp_path):
    weak = tmp_path / "weak.csv"
    assert main(["emit", "weaksol", "--from", "-2", "--to", "2", "--step", "0.5", "--out", str(weak)]) == 0
    rows = read_csv(weak)
    assert rows[0] == ["t", "x"]
    assert len(rows) == 10
    assert ["0", "1"] in rows[1:]

    orbit = tmp_path / "orbit.csv"
    assert main(["emit", "orbit", "--amplitude", "2", "--from", "-1", "--to", "1", "--step", "1",
                 "--out", str(orbit)]) == 0
    rows = read_csv(orbit)
    assert rows[0] == ["y", "x"]
    assert rows[2] == ["0", "2"]


def test_emit_waveform(tmp_path):
    out = tmp_path / "wave.csv"
    assert main(["emit", "waveform", "--m", "0", "--order", "2", "--from", "0", "--to", "1",
                 "--step", "0.5", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert rows[0] == ["t", "x_hbm", "x_weak"]
    assert abs(float(rows[1][1]) - 1.0) < 1e-12
    assert rows[1][2] == "1"


def test_unwritable_output_exits_4(tmp_path):
    out = tmp_path / "missing" / "weak.csv"
    assert main(["emit", "weaksol", "--from", "0", "--to", "1", "--step", "1", "--out", str(out)]) == 4
