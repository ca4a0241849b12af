import csv
import io
import json

import pytest
from click.testing import CliRunner

from blochsiegert.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def _run(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)

    return _run


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_shift_extrap(run):
    r = run("--format", "csv", "shift", "--omega0", "1", "--amplitude", "8.5", "--method", "extrap",
            "--order", "8")
    assert r.exit_code == 0
    assert csv_rows(r.stdout)[0]["shift"] == "2.639640"


def test_shift_zero_amplitude(run):
    r = run("shift", "--omega0", "1", "--amplitude", "0", "--method", "extrap", "--order", "6",
            "--format", "csv")
    assert csv_rows(r.stdout)[0]["shift"] == "0.000000"


def test_shift_homogeneity(run):
    r = run("shift", "--omega0", "2", "--amplitude", "17", "--method", "extrap", "--order", "8",
            "--format", "csv")
    assert csv_rows(r.stdout)[0]["shift"] == "5.279280"


def test_shift_json_schema(run):
    r = run("shift", "--omega0", "1", "--amplitude", "1", "--method", "floquet,pt8,rwa,asymptotic",
            "--format", "json")
    assert r.exit_code == 0
    doc = json.loads(r.stdout)
    assert set(doc) == {"rows", "config", "version"}
    methods = [row["method"] for row in doc["rows"]]
    assert methods == ["FLOQUET", "PT8", "RWA", "ASYMPTOTIC"]
    floquet = doc["rows"][0]
    assert set(floquet) == {"method", "omega0", "amplitude", "shift", "resonance", "diagnostics"}
    assert set(floquet["diagnostics"]) >= {"n_photon_final", "peak_prob", "bracket", "evals"}
    assert floquet["shift"] == pytest.approx(0.063224, abs=1e-4)


@pytest.mark.parametrize("args", [
    ("shift", "--omega0", "0", "--amplitude", "1"),
    ("shift", "--omega0", "1", "--amplitude", "-1"),
    ("shift", "--omega0", "1", "--amplitude", "1", "--method", "pade"),
    ("shift", "--omega0", "1", "--amplitude", "1", "--method", "extrap10"),
    ("shift", "--omega0", "1", "--amplitude", "1", "--order", "5"),
    ("table", "--ratios", "0"),
    ("table", "--ratios", "1,abc"),
    ("coeffs", "--order", "10"),
    ("scan", "--a-min", "3", "--a-max", "1"),
    ("scan", "--a-min", "0", "--a-max", "1", "--points", "1"),
    ("--format", "xml", "coeffs"),
])
def test_usage_errors_exit_2(run, args):
    assert run(*args).exit_code == 2


def test_shift_floquet_failure_exit_3(run):
    r = run("shift", "--omega0", "1", "--amplitude", "6", "--method", "floquet", "--max-n-photon", "1")
    assert r.exit_code == 3
    assert "error" in r.stderr


def test_table_failure_marks_err_and_finishes(run):
    r = run("table", "--ratios", "1,3.5", "--max-n-photon", "1", "--format", "csv")
    assert r.exit_code == 3
    rows = csv_rows(r.stdout)
    assert [row["ratio"] for row in rows] == ["1.0", "3.5"]
    assert all(row["numerical"] == "ERR" for row in rows)
    assert rows[1]["extrap8"] == "0.708068"


def test_table_fast(run):
    r = run("table", "--fast", "--format", "csv")
    assert r.exit_code == 0
    rows = csv_rows(r.stdout)
    assert list(rows[0]) == ["ratio", "extrap6", "extrap8"]
    assert rows[4]["extrap8"] == "3.656504"


def test_table_row_13_5(run):
    r = run("table", "--ratios", "13.5", "--format", "csv")
    row = csv_rows(r.stdout)[0]
    assert (row["extrap6"], row["extrap8"]) == ("4.667893", "4.682141")
    assert float(row["numerical"]) == pytest.approx(4.678502, rel=2e-3)


def test_table_extras(run):
    r = run("table", "--ratios", "21", "--methods", "pt8,asymptotic,rwa", "--format", "csv")
    row = csv_rows(r.stdout)[0]
    assert row["rwa"] == "0.000000"
    assert float(row["asymptotic"]) == pytest.approx(21 / 2.404826, abs=1e-5)


def test_table_json_and_determinism(run):
    a = run("table", "--fast", "--format", "json")
    b = run("table", "--fast", "--format", "json")
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["rows"][0]["extrap8"] == pytest.approx(0.063224, abs=5e-7)
    assert doc["config"]["ratios"][0] == 1.0


def test_global_and_local_format(run):
    a = run("--format", "csv", "table", "--fast")
    b = run("table", "--fast", "--format", "csv")
    assert a.stdout == b.stdout
    assert a.stdout.startswith("ratio,")
    assert "\r" not in a.stdout


def test_parallel_matches_serial(run):
    serial = run("table", "--ratios", "1,6", "--format", "csv")
    parallel = run("--parallel", "2", "table", "--ratios", "1,6", "--format", "csv")
    assert serial.stdout == parallel.stdout


@pytest.mark.parametrize("order, coeffs, divisor", [
    ("6", ["3/8", "33/512", "335/65536"], 2.4094),
    ("2", ["1/8"], 2.8284),
    ("8", ["1/2", "15/128", "245/16384", "943/1048576"], 2.4030),
])
def test_coeffs(run, order, coeffs, divisor):
    text = run("coeffs", "--order", order).stdout
    assert "coefficients: " + ", ".join(coeffs) in text
    printed = float(text.split("asymptotic divisor: ")[1].split()[0])
    assert len(str(printed).replace(".", "")) == 6
    assert printed == pytest.approx(divisor, abs=5e-5)
    doc = json.loads(run("coeffs", "--order", order, "--format", "json").stdout)
    assert doc["rows"][0]["radicand"] == ["1", *coeffs]


def test_coeffs_csv(run):
    rows = csv_rows(run("coeffs", "--order", "4", "--format", "csv").stdout)
    assert [(r["power"], r["coefficient"]) for r in rows] == [("0", "1"), ("2", "1/4"), ("4", "7/256")]


def test_scan_endpoints(run):
    rows = csv_rows(run("scan", "--a-min", "0", "--a-max", "21", "--points", "10", "--methods", "extrap8",
                        "--format", "csv").stdout)
    assert list(rows[0]) == ["amplitude", "method", "shift"]
    assert len(rows) == 10
    assert rows[0]["shift"] == "0.000000"
    assert rows[-1]["shift"] == "7.780169"


def test_scan_two_points(run):
    rows = csv_rows(run("scan", "--a-min", "2", "--a-max", "5", "--points", "2", "--format", "csv").stdout)
    assert [float(r["amplitude"]) for r in rows] == [2.0, 5.0]


def test_scan_extrap8_above_extrap6(run):
    rows = csv_rows(run("scan", "--a-min", "1", "--a-max", "30", "--points", "59", "--methods",
                        "extrap6,extrap8", "--format", "csv").stdout)
    by_amp = {}
    for row in rows:
        by_amp.setdefault(row["amplitude"], {})[row["method"]] = float(row["shift"])
    assert len(by_amp) == 59
    assert all(v["extrap8"] >= v["extrap6"] for v in by_amp.values())


def test_scan_json_roundtrip(run):
    doc = json.loads(run("scan", "--a-min", "0", "--a-max", "3", "--points", "4", "--format", "json").stdout)
    assert [row["amplitude"] for row in doc["rows"]] == [0.0, 1.0, 2.0, 3.0]
    assert doc["rows"][-1]["method"] == "extrap8"
