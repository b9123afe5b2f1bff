import csv
import json
import math

import numpy as np
import pytest

from opburgers.cli import main
from opburgers.specialfn import hermite_value


def test_list_table(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.strip().splitlines() if l.strip()]
    assert len(lines) == 10  # header + 9 entries
    assert any("schwarzschild" in l and "(4.25)" in l for l in lines)


def test_list_json(capsys):
    assert main(["list", "--format", "json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert len(payload) == 9
    assert payload[0]["id"] == "euclid-classic"


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["list", "--no-such-flag"])
    assert err.value.code == 2


def test_describe(capsys):
    assert main(["describe", "euclid-frac"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["equation"] == "(3.12)"
    assert doc["time_op"] == "fractional"


def test_unknown_scenario_exits_2(capsys):
    assert main(["verify", "no-such-id"]) == 2
    assert "unknown scenario" in capsys.readouterr().err


def test_verify_fractional_passes(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "euclid-frac", "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    names = {c["name"] for c in report["checks"]}
    assert "constraint" in names
    assert all(c["pass"] for c in report["checks"])
    assert report["residual"]["order"] > 1.0


def test_verify_perturbed_control_fails(tmp_path):
    out = tmp_path / "report.json"
    assert main(["verify", "euclid-classic", "--perturb", "0.1", "--out", str(out)]) == 1
    report = json.loads(out.read_text())
    failing = [c["name"] for c in report["checks"] if not c["pass"]]
    assert "residual-order" in failing


def test_verify_reports_are_byte_stable(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["verify", "euclid-classic", "--seed", "11", "--out", str(a)]) == 0
    assert main(["verify", "euclid-classic", "--seed", "11", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_csv_format(tmp_path):
    out = tmp_path / "report.csv"
    assert main(["verify", "euclid-frac", "--format", "csv", "--out", str(out)]) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["section", "name", "value", "tol", "pass"]
    assert any(r[0] == "residual" and r[1] == "order" for r in rows)


def test_transform_backward_roundtrip_column(tmp_path):
    out = tmp_path / "bwd.csv"
    assert main(["transform", "euclid-classic", "backward", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    assert all(float(r["roundtrip_dev"]) < 1e-5 for r in rows if r["status"] == "ok")
    # psi column carries the exponential image of the antiderivative
    mid = rows[len(rows) // 2]
    assert float(mid["output"]) > 0.0


def test_transform_forward_matches_ratio(tmp_path):
    out = tmp_path / "fwd.csv"
    assert main(["transform", "hyp-sinh", "forward", "--hermite", "2", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    row = rows[3]
    e, t = float(row["eta"]), float(row["t"])
    f = math.log(math.tanh(0.5 * e))
    expect = (t + 1.0) * 2.0 * hermite_value(1, f, t) / hermite_value(2, f, t)
    assert abs(float(row["output"]) - expect) < 1e-6


def test_transform_forward_excludes_companion_zeros(tmp_path):
    out = tmp_path / "fwd3.csv"
    assert main(["transform", "euclid-classic", "forward", "--hermite", "3", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.read_text().splitlines()))
    statuses = {r["status"] for r in rows}
    assert "excluded" in statuses and "ok" in statuses


def test_special_values(capsys):
    assert main(["special", "ml", "--beta", "1", "--z", "1"]) == 0
    assert abs(float(capsys.readouterr().out) - math.e) < 1e-11
    assert main(["special", "hermite", "--n", "3", "--f", "2", "--h", "1"]) == 0
    assert float(capsys.readouterr().out) == 20.0
    assert main(["special", "kernel", "--eta", "1", "--t", "1"]) == 0
    rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
    assert abs(float(rows[0]["phi"]) - 0.260696797421) < 1e-9


def test_special_ml_domain_error_exits_2(capsys):
    assert main(["special", "ml", "--beta", "2.0", "--z", "1"]) == 2


def test_sweep_reports_order(capsys):
    assert main(["sweep", "euclid-classic", "--levels", "3"]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["h", "max_abs"]
    order_row = [r for r in rows if r[0] == "order"][0]
    assert float(order_row[1]) >= 1.8


def test_sweep_unknown_solution_exits_2(capsys):
    assert main(["sweep", "euclid-classic", "--solution", "nope"]) == 2


def test_verify_dump_points(tmp_path):
    out = tmp_path / "report.json"
    dump = tmp_path / "points.csv"
    code = main(
        ["verify", "euclid-classic", "--levels", "2", "--out", str(out), "--dump-points", str(dump)]
    )
    assert code == 0
    rows = list(csv.DictReader(dump.read_text().splitlines()))
    assert "residual" in rows[0]
