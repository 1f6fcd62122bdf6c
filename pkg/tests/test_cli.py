import csv
import io
import json
import subprocess
import sys

import pytest

from conftest import brute_power
from monodepth.cli import run
from monodepth.core import MonomialIdeal, power
from monodepth.family import build_family


@pytest.fixture
def fam1(tmp_path):
    p = tmp_path / "fam1.ideal"
    p.write_text(build_family(1).ideal.to_text())
    return str(p)


@pytest.fixture
def xy(tmp_path):
    p = tmp_path / "xy.ideal"
    p.write_text("ring: x y\nx^2\nx*y\n")
    return str(p)


def test_verify_theorem_n1(capsys, tmp_path):
    out = tmp_path / "r.json"
    assert run(["verify-theorem", "--n", "1", "--kmax", "5", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["depth_sequence"] == [0, 1, 0, 2, 2]
    assert data["strict_local_maxima"] == 1 and data["passed"]
    assert "PASS" in capsys.readouterr().out


def test_verify_csv_columns(capsys):
    assert run(["verify-theorem", "--n", "0", "--kmax", "3", "--engine", "exact", "--format", "csv"]) == 0
    rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
    assert rows[0] == ["k", "expected", "computed_lower", "computed_upper", "engine"]
    assert rows[1:] == [["1", "0", "0", "0", "exact"], ["2", "2", "2", "2", "exact"],
                        ["3", "2", "2", "2", "exact"]]


def test_unit_ideal_is_usage_error(tmp_path):
    p = tmp_path / "unit.ideal"
    p.write_text("ring: x y\n1\n")
    assert run(["depth", "--ideal", str(p)]) == 2
    assert run(["ass", "--ideal", str(p)]) == 2


def test_usage_errors(tmp_path, xy):
    assert run(["depth", "--ideal", xy, "--bogus"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["depth", "--ideal", str(tmp_path / "missing.ideal")]) == 2
    assert run(["power", "--ideal", xy, "--k", "0"]) == 2
    assert run(["colon", "--ideal", xy]) == 2
    assert run(["colon", "--ideal", xy, "--by", "q"]) == 2
    assert run(["stability", "--ideal", xy, "--kmax", "0"]) == 2


def test_power_json_matches_oracle(capsys, fam1):
    assert run(["power", "--ideal", fam1, "--k", "2", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    I = build_family(1).ideal
    got = MonomialIdeal.from_json(json.dumps(data["ideal"]))
    assert {g.exps for g in got.gens} == brute_power([g.exps for g in I.gens], 2)
    assert data["count"] == 24


def test_power_text_round_trip(capsys, fam1, tmp_path):
    assert run(["power", "--ideal", fam1, "--k", "3"]) == 0
    text = capsys.readouterr().out
    assert MonomialIdeal.from_text(text) == power(build_family(1).ideal, 3)
    p = tmp_path / "p.ideal"
    p.write_text(text)
    assert run(["power", "--ideal", str(p), "--k", "1"]) == 0
    assert capsys.readouterr().out == text


def test_reports_are_byte_identical(tmp_path, fam1):
    outs = []
    for i in range(2):
        out = tmp_path / f"s{i}.json"
        assert run(["stability", "--ideal", fam1, "--kmax", "3", "--out", str(out), "--format", "json"]) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_depth_and_ass(capsys, xy):
    assert run(["depth", "--ideal", xy, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert (data["lower"], data["upper"]) == (0, 0)
    assert run(["ass", "--ideal", xy, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ass"] == [["x"], ["x", "y"]]


def test_colon(capsys, xy, tmp_path):
    assert run(["colon", "--ideal", xy, "--by", "x"]) == 0
    assert capsys.readouterr().out == "ring: x y\nx\ny\n"
    m = tmp_path / "m.ideal"
    m.write_text("ring: x y\nx\ny\n")
    assert run(["colon", "--ideal", xy, "--by-ideal", str(m), "--format", "csv"]) == 0
    assert capsys.readouterr().out == "x,y\n1,0\n"


def test_json_ideal_input(capsys, tmp_path):
    p = tmp_path / "i.json"
    p.write_text(json.dumps(build_family(0).ideal.to_json()))
    assert run(["conjecture-scan", "--ideal", str(p), "--kmax", "4", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["depth_quotient"] == [0, 2, 2, 2] and data["consistent"] is True


def test_cap_abort_exit_code(fam1):
    assert run(["verify-theorem", "--n", "1", "--kmax", "2", "--engine", "exact", "--cap", "10"]) == 3
    assert run(["ass", "--ideal", fam1, "--budget", "8"]) == 3


def test_fuzz_command(capsys):
    assert run(["fuzz", "--count", "10", "--seed", "3", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["failures"] == [] and data["seed"] == 3


def test_module_entry_point(tmp_path, xy):
    proc = subprocess.run([sys.executable, "-m", "monodepth", "depth", "--ideal", xy],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "depth(S/I) in [0, 0]" in proc.stdout
