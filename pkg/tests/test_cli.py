import csv
import io
import json
import math
import subprocess
import sys

import pytest

from qinfoloss import selftest
from qinfoloss.cli import main, parse_angle, parse_real


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


@pytest.mark.parametrize(
    "text, value",
    [("pi", math.pi), ("pi/3", math.pi / 3), ("-pi/2", -math.pi / 2), ("2pi/3", 2 * math.pi / 3), ("0.5", 0.5)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


def test_parse_real_fraction():
    assert parse_real("1/3") == 1 / 3


def test_sweep_default_grid(capsys):
    code, out, _ = run(["sweep-1q", "--points", "181", "--format", "csv"], capsys)
    assert code == 0
    table = rows(out)
    assert len(table) == 181
    r = table[60]
    assert (r["theta"], r["S"], r["iR"], r["iL"], r["beta"]) == ("1.047198", "0.562335", "0.569877", "0.430123", "0.250000")


def test_degrees_match_radians(capsys):
    _, deg, _ = run(["bell-sweep", "--degrees", "--theta", "60"], capsys)
    _, rad, _ = run(["bell-sweep", "--theta", "pi/3"], capsys)
    assert deg == rad


def test_werner_alpha(capsys):
    code, out, _ = run(["werner", "--alpha", "0.3333333"], capsys)
    assert code == 0
    (r,) = rows(out)
    assert abs(float(r["dS_bell_werner"]) - 1.242) < 5e-4


def test_teleport(capsys):
    _, out, _ = run(["teleport", "--a", "1", "--b", "0"], capsys)
    assert rows(out)[0]["alice_entropy"] == "1.386294"


def test_bell_ineq_mms(capsys):
    _, out, _ = run(["bell-ineq", "--theta", "pi/3", "--mms"], capsys)
    assert rows(out)[0] == {"theta": "1.047198", "lhs": "0.250000", "rhs": "0.500000", "violated": "false"}


def test_base_two(capsys):
    _, out, _ = run(["ghz", "--m", "3", "--base", "2"], capsys)
    assert rows(out)[0]["S"] == "1.000000"


def test_json_output(capsys):
    _, out, _ = run(["mee", "--format", "json"], capsys)
    (rec,) = json.loads(out)
    assert rec["MEE"] == pytest.approx(math.log(2), abs=1e-9)
    assert rec["MEI"] == pytest.approx(0.5, abs=1e-9)


def test_out_file_truncates(tmp_path, capsys):
    path = tmp_path / "w.csv"
    path.write_text("stale\n" * 100)
    code, out, _ = run(["w", "--m", "3", "--out", str(path)], capsys)
    assert code == 0 and out == ""
    assert path.read_text().startswith("m,S,iR,iL,purity\n3,0.636514,0.529134,0.470866,")
    assert "stale" not in path.read_text()


@pytest.mark.parametrize(
    "argv",
    [[], ["frobnicate"], ["sweep-1q", "--bogus"], ["sweep-1q", "--theta", "tau"], ["werner", "--jobs", "0"], ["ghz", "--alpha", "1"]],
)
def test_usage_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 2 and out == ""
    assert err.count("\n") == 1


@pytest.mark.parametrize("argv", [["werner", "--alpha", "1.5"], ["teleport", "--a", "1", "--b", "1"], ["ghz", "--m", "2"]])
def test_domain_errors(argv, capsys):
    code, out, err = run(argv, capsys)
    assert code == 1 and out == "" and err


def test_selftest_passes(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0
    assert out.endswith(f"all checks passed ({len(selftest.GOLDEN) + len(selftest.PROPERTIES)})\n")
    assert "FAIL" not in out


def test_selftest_fault_injection(monkeypatch, capsys):
    golden = dict(selftest.GOLDEN)
    golden["MMS(1) entropy"] = (0.7, 1e-12)
    monkeypatch.setattr(selftest, "GOLDEN", golden)
    code, out, _ = run(["selftest"], capsys)
    assert code == 1
    assert "FAIL MMS(1) entropy:" in out
    assert out.endswith(f"1 of {len(golden) + len(selftest.PROPERTIES)} checks failed\n")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qinfoloss", "ghz", "--m", "3"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines()[1].startswith("3,0.693147")
