import json
import subprocess
import sys

import pytest

from properad.cli import main, parse_range, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_connperm(capsys):
    code, out, _ = run(capsys, "connperm", "3", "1,1,1")
    assert code == 0 and json.loads(out)["count"] == 6


def test_connperm_list_text_form(capsys):
    code, out, _ = run(capsys, "connperm", "2,2", "2,2", "--list")
    assert "(1 3 2 4)" in json.loads(out)["permutations"]


def test_connperm_double_dash_via_entry_point():
    res = subprocess.run([sys.executable, "-m", "properad", "connperm", "3", "--", "1,1,1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["count"] == 6


def test_dims_table(capsys):
    code, out, _ = run(capsys, "dims", "bilie", "--range", "m+n<=4")
    rows = json.loads(out)["rows"]
    assert {"d": 1, "m": 1, "n": 2, "dim": 1} in rows and code == 0


def test_csv_output(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = run(capsys, "dims", "lie", "--range", "d<=2,m+n<=3", "--format", "csv",
                       "--out", str(target))
    text = target.read_text()
    assert code == 0 and out == "" and text.startswith("d,m,n,dim")


def test_koszul_check(capsys):
    code, out, err = run(capsys, "koszul-check", "bilie", "--range", "d<=2,m+n<=4")
    rows = json.loads(out)["rows"]
    assert code == 0 and rows and all(r["status"] == "PASS" for r in rows)


def test_euler_and_bar(capsys):
    assert run(capsys, "euler", "as", "--range", "d<=3,m+n<=4")[0] == 0
    code, out, _ = run(capsys, "bar", "lie", "--rho", "2", "--m", "1", "--n", "3", "--dump-matrices")
    js = json.loads(out)
    assert code == 0 and js["d_squared_zero"] and "differentials" in js


def test_series_check_exit_codes(capsys):
    assert run(capsys, "series-check", "dualnumbers", "--order", "6")[0] == 0
    assert run(capsys, "series-check", "epsbi", "--bounds", "m+n<=4,d<=2")[0] == 0
    assert run(capsys, "series-check", "bilie", "--bounds", "m+n<=4,d<=2")[0] == 1


def test_assoc_and_compose(capsys):
    code, out, _ = run(capsys, "assoc", "--order", "5")
    assert code == 0 and json.loads(out)["P"]["2"] == [5, 5, 1]
    code, out, _ = run(capsys, "compose-dims", "lie", "lie^op", "--range", "d<=2,m+n<=4",
                       "--compare", "bilie")
    assert code == 0


def test_dual_command(capsys):
    code, out, _ = run(capsys, "dual", "lie", "--range", "d<=2,m+n<=4")
    js = json.loads(out)
    assert code == 0 and js["dual"]["generators"]


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--criteria", "1,10")
    assert code == 0 and json.loads(out)["criteria"]["10"]["ok"]


def test_errors(capsys):
    assert run(capsys, "dims", "nope")[0] == 2
    assert run(capsys, "dims", "lie", "--range", "m+n<=11")[0] == 2
    assert run(capsys, "dims", "lie", "--range", "d<=7")[0] == 2
    assert run(capsys, "connperm", "2", "1")[0] == 2
    assert run(capsys, "euler", "as", "--format", "csv", "--range", "x<=2")[0] == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])


def test_parse_range():
    b = parse_range("d<=2,m<=2,n<=3")
    assert b["m+n"] == 5 and b["d"] == 2
    with pytest.raises(UsageError):
        parse_range("m+n<=1")


def test_deterministic_output(capsys):
    a = run(capsys, "dims", "epsbi", "--range", "d<=2,m+n<=4")[1]
    b = run(capsys, "dims", "epsbi", "--range", "d<=2,m+n<=4")[1]
    assert a == b
