import json
import subprocess
import sys

import pytest

from qrank.cli import EXIT_OK, EXIT_REFUTED, EXIT_RESOURCE, EXIT_USAGE, expand_target, main
from qrank.partitions import d_closed_form
from qrank.qseries import load_series


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    rows = [json.loads(l) for l in out.splitlines() if l.startswith("{")]
    return code, rows, out


def test_verify_one_row(capsys):
    code, rows, out = run(capsys, "verify", "--id", "N5(1,0)")
    assert code == EXIT_OK
    assert rows[0]["status"] == "verified" and rows[0]["bound"] == "9/2"
    assert "total 1: 1 verified" in out


def test_verify_unknown_id(capsys):
    assert main(["verify", "--id", "nope"]) == EXIT_USAGE


def test_verify_resource_guard(capsys):
    code, rows, _ = run(capsys, "verify", "--id", "N7(1,0)", "--max-n", "20")
    assert code == EXIT_RESOURCE and rows[0]["status"] == "skipped"


def test_verify_bad_db(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("[]")
    assert main(["verify", "--db", str(bad)]) == EXIT_USAGE


def test_verify_db_from_env(tmp_path, monkeypatch, capsys):
    db = tmp_path / "db.json"
    db.write_text(json.dumps({"format": 1, "identities": [
        {"id": "M5(1,4)", "kind": "M", "p": 5, "s": 1, "k": 4, "poly": {"-1": "4"}},
        {"id": "M5(2,4)", "kind": "M", "p": 5, "s": 2, "k": 4, "poly": {"-1": "-3"}}]}))
    monkeypatch.setenv("QRANK_DB", str(db))
    code, rows, _ = run(capsys, "verify", "--jobs", "2")
    assert code == EXIT_REFUTED
    assert [r["status"] for r in rows] == ["verified", "refuted"]


def test_ex1_printed_and_corrected(capsys):
    code, rows, _ = run(capsys, "verify", "--id", "ex1")
    assert code == EXIT_REFUTED and rows[0]["first_mismatch"] == "7"
    code, rows, _ = run(capsys, "verify", "--id", "ex1", "--errata")
    assert code == EXIT_OK


@pytest.mark.parametrize("preset", ["mod5-weighted", "ex1-mod7", "ex2", "ex3"])
def test_scan_presets(capsys, preset):
    code, rows, _ = run(capsys, "scan", "--preset", preset, "--n-max", "8")
    assert code == EXIT_OK and all(r["status"] == "verified" for r in rows)


def test_scan_false_combination(capsys):
    code, rows, _ = run(capsys, "scan", "--p", "5", "--k", "1", "--weights", "1:1,2:0,3:0,4:0", "--modulus", "5")
    assert code == EXIT_REFUTED
    assert rows[0]["detail"].startswith("witness n=")


def test_scan_usage(capsys):
    assert main(["scan", "--p", "5"]) == EXIT_USAGE
    assert main(["scan", "--p", "5", "--k", "1", "--weights", "a:b"]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE


def test_expand_targets(capsys):
    code, _, out = run(capsys, "expand", "--target", "D(1,5)", "--order", "20")
    assert code == EXIT_OK
    s = load_series(out.split("\n", 1)[1])
    assert s.first_difference(d_closed_form(1, 5, 20), 20) is None
    assert expand_target("t@5", 5).valuation() == 1
    assert expand_target("L_5(0)", 3).coeff(0) == -__import__("fractions").Fraction(5, 12)
    for t in ["Dc(2,7)", "D(1,5,4)", "Dclosed(3,7)", "P@5,0", "F_5(1)", "Fc_5(2)", "N_5(1,0)", "M_7(2,3)",
              "g(5,25)"]:
        expand_target(t, 4)
    assert main(["expand", "--target", "nonsense"]) == EXIT_USAGE


def test_selftest(capsys):
    code, rows, _ = run(capsys, "selftest")
    assert code == EXIT_OK and rows


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "qrank.cli", "expand", "--target", "t@7", "--order", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.splitlines()[1] == "1\t1"
