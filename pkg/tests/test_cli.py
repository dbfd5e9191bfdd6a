import json
import subprocess
import sys

import pytest

from hyperamsey.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_density(capsys):
    code, out = run(capsys, "density", "K3+4", "--kind", "asym", "--other", "C8^4")
    assert code == 0 and out["value"] == "21/11"
    code, out = run(capsys, "density", "C8^4")
    assert out["value"] == "7/4" and out["strictly_balanced"] is True


def test_arrow_and_colour(capsys, tmp_path):
    code, out = run(capsys, "arrow", "K5", "--targets", "K3,K3")
    assert code == 0 and out["arrows"] is False
    col = tmp_path / "c.json"
    col.write_text(json.dumps(out["witness"]))
    code, out = run(capsys, "count-mono", "5", str(col), "--targets", "K3,K3")
    assert out["counts"] == [0, 0]
    code, out = run(capsys, "colour", "C8^4", "--targets", "K3+4,C8^4", "--sparse")
    assert out["ok"] and out["valid"]


def test_classify_and_strip(capsys):
    code, out = run(capsys, "classify", "C8^4", "--targets", "K3+4,C8^4")
    assert len(out["open"]) == 8 and out["closed"] == []
    code, out = run(capsys, "strip", "C8^4", "--targets", "K3+4,C8^4")
    assert out["remaining"] == [] and out["cores"] == []


def test_sample_round_trip(capsys, tmp_path):
    code, out = run(capsys, "--out", str(tmp_path / "h.json"), "sample", "--k", "3", "--n", "7",
                    "--p", "0.3", "--seed", "12345", "--trial", "2")
    data = json.loads((tmp_path / "h.json").read_text())
    assert data["k"] == 3 and data["vertices"] == 7 and len(data["edges"]) == 20
    code, out = run(capsys, "density", str(tmp_path / "h.json"), "--kind", "m")
    assert code == 0


def test_family(capsys):
    code, out = run(capsys, "family", "--max-vertices", "16", "--max-states", "30",
                    "--check-balanced")
    assert out["truncated"] is True and out["balance"]["balanced"] is True


def test_lemma(capsys):
    code, out = run(capsys, "lemma", "--name", "max-intersecting", "--params",
                    '{"graph": "T8^4", "m": 2}')
    assert out["max"] == 3
    code, out = run(capsys, "lemma", "--name", "path-cover", "--params", '{"count": 10}')
    assert out["successes"] == out["revalidated"] == 10


def test_growseq_needs_input(capsys):
    with pytest.raises(SystemExit):
        main(["growseq"])


def test_census(capsys):
    code, out = run(capsys, "census", "--k", "2", "--n", "6", "--p", "0.5", "--f1", "K3",
                    "--trials", "50")
    assert out["pairs_in_complete"] == 90 and "header" in out


def test_scan(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"k": 2, "n_list": [6], "targets": ["K3", "K3"],
                               "p_values": [0.0, 1.0], "trials": 3}))
    code, out = run(capsys, "scan", "--config", str(cfg), "--csv", str(tmp_path / "s.csv"))
    assert [r["arrow_successes"] for r in out["rows"]] == [0, 3]
    assert (tmp_path / "s.csv").exists()


def test_suite_exit_status(capsys, tmp_path):
    suite = tmp_path / "suite.json"
    suite.write_text(json.dumps({"checks": [
        {"name": "wrong", "kind": "density", "params": {"graph": "K3+4", "expected": "3"}}]}))
    code, out = run(capsys, "suite", str(suite), "--out-dir", str(tmp_path / "res"))
    assert code == 1 and out["status"] == 1


def test_bad_name_exit_code(capsys):
    assert main(["density", "Z9"]) == 2


def test_console_script_installed():
    res = subprocess.run([sys.executable, "-m", "hyperamsey.cli", "density", "K3+4"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["value"] == "2/1"  # always rendered as p/q
