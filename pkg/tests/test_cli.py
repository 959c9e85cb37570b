import csv
import io
import json
import subprocess
import sys

import pytest

from equikh.cli import CSV_COLUMNS, EXIT_FAIL, EXIT_INPUT, EXIT_OK, ResultRecord, main
from equikh.corpus import TREFOIL_PD


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_trefoil_at_one_half(capsys):
    code, out, _ = run(capsys, "compute", "--pd", TREFOIL_PD, "--t", "1/2")
    assert code == EXIT_OK
    rec = json.loads(out)
    assert rec["values"] == [{"t": "1/2", "s_t": "2", "s_tilde_t": None, "stable": None}]
    assert rec["s_F"] == 2 and rec["localized_ranks"] == {"0": 2}


def test_unknot_sweep_csv(capsys):
    code, out, _ = run(capsys, "compute", "--unknot", "--sweep", "4", "--output", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == list(CSV_COLUMNS)
    assert len(rows) == 10 and all(len(r) == len(CSV_COLUMNS) for r in rows)
    assert {r[1] for r in rows[1:]} == {"0"}
    assert rows[1][3] == "true" and rows[-1][3] == "true"


@pytest.mark.parametrize("argv", [
    ["compute", "--pd", "PD[X[1,2,3]]"],
    ["compute", "--pd", "not a code"],
    ["compute", "--unknot", "--t", "3"],
    ["compute", "--unknot", "--field", "fp:4"],
    ["compute", "--unknot", "--sweep", "0"],
    ["compute", "--corpus", "trefoil", "--mode", "cube", "--max-crossings", "2"],
    ["compute", "--file", "/nonexistent/diagram.txt"],
    ["compute"],
    ["compute", "--corpus", "nope"],
    ["compute", "--corpus", "trefoil", "--basepoint", "99"],
    ["frobnicate"],
])
def test_input_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == EXIT_INPUT


def test_json_round_trip_and_determinism(capsys):
    argv = ["compute", "--corpus", "trefoil", "--reduced", "--sweep", "2", "--verify"]
    code, a, _ = run(capsys, *argv)
    assert code == EXIT_OK
    _, b, _ = run(capsys, *argv)
    assert a == b
    rec = ResultRecord.from_json(a)
    assert rec.to_json() + "\n" == a
    assert all(c["ok"] for c in rec.verification)
    assert [r["s_tilde_t"] for r in rec.values] == ["2"] * 5
    assert rec.flags["symmetric"] and rec.flags["reduced_bound"] and rec.flags["stable"]
    with pytest.raises(ValueError):
        ResultRecord.from_json(json.dumps({**json.loads(a), "extra": 1}))


def test_timing_is_opt_in(capsys):
    _, out, _ = run(capsys, "compute", "--unknot", "--t", "1")
    assert "timing" not in json.loads(out)
    _, out, _ = run(capsys, "compute", "--unknot", "--t", "1", "--timing")
    assert "total" in json.loads(out)["timing"]


def test_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"field": "q", "sweep": 2, "output": "csv"}))
    code, out, _ = run(capsys, "compute", "--corpus", "trefoil", "--config", str(cfg))
    assert code == EXIT_OK and out.startswith("t,s_t")
    code, out, _ = run(capsys, "compute", "--corpus", "trefoil", "--config", str(cfg),
                       "--output", "json")
    rec = json.loads(out)
    assert rec["config"]["field"] == "q" and len(rec["values"]) == 5
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "blue"}))
    assert run(capsys, "compute", "--unknot", "--config", str(bad))[0] == EXIT_INPUT


def test_file_input(capsys, tmp_path):
    f = tmp_path / "k.pd"
    f.write_text(TREFOIL_PD + "\n")
    code, out, _ = run(capsys, "compute", "--file", str(f), "--t", "1", "--mode", "cube")
    assert code == EXIT_OK and json.loads(out)["values"][0]["s_t"] == "2"


def test_verify_reports(capsys):
    code, out, _ = run(capsys, "verify", "--pd", "PD[X[1,4,2,3]]")
    assert code == EXIT_OK and "FAIL" not in out
    code, out, _ = run(capsys, "verify", "--corpus", "hopf")
    assert code == EXIT_OK and "total 4" in out
    code, out, _ = run(capsys, "verify", "--corpus", "trefoil")
    assert code == EXIT_OK and "PASS  mirror duality over q" in out


def test_verify_failure_exit_code(capsys, monkeypatch):
    from equikh import cli
    from equikh.checks import Check
    monkeypatch.setattr(cli, "diagram_checks", lambda *a, **k: [Check("forced", False)])
    code, out, _ = run(capsys, "verify", "--unknot")
    assert code == EXIT_FAIL and "FAIL  forced" in out
    code, _, err = run(capsys, "compute", "--unknot", "--t", "1", "--verify", "--output", "csv")
    assert code == EXIT_FAIL and "FAIL  forced" in err


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--sweep", "2")
    assert code == EXIT_OK
    assert "PASS  T(3,-4): s_t = -6" in out
    assert "PASS  trefoil+unknot: s_t = 3" in out


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "equikh", "compute", "--unknot", "--t", "1/2"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and json.loads(r.stdout)["values"][0]["s_t"] == "0"
