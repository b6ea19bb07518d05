import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hardysharp import __version__
from hardysharp.catalog import case_ids, get_case
from hardysharp.cli import emit_report, main
from hardysharp.funcspace import format_func, parse_func
from hardysharp.lorentz import format_step, parse_step
from hardysharp.report import REPORT_FIELDS, VerificationReport


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_verify_r1_equality_case():
    code, out, _ = run("verify", "--case", "R1", "--p", "2", "--alpha", "1", "--ell", "1", "--f", "ind:0,0.5,1")
    assert code == 0
    [row] = json.loads(out)
    assert list(row) == list(REPORT_FIELDS) + ["version", "seed"]
    assert row["ratio"] == pytest.approx(1.0, abs=1e-8)
    assert row["pass"] is True and row["version"] == __version__


def test_constants_dual_pi():
    code, out, _ = run("constants", "--id", "dual_pi", "--p", "0.5")
    assert code == 0 and out.strip().startswith("1.5707963")
    code, out, _ = run("constants", "--id", "dual_pi", "--p", "0.5", "--format", "json")
    assert json.loads(out)["value"] == pytest.approx(math.pi / 2, rel=1e-15)


def test_unused_parameter_is_a_regime_error():
    code, out, err = run("verify", "--case", "C2", "--p", "2", "--alpha", "5", "--ell", "1", "--f", "pow:1,1")
    assert code == 2 and out == ""
    assert "RegimeError" in err and "alpha" in err


@pytest.mark.parametrize("argv", [
    ("verify", "--case", "ZZ", "--p", "2", "--f", "pow:1,1"),
    ("verify", "--case", "R1", "--p", "2", "--alpha", "3", "--ell", "1", "--f", "ind:0,0.5,1"),
    ("verify", "--case", "R1", "--p", "2", "--alpha", "1", "--ell", "1", "--f", "pow:1,1"),
    ("verify", "--case", "R1", "--p", "2", "--alpha", "1", "--f", "bogus:1"),
    ("verify", "--case", "R1", "--alpha", "1", "--f", "ind:0,0.5,1"),
    ("verify", "--case", "L1", "--p", "2", "--ell", "inf", "--f", "ind:0,0.5,1"),
    ("equality", "--case", "E1", "--p", "2", "--alpha", "1"),
    ("verify", "--case", "R1", "--p", "two"),
    ("frobnicate",),
])
def test_exit_code_two(argv):
    code, _, _ = run(*argv)
    assert code == 2


def test_exit_code_one_on_failed_check():
    code, out, _ = run("verify", "--case", "B1", "--p", "1", "--alpha", "1", "--ell", "1",
                       "--f", "ind:0,1,1", "--log-weight", "as-printed")
    assert code == 1
    assert json.loads(out)[0]["pass"] is False


def test_exit_code_three_on_divergence():
    code, _, err = run("verify", "--case", "E1", "--p", "2", "--alpha", "1", "--ell", "inf", "--f", "pow:1,0")
    assert code == 3 and "DivergenceError" in err


def test_exit_code_three_on_unwritable_output(tmp_path):
    target = tmp_path / "missing" / "out.json"
    code, _, err = run("verify", "--case", "R1", "--p", "2", "--alpha", "1", "--ell", "1",
                       "--f", "ind:0,0.5,1", "--out", str(target))
    assert code == 3 and "I/O" in err


def test_scan_csv_has_header_plus_rows():
    code, out, _ = run("scan", "--case", "C2", "--grid", "p=2;alpha=0.5,1,2", "--ell", "1",
                       "--f", "pow:1,{alpha}", "--format", "csv")
    assert code == 0
    lines = out.strip().split("\n")
    assert len(lines) == 4
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [float(r["ratio"]) for r in rows] == pytest.approx([8 / 9, 3 / 4, 5 / 9], rel=1e-9)
    assert json.loads(rows[0]["params"])["p"] == 2.0


def test_output_is_deterministic(tmp_path):
    argv = ("scan", "--case", "R1", "--grid", "p=0.5,2;alpha=0.25", "--ell", "1", "--f", "ind:0,0.5,1",
            "--seed", "7", "--workers", "2")
    first, second = run(*argv), run(*argv)
    assert first == second
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(*argv, "--out", str(a))
    run(*argv, "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())[0]["seed"] == 7


def test_list_enumerates_ids_with_labels():
    code, out, _ = run("list")
    assert code == 0
    rows = [line.split("\t") for line in out.strip().split("\n")]
    assert [r[0] for r in rows] == case_ids()
    assert all(r[1] == get_case(r[0]).paper_eq for r in rows)
    code, out, _ = run("list", "--format", "json")
    assert [r["id"] for r in json.loads(out)] == case_ids()


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"case": "R1", "p": 2, "alpha": 1, "ell": 1, "f": "ind:0,0.5,1", "format": "csv"}))
    code, out, _ = run("verify", "--config", str(cfg))
    assert code == 0 and out.startswith("case_id,")
    code, out, _ = run("verify", "--config", str(cfg), "--format", "json")
    assert code == 0 and json.loads(out)[0]["case_id"] == "R1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run("verify", "--config", str(bad))[0] == 2


def test_sampled_function_relative_to_config(tmp_path):
    (tmp_path / "f.csv").write_text("0.25,2\n0.5,1\n1.0,0.5\n")
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"case": "R1", "p": 2, "alpha": 1, "ell": 1, "f": "sampled:@f.csv"}))
    code, out, _ = run("verify", "--config", str(cfg))
    assert code == 0 and json.loads(out)[0]["function"].startswith("sampled:@")


@pytest.mark.parametrize("argv", [
    ("verify", "--case", "R1", "--p", "2", "--alpha", "1", "--ell", "1", "--f", "sum:[ind:0,0.5,1;ind:0,0.25,2]"),
    ("verify", "--case", "C2", "--p", "2", "--ell", "1", "--f", "pow:1,1"),
    ("verify", "--case", "B1", "--p", "2", "--alpha", "1", "--ell", "2", "--f", "logpow:1,0,1,el"),
    ("lorentz", "--which", "eq43", "--p", "2", "--q", "2", "--f", "step:[1:1;0.5:3;inf:0]"),
])
def test_function_field_round_trips(argv):
    code, out, _ = run(*argv)
    assert code == 0
    text = json.loads(out)[0]["function"]
    if text.startswith("step:"):
        assert format_step(parse_step(text)) == text
    else:
        assert format_func(parse_func(text, ell=2.0)) == text


def test_lorentz_and_equiv_commands():
    code, out, _ = run("lorentz", "--which", "eq45", "--p", "0.5", "--q", "1", "--f", "step:[1:1]")
    row = json.loads(out)[0]
    assert code == 0 and row["direction"] == "EQ" and row["lhs"] == pytest.approx(0.5)
    code, out, _ = run("equiv", "--which", "obs21", "--p", "2", "--f", "ind:0.25,1,1")
    assert code == 0 and [r["case_id"] for r in json.loads(out)] == ["obs21:lhs", "obs21:rhs"]


def test_probe_and_equality_commands():
    code, out, _ = run("probe", "--case", "DP", "--p", "0.5")
    assert code == 0 and json.loads(out)["sup_ratio"] == pytest.approx(1.0, abs=1e-8)
    code, out, _ = run("equality", "--case", "R3inf", "--p", "2", "--alpha", "1", "--c", "1")
    assert code == 0 and json.loads(out)[0]["lhs"] == pytest.approx(1 / 3)


def test_emit_report_formats():
    rep = VerificationReport("X", {"p": 2.0}, lhs=math.inf, passed=True)
    doc = json.loads(emit_report([rep]))
    assert len(doc) == 1 and doc[0]["pass"] is True and doc[0]["lhs"] == "inf"
    assert emit_report([rep], "csv").decode().count("\n") == 2
    with pytest.raises(Exception):
        emit_report([])


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hardysharp", "constants", "--id", "hardy_classic", "--p", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "4.0"
