import json
import subprocess
import sys
from fractions import Fraction

import pytest

from normset.cli import main
from normset.core import evaluate, parse_tree, validate
from normset.core.textio import parse_vector

SIGMA_LINE = " ".join(f"{i}:1" for i in range(3, 16))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(out):
    lines = [json.loads(l) for l in out.splitlines()]
    assert "config" in lines[0]
    return lines[0]["config"], lines[1:]


@pytest.fixture
def vecfile(tmp_path):
    p = tmp_path / "v.txt"
    p.write_text(f"# sample\n{SIGMA_LINE}\n1:1 2:-1/2\n\n")
    return p


def test_norm_three_halves_round_trip(vecfile, capsys):
    code, out, _ = run(["norm", str(vecfile)], capsys)
    assert code == 0
    cfg, recs = jsonl(out)
    assert cfg["command"] == "norm"
    assert Fraction(recs[0]["value"]) >= Fraction(3, 2)
    for r in recs:
        x = parse_vector(r["x"])
        tree = parse_tree(r["witness"])
        assert validate(tree).ok
        assert evaluate(tree, x) == Fraction(r["value"])


def test_witness_with_class(vecfile, capsys):
    code, out, _ = run(["witness", str(vecfile), "--cls", "sch:2:3"], capsys)
    assert code == 0
    _, recs = jsonl(out)
    assert all(r["certified"] and r["validate"] == "PASS" for r in recs)


def test_malformed_line_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text("1:1\n2:x\n")
    code, _, err = run(["norm", str(p)], capsys)
    assert code == 2 and "line 2" in err


def test_resource_guard_exit_3(vecfile, capsys):
    code, _, err = run(["norm", str(vecfile), "--node-budget", "10"], capsys)
    assert code == 3 and "resource" in err


def test_exhausted_exit_1_with_report(capsys):
    code, out, _ = run(["sandwich", "--rows", "flatblocks,flatblocks", "--caps", "1", "--no-raise"], capsys)
    assert code == 1
    _, recs = jsonl(out)
    assert recs[0]["error"] == "EXHAUSTED" and recs[0]["ok"] is False


def test_symmetry_example(capsys):
    code, out, _ = run(["symmetry", "--rows", "basis,flatblocks", "--perm", "2,1"], capsys)
    assert code == 0
    _, recs = jsonl(out)
    assert Fraction(1, 4) <= Fraction(recs[0]["ratio"]) <= 4 and recs[0]["ok"]
    code, _, _ = run(["symmetry", "--rows", "basis,flatblocks", "--perm", "1,1"], capsys)
    assert code == 2


@pytest.mark.parametrize("argv", [
    ["alpha", "--seq", "flatblocks", "--s-min", "1,2", "--max-len", "1,inf"],
    ["lemma", "--length", "5", "--max-size", "5", "--max-depth", "2"],
    ["block", "--length", "7", "--mode", "average"],
    ["spreading", "--coeffs", "1,1,1,1", "--spacing", "2"],
    ["sandwich", "--rows", "basis,mix:1/2", "--anchor", "1:1"],
    ["asmodel", "--rows", "basis,basis"],
    ["oracle-check", "--max-support", "3"],
])
def test_commands_succeed(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert out.startswith('{"config":')


def test_alpha_csv(capsys):
    code, out, _ = run(["alpha", "--seq", "basis", "--length", "40", "--s-min", "2,4,8,16", "--max-len", "3",
                        "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "s_min,maxLen,tailStart,value_num,value_den"
    assert lines[-1].startswith("# trend=VANISHING")


def test_config_file_and_cli_override(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('command = "spreading"\n[params]\ncoeffs = "1,1"\nspacing = 3\n')
    code, out, _ = run(["spreading", "--config", str(cfg), "--spacing", "2"], capsys)
    assert code == 0
    header, recs = jsonl(out)
    assert header["params"]["coeffs"] == "1,1" and header["params"]["spacing"] == 2
    assert recs[0]["indices"] == [1, 3]
    cfg.write_text('command = "spreading"\n[params]\nwobble = 1\n')
    assert run(["spreading", "--config", str(cfg)], capsys)[0] == 2
    assert run(["norm", "--config", str(cfg)], capsys)[0] == 2


def test_space_flag(tmp_path, capsys):
    sp = tmp_path / "space.toml"
    sp.write_text('theta = 1\n')
    vf = tmp_path / "v.txt"
    vf.write_text(SIGMA_LINE + "\n")
    code, out, _ = run(["norm", str(vf), "--space", str(sp)], capsys)
    assert code == 0
    header, recs = jsonl(out)
    assert header["space"]["theta"] == "1/1"
    assert Fraction(recs[0]["value"]) > Fraction(3, 2)


def test_out_file_and_thread_independence(tmp_path, vecfile, capsys):
    outs = []
    for threads in ("1", "2"):
        o = tmp_path / f"o{threads}.jsonl"
        assert run(["oracle-check", "--max-support", "4", "--threads", threads, "--out", str(o)], capsys)[0] == 0
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
    big = tmp_path / "many.txt"
    big.write_text("".join(f"{i}:1 {i + 1}:1/2\n" for i in range(1, 40, 2)))
    texts = []
    for threads in ("1", "3"):
        o = tmp_path / f"n{threads}.csv"
        assert run(["norm", str(big), "--threads", threads, "--out", str(o), "--format", "csv"], capsys)[0] == 0
        texts.append(o.read_bytes())
    assert texts[0] == texts[1]
    assert b"threads" not in texts[0]


def test_console_script_runs():
    r = subprocess.run([sys.executable, "-m", "normset.cli", "spreading", "--coeffs", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr


@pytest.mark.slow
def test_oracle_check_seven(capsys):
    code, out, _ = run(["oracle-check", "--max-support", "7", "--threads", "4"], capsys)
    assert code == 0
    _, recs = jsonl(out)
    assert all(r.get("mismatches", 0) == 0 for r in recs)
