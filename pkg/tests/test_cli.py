import json
import math

import pytest

from meanclass.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_generate_logosc(tmp_path, capsys):
    p = tmp_path / "l.csv"
    assert run(capsys, "generate", "logosc", "--grid", "0:0.01:1001", "--out", str(p))[0] == 0
    rows = p.read_text().splitlines()
    assert rows[0] == "t,re,im" and len(rows) == 1002
    assert float(rows[1].split(",")[1]) == 0


def test_generate_chirp(capsys):
    code, out, _ = run(capsys, "generate", "chirp", "--grid", "0:0.1:11")
    row = out.splitlines()[11].split(",")
    assert float(row[0]) == pytest.approx(1.0)
    assert abs(float(row[1]) - math.cos(1)) <= 1e-12


def test_generate_unknown(capsys):
    code, _, err = run(capsys, "generate", "nope")
    assert code == 2 and "nope" in err


def test_verify_exit_codes(capsys):
    assert run(capsys, "verify", "identities")[0] == 0
    assert run(capsys, "verify", "unknown")[0] == 2
    code, out, _ = run(capsys, "verify", "C10", "--format", "json")
    assert code == 1 and json.loads(out)["pass"] is False


def test_missing_input_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_bad_grid_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["generate", "chirp", "--grid", "0:x:3"])
    assert exc.value.code == 2


def test_malformed_csv(tmp_path, capsys):
    p = tmp_path / "bad.csv"
    p.write_text("t,re,im\n0,1,0\n0.1,oops,0\n")
    code, _, err = run(capsys, "analyze", str(p))
    assert code == 2 and "line 3" in err


def test_analyze_block10(capsys):
    code, out, _ = run(capsys, "analyze", "block10", "--tags", "E,TE(1,sqrt2)")
    rep = json.loads(out)
    verdicts = {v["tag"]: v["verdict"] for v in rep["verdicts"]}
    assert code == 0
    assert verdicts["E"] == "nonmember"
    assert verdicts["TE(1,1.41421)"] == "member"


def test_analyze_sampled_sin_csv(tmp_path, capsys):
    p = tmp_path / "sin.csv"
    run(capsys, "generate", "sin", "--grid", "0:0.03125:40000", "--out", str(p))
    code, out, _ = run(capsys, "analyze", str(p), "--tags", "AP")
    assert code == 0 and json.loads(out)["verdicts"][0]["verdict"] == "member"


def test_roundtrip_generate_analyze(tmp_path, capsys):
    grid = "0:0.03125:40000"
    p = tmp_path / "s.csv"
    run(capsys, "generate", "3g1+2gsqrt2+0.5", "--grid", grid, "--out", str(p))
    _, a, _ = run(capsys, "analyze", str(p), "--tags", "AP,C0,Cub,E")
    _, b, _ = run(capsys, "analyze", "3g1+2gsqrt2+0.5", "--grid", grid, "--tags", "AP,C0,Cub,E")
    a, b = json.loads(a), json.loads(b)
    a.pop("input"), b.pop("input")
    assert a == b


def test_analyze_byte_stable(capsys):
    _, a, _ = run(capsys, "analyze", "sin", "--tags", "C0,E")
    _, b, _ = run(capsys, "analyze", "sin", "--tags", "C0,E")
    assert a == b


def test_spectrum_examples(capsys):
    code, out, _ = run(capsys, "spectrum", "chirp", "--omega=-3:3:0.01", "--T", "1e4")
    assert code == 0 and json.loads(out)["entries"] == []
    code, out, _ = run(capsys, "spectrum", "3g1+2gsqrt2", "--omega=-3:3:0.01", "--format", "text")
    assert code == 0 and len(out.splitlines()) == 2


def test_spectrum_relative(capsys):
    code, out, _ = run(capsys, "spectrum", "g3", "--tag", "C0", "--omega=-5:5:0.1")
    assert code == 0 and json.loads(out)["omegas"] == pytest.approx([3.0])


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"format": "text", "tags": ["C0"]}))
    code, out, _ = run(capsys, "analyze", "sin", "--config", str(cfg))
    assert code == 0 and "class C0:" in out
    cfg.write_text(json.dumps({"rtol": -1}))
    assert run(capsys, "analyze", "sin", "--config", str(cfg))[0] == 2


def test_plotdata_output(tmp_path, capsys):
    out = tmp_path / "p.txt"
    assert run(capsys, "spectrum", "3g1", "--omega=-3:3:0.01", "--format", "plotdata", "--out", str(out))[0] == 0
    cols = out.read_text().split()
    assert len(cols) == 3 and float(cols[1]) == pytest.approx(3, abs=0.05)
