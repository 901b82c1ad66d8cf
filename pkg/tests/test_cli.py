import json
import subprocess
import sys

from somos_sigma.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_somos4_run_json(capsys):
    code, out, _ = run(capsys, "somos4", "run", "--alpha", "1", "--beta", "1", "--seeds", "1,1,1,1")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "somos4 run"
    assert doc["result"]["terms"]["terms"] == ["1", "1", "1", "1", "2", "3", "7", "23", "59", "314"]


def test_somos4_run_csv(capsys):
    code, out, _ = run(capsys, "--format", "csv", "somos4", "run", "--alpha", "1", "--beta", "1", "--seeds", "1,1,1,1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    assert lines[1] == "index,numerator,denominator"
    assert [ln.split(",")[1] for ln in lines[2:]] == ["1", "1", "1", "1", "2", "3", "7", "23", "59", "314"]


def test_common_flags_after_subcommand(capsys):
    a = run(capsys, "--format", "csv", "eds", "gen", "--stop", "6")
    b = run(capsys, "eds", "gen", "--stop", "6", "--format", "csv")
    assert a == b and a[0] == 0


def test_somos4_solve(capsys):
    code, out, _ = run(capsys, "somos4", "solve", "--alpha", "1", "--beta", "1", "--seeds", "1,1,1,1", "--digits", "20")
    assert code == 0
    res = json.loads(out)["result"]
    assert res["g2"] == "4" and res["g3"] == "-1"
    assert res["lambda"] == "1" and res["tau_minus1"] == "2"
    assert res["precision"] == 20


def test_input_json_merged(tmp_path, capsys):
    payload = tmp_path / "p.json"
    payload.write_text(json.dumps({"alpha": 1, "beta": 1, "seeds": [1, 1, 1, 1], "n": 5}))
    code, out, _ = run(capsys, "somos4", "run", "--input", str(payload), "--n", "7")
    assert code == 0
    assert len(json.loads(out)["result"]["terms"]["terms"]) == 7


def test_input_json_rejected(tmp_path, capsys):
    payload = tmp_path / "p.json"
    payload.write_text(json.dumps({"alpha": 1, "beta": 1, "seeds": [1, 1, 1], "bogus": 2}))
    code, _, err = run(capsys, "somos4", "run", "--input", str(payload))
    assert code == 1
    assert json.loads(err)["error"] == "validation"


def test_bad_flag_is_validation_error(capsys):
    code, _, _ = run(capsys, "somos4", "run", "--seeds", "1,x,1,1")
    assert code == 1
    code, _, _ = run(capsys, "nonsense")
    assert code == 1


def test_singular_curve_exit_2(capsys):
    code, _, err = run(capsys, "g2", "validate", "--curve", "0,0,0,0,0")
    assert code == 2
    assert "error" in json.loads(err)


def test_g2_fit_and_verify(capsys):
    args = ["--curve", "1,-4,0,0,0", "--d0", "0,1;1,1", "--point=-1,1", "--start", "-10", "--stop", "30"]
    code, out, _ = run(capsys, "g2", "fit", *args)
    assert code == 0
    fit = json.loads(out)["result"]
    code, out, _ = run(capsys, "g2", "verify", *args)
    assert code == 0
    ver = json.loads(out)["result"]
    assert ver["pass"] is True
    assert json.dumps(fit).count("/") > 0


def test_schur_verify(capsys):
    code, out, _ = run(capsys, "schur", "verify", "--cap", "3")
    assert code == 0
    assert json.loads(out)["result"]["pass"] is True


def test_schur_cap_limit(capsys):
    code, _, _ = run(capsys, "schur", "verify", "--cap", "40")
    assert code == 1


def test_hh_crosscheck(capsys):
    code, out, _ = run(
        capsys, "hh", "crosscheck", "--a", "0", "--c", "0", "--m", "0", "--state", "2,1,0,0", "--lambda", "1/2", "--steps", "5"
    )
    assert code == 0
    res = json.loads(out)["result"]
    assert res["pass"] is True and len(res["rows"]) == 6


def test_hh_simulate(capsys):
    code, out, _ = run(
        capsys, "hh", "simulate", "--a", "0", "--c=-0.9", "--m", "0", "--state", "0.53,0.4,0.4,0.1",
        "--lambda", "0.85", "--mu-sign=-1", "--steps", "3",
    )
    assert code == 0
    res = json.loads(out)["result"]
    assert set(res) == {"precision", "curve", "steps"}
    rows = res["steps"]
    assert len(rows) == 4
    assert {"state", "h1", "h2", "separation_vars"} <= set(rows[0])


def test_hh_missing_state(capsys):
    code, _, _ = run(capsys, "hh", "crosscheck")
    assert code == 1


def test_paper_reproduce_subset(capsys):
    code, out, _ = run(capsys, "paper", "reproduce", "--only", "1,3,6")
    assert code == 0
    assert out.count("[PASS]") == 3


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "eds", "gen", "--stop", "5", "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["config"]["command"] == "eds gen"


def test_deterministic_subprocess():
    cmd = [sys.executable, "-m", "somos_sigma.cli", "somos4", "solve", "--alpha", "1", "--beta", "1", "--seeds", "1,1,1,1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_digits_env(monkeypatch, capsys):
    monkeypatch.setenv("SOMOS_SIGMA_DIGITS", "18")
    code, out, _ = run(capsys, "somos4", "solve", "--alpha", "1", "--beta", "1", "--seeds", "1,1,1,1")
    assert code == 0
    assert json.loads(out)["config"]["digits"] == 18
