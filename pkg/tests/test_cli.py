import json
import math
import subprocess
import sys

import pytest

from uhfsec.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured.err


def test_uhf_verify_passes(capsys):
    code, rep, err = run(capsys, "uhf", "verify", "--kind", "field", "--l", "4", "--k", "2")
    assert code == 0 and rep["passed"]
    assert rep["checks"][0]["value"] == {"fraction": "1/5", "value": 0.2}
    assert "[PASS] uhf verify" in err


def test_uhf_verify_balanced_failure_exit_1(capsys):
    code, rep, _ = run(capsys, "uhf", "verify", "--kind", "modified-toeplitz", "--l", "3", "--k", "1",
                       "--expect-balanced")
    assert code == 1 and not rep["passed"]
    assert rep["results"]["balanced"]["witness"] is not None


def test_bounds_channel_value(capsys):
    code, rep, _ = run(capsys, "bounds", "channel", "--b", "10", "--imax", "4", "--eps", "0", "--k", "2")
    assert code == 0
    assert rep["results"]["bound"] == pytest.approx(0.02254, abs=1e-5)
    assert rep["results"]["bound"] == round(2**-6 / math.log(2), 13) or \
        rep["results"]["bound"] == pytest.approx(2**-6 / math.log(2), rel=1e-11)


def test_uhf_eval_and_invert(capsys):
    code, rep, _ = run(capsys, "uhf", "eval", "--kind", "modified-toeplitz", "--l", "3", "--k", "1",
                       "--seed-hex", "2", "--input-hex", "5")
    assert code == 0 and rep["results"]["output"] == 0
    code, rep, _ = run(capsys, "uhf", "invert", "--l", "4", "--k", "2", "--seed-hex", "7",
                       "--m-hex", "3", "--r-hex", "1")
    assert code == 0 and rep["passed"]


def test_uhf_eval_bad_seed(capsys):
    code, _, err = run(capsys, "uhf", "eval", "--l", "4", "--k", "2", "--seed-hex", "0", "--input-hex", "1")
    assert code == 2 and "error" in err


def test_ecc_commands(capsys):
    _, rep, _ = run(capsys, "ecc", "encode", "--bits", "1000")
    assert rep["results"]["codeword"] == "1000110"
    _, rep, _ = run(capsys, "ecc", "decode", "--bits", "1000111")
    assert rep["results"]["codeword"] == "1000110" and rep["results"]["message"] == "1000"
    _, rep, _ = run(capsys, "ecc", "leader", "--bits", "0000001")
    assert rep["results"]["leader"] == "0000001"


def test_channel_commands(capsys):
    _, rep, _ = run(capsys, "channel", "capacity", "--channel", "bsc:0.11")
    assert rep["results"]["capacity"] == pytest.approx(0.500084, abs=1e-6)
    _, rep, _ = run(capsys, "channel", "maxinfo", "--channel", "bsc:0.3", "--code", "hamming74",
                    "--eps", "0,0.01")
    res = rep["results"]
    assert res["slack"] == pytest.approx(res["imax"] - res["n_capacity"], abs=1e-10)
    assert len(res["smooth"]) == 2


def test_measure_commands(capsys):
    _, rep, _ = run(capsys, "measure", "hmin", "--probs", "0.5,0.25,0.25", "--eps", "0.25")
    assert rep["results"]["smooth_hmin"] == pytest.approx(2)
    code, rep, _ = run(capsys, "measure", "extraction", "--instances", "3", "--seed", "4")
    assert code == 0 and rep["results"]["instances"] == 3 * 3 * 2
    code, rep, _ = run(capsys, "measure", "channel", "--k", "1", "--channel", "bsc:0.2", "--eps", "0,0.01")
    assert code == 0 and len(rep["checks"]) == 2


def test_bounds_commands(capsys):
    _, rep, _ = run(capsys, "bounds", "lhl", "--k", "4", "--h", "10")
    assert rep["results"]["tv_bound"] == pytest.approx(0.0625)
    code, rep, _ = run(capsys, "bounds", "awgn", "--n", "100", "--delta", "0.1", "--power", "1",
                       "--sigma2", "1")
    assert code == 0 and set(rep["results"]["terms"]) == {"capacity", "spread", "volume"}
    code, _, _ = run(capsys, "bounds", "awgn", "--n", "100", "--delta", "0.7", "--power", "1",
                     "--sigma2", "1")
    assert code == 2


def test_protocol_commands(capsys):
    code, rep, _ = run(capsys, "ska", "simulate", "--eps-src", "0.05", "--trials", "500")
    assert code == 0 and rep["results"]["trials"] == 500
    code, rep, _ = run(capsys, "ska", "eval", "--eps-src", "0.05")
    assert code == 0
    code, rep, _ = run(capsys, "ska", "eval", "--eps-src", "0.05", "--k", "4", "--eve-q", "0.2")
    assert code == 1 and not rep["passed"]
    code, rep, _ = run(capsys, "wiretap", "eval", "--k", "1", "--W", "bsc:0.3", "--eps", "0,0.01")
    assert code == 0 and len(rep["results"]["reports"]) == 2
    code, rep, _ = run(capsys, "wiretap", "simulate", "--k", "2", "--W", "bsc:0.3", "--T", "bsc:0.05",
                       "--trials", "400")
    assert code == 0
    code, rep, _ = run(capsys, "wiretap", "recycle", "--code", "bitrep:2x3", "--k", "1", "--W", "bsc:0.2",
                       "--messages", "all")
    assert code == 0
    assert rep["results"]["run"]["rate"] == {"fraction": "1/9", "value": pytest.approx(1 / 9)}


def test_rate_warning_recorded(capsys):
    _, rep, _ = run(capsys, "wiretap", "eval", "--k", "4", "--W", "noiseless")
    assert rep["results"]["warnings"]


def test_fields(capsys):
    _, rep, _ = run(capsys, "fields", "--max-l", "20")
    assert rep["results"]["valid_lengths"] == [2, 4, 10, 12, 18]


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "uhf")[0] == 2
    assert run(capsys, "uhf", "verify", "--l", "4")[0] == 2
    assert run(capsys, "nosuch")[0] == 2
    assert run(capsys, "ecc", "encode", "--bits", "10")[0] == 2


def test_budget_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("UHFSEC_BUDGET", "100")
    code, _, err = run(capsys, "uhf", "verify", "--l", "4", "--k", "2")
    assert code == 3 and "budget" in err


def test_out_file_and_reproducible(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["ska", "simulate", "--eps-src", "0.05", "--trials", "300", "--seed", "9",
                     "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.json"
    main(["ska", "simulate", "--eps-src", "0.05", "--trials", "300", "--seed", "10", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()
    capsys.readouterr()


def test_timing_flag(capsys):
    _, rep, _ = run(capsys, "bounds", "lhl", "--k", "1", "--h", "3", "--timing")
    assert "wall_time_s" in rep
    _, rep, _ = run(capsys, "bounds", "lhl", "--k", "1", "--h", "3")
    assert "wall_time_s" not in rep


def test_seed_range(capsys):
    assert run(capsys, "bounds", "lhl", "--k", "1", "--h", "3", "--seed", str(1 << 64))[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uhfsec", "bounds", "channel", "--b", "10", "--imax", "4",
                           "--k", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["bound"] == pytest.approx(0.0225421100139)


def test_budget_flag_and_env_restored(capsys, monkeypatch):
    monkeypatch.delenv("UHFSEC_BUDGET", raising=False)
    assert run(capsys, "uhf", "verify", "--l", "4", "--k", "2", "--budget", "50")[0] == 3
    import os
    assert "UHFSEC_BUDGET" not in os.environ
    assert run(capsys, "uhf", "verify", "--l", "4", "--k", "2", "--budget", "0")[0] == 2
    assert run(capsys, "uhf", "verify", "--l", "4", "--k", "2")[0] == 0
