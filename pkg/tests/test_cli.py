import json
import subprocess
import sys

import pytest

from binform import suites
from binform.cli import main
from binform.serial import dumps


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out.strip(), out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out), out


# --- ring / det --------------------------------------------------------------------

def test_ring_report(capsys):
    rep, _ = run_json(capsys, "ring", "--form", "[2,3,5]")
    assert rep["n"] == 2 and rep["disc"] == "-31" and rep["primitive"] is True
    assert rep["index_Jf_If"] == "2" and rep["norm_If"] == "2" and rep["norm_Jf"] == "1"
    assert rep["struct_consts"][1][1] == ["-10", "-3"]


def test_ring_monic(capsys):
    rep, _ = run_json(capsys, "ring", "--form", '{"coeffs":[1,0,1]}')
    assert rep["disc"] == "-4" and rep["If"] == rep["Jf"]
    assert rep["norm_If"] == "1"


def test_ring_zero_lead_uses_transport(capsys):
    rep, _ = run_json(capsys, "ring", "--form", "[0,1,0]")
    assert rep["transport"] == ["1", "1", "0", "1"]
    assert rep["local_form"] == {"coeffs": ["1", "1", "0"]}


def test_ring_degenerate_and_usage(capsys):
    assert run(capsys, "ring", "--form", "[0,0,0]")[0] == 3
    assert run(capsys, "ring", "--form", "[0,0]")[0] == 3
    assert run(capsys, "ring", "--form", "[1,2]")[0] == 2
    assert run(capsys, "ring", "--form", "[1,2,")[0] == 2
    assert run(capsys, "ring")[0] == 2


def test_det(capsys):
    rep, _ = run_json(capsys, "det", "--tensor", '{"A1":[[1,0],[0,1]],"A2":[[0,-1],[1,0]]}')
    assert rep == {"coeffs": ["1", "0", "1"]}


# --- psi / phi ----------------------------------------------------------------------

def test_psi_phi_byte_round_trip(capsys, tmp_path):
    tensor = {"n": 3, "A1": [[2, 1, 0], [0, 1, 1], [1, 0, 1]], "A2": [[1, 0, 1], [0, 2, 1], [1, 1, 0]]}
    canon = dumps({"n": 3, "A1": [[str(x) for x in r] for r in tensor["A1"]],
                   "A2": [[str(x) for x in r] for r in tensor["A2"]]})
    pair_file = tmp_path / "pair.json"
    code, _, _ = run(capsys, "psi", "--tensor", json.dumps(tensor), "--out", str(pair_file))
    assert code == 0
    _, out = run_json(capsys, "phi", "--pair", "@" + str(pair_file))
    assert out == canon


def test_phi_detects_tampered_tensor(capsys, tmp_path):
    _, out = run_json(capsys, "psi", "--tensor", '{"A1":[[1,0],[0,1]],"A2":[[0,-1],[1,0]]}')
    pair = json.loads(out)
    pair["tensor"]["A2"][0][0] = "5"
    code, _, _ = run(capsys, "phi", "--pair", json.dumps(pair))
    assert code == 1


def test_psi_zero_tensor(capsys):
    assert run(capsys, "psi", "--tensor", '{"A1":[[0,0],[0,0]],"A2":[[0,0],[0,0]]}')[0] == 3


# --- orbits -------------------------------------------------------------------------

def test_orbits_gaussian(capsys):
    rep, _ = run_json(capsys, "orbits", "--form", "[1,0,1]", "--bound", "1")
    assert rep["members"] == 72 and len(rep["classes"]) == 1
    assert rep["classes"][0]["size_in_box"] == 72


def test_orbits_too_large(capsys):
    assert run(capsys, "orbits", "--form", "[1,0,0,1]", "--bound", "3")[0] == 2


# --- partner ------------------------------------------------------------------------

def test_partner_of_ring_is_If(capsys):
    rep, _ = run_json(capsys, "partner", "--form", "[2,3,5]")
    ring, _ = run_json(capsys, "ring", "--form", "[2,3,5]")
    assert rep["partner"] == ring["If"]
    assert rep["flags"] == []
    v = rep["verdict"]
    assert v["contained"] and v["criteria_agree"] and v["index_ok"] and v["norm_ok"]


def test_partner_non_primitive_flag(capsys):
    rep, _ = run_json(capsys, "partner", "--form", "[2,4,6]")
    assert "form is not primitive" in rep["flags"]


# --- verify ---------------------------------------------------------------------------

def test_verify_roundtrip_ok(capsys):
    rep, _ = run_json(capsys, "verify", "--suite", "roundtrip", "--n", "3", "--count", "50",
                      "--seed", "42")
    assert rep["ok"] is True
    assert rep["suites"][0]["passed"] == "50"


def test_verify_all_small(capsys):
    rep, _ = run_json(capsys, "verify", "--suite", "all", "--n", "2", "--count", "5")
    assert rep["ok"] and len(rep["suites"]) == len(suites.SUITES)


def test_verify_balance_fixed_form(capsys):
    rep, _ = run_json(capsys, "verify", "--suite", "balance", "--form", "[2,3,5]", "--count", "20")
    assert rep["ok"]
    assert rep["suites"][0]["config"]["form"] == ["2", "3", "5"]


def test_verify_usage_errors(capsys):
    assert run(capsys, "verify", "--suite", "nope")[0] == 2
    assert run(capsys, "verify", "--suite", "ring", "--n", "99")[0] == 2
    assert run(capsys, "verify", "--suite", "ring", "--bound", "0")[0] == 2
    assert run(capsys, "verify", "--suite", "ring", "--count", "0")[0] == 2
    assert run(capsys, "verify", "--suite", "ring", "--seed", "-1")[0] == 2
    assert run(capsys, "verify", "--suite", "balance", "--form", "[0,1,1]")[0] == 3


def test_verify_violation_writes_artifact(capsys, monkeypatch, tmp_path):
    def broken(cfg, seed):
        return {"kind": "forced", "seed_seen": seed}

    monkeypatch.setitem(suites.TRIALS, "ring", broken)
    out = tmp_path / "fail.json"
    code, stdout, _ = run(capsys, "verify", "--suite", "ring", "--count", "3", "--out", str(out))
    assert code == 1
    rep = json.loads(stdout)
    assert rep["ok"] is False and rep["suites"][0]["failed"] == "3"
    art = json.loads(out.read_text())
    assert art[0]["suite"] == "ring" and len(art[0]["failures"]) == 3
    assert art[0]["failures"][0]["kind"] == "forced"


def test_verify_deterministic_across_workers(capsys):
    args = ["verify", "--suite", "equivariance", "--n", "3", "--count", "40", "--seed", "7"]
    _, one = run_json(capsys, *args)
    _, two = run_json(capsys, *args, "--workers", "3")
    assert one == two


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "binform", "det", "--tensor",
                          '{"A1":[[1,0],[0,1]],"A2":[[0,-1],[1,0]]}'],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.strip() == '{"coeffs":["1","0","1"]}'


@pytest.mark.parametrize("cmd", ["ring", "det", "psi", "phi", "orbits", "partner", "verify"])
def test_every_command_has_out(capsys, cmd):
    try:
        main([cmd, "--help"])
    except SystemExit:
        pass
    assert "--out" in capsys.readouterr().out
