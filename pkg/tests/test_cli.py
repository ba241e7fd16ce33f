import json
from pathlib import Path

import pytest

from stardec.cli import run

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "golden"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_pack_2k10_infeasible_with_certificate(capsys):
    code, out, _ = call(capsys, "pack", GOLDEN / "2k10.json")
    assert code == 1
    payload = json.loads(out)
    assert payload["feasible"] is False and payload["delta"] == -2


def test_pack_certificate_flag(capsys):
    code, out, _ = call(capsys, "pack", "--certificate", GOLDEN / "2k10.json")
    assert code == 1
    assert json.loads(out)["delta"] == -2


def test_pack_feasible(tmp_path, capsys):
    inst = tmp_path / "k3.json"
    inst.write_text(json.dumps({"n": 3, "lambda": 1, "centers": {"0": [2], "1": [1]}}))
    code, out, err = call(capsys, "pack", inst)
    assert code == 0, err
    assert json.loads(out)["feasible"] is True


def test_decompose_4k100_and_verify(tmp_path, capsys):
    sol = tmp_path / "sol.json"
    code, _, err = call(capsys, "decompose", GOLDEN / "4k100.json", "-o", sol)
    assert code == 0, err
    code, out, _ = call(capsys, "verify", GOLDEN / "4k100.json", sol)
    assert code == 0 and json.loads(out)["valid"] is True


def test_decompose_flags_match_file(capsys):
    a = call(capsys, "decompose", GOLDEN / "4k100.json")
    b = call(capsys, "decompose", "--lambda", 4, "--n", 100, "--sizes", GOLDEN / "4k100_sizes.json")
    assert a[0] == b[0] == 0 and a[1] == b[1]


def test_deterministic_output(capsys):
    runs = [call(capsys, "decompose", "--seed", 7, GOLDEN / "4k100.json")[1] for _ in range(2)]
    assert runs[0] == runs[1]


def test_verify_rejects_tampered_solution(tmp_path, capsys):
    sol = tmp_path / "sol.json"
    assert call(capsys, "decompose", GOLDEN / "4k100.json", "-o", sol)[0] == 0
    data = json.loads(sol.read_text())
    data["stars"][0]["leaves"] = data["stars"][0]["leaves"][:-1]
    sol.write_text(json.dumps(data))
    code, out, _ = call(capsys, "verify", GOLDEN / "4k100.json", sol)
    assert code == 1 and json.loads(out)["valid"] is False


def test_malformed_json_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"lambda":\n')
    code, _, err = call(capsys, "pack", bad)
    assert code == 2
    assert f"{bad}:2:1" in err


def test_missing_file_exit_2(capsys):
    assert call(capsys, "pack", "/nonexistent/x.json")[0] == 2


def test_bad_arguments_exit_2(capsys):
    assert call(capsys, "frobnicate")[0] == 2
    assert call(capsys, "gen-hard", "--lambda", 3, "--partition", "2,2,9")[0] == 2


def test_oracle_refused_exit_3(capsys):
    code, _, err = call(capsys, "oracle", "pack", GOLDEN / "2k10.json")
    assert code == 3 and "cap" in err


def test_oracle_raised_cap(capsys):
    code, out, _ = call(capsys, "oracle", "pack", GOLDEN / "2k10.json",
                        "--cap", "pack_n=10", "--cap", "pack_sigma=100", "--cap", "delta_functions=20000")
    assert code == 1
    assert json.loads(out)["feasible"] is False


def test_oracle_bad_cap_name(capsys):
    assert call(capsys, "oracle", "pack", GOLDEN / "2k10.json", "--cap", "nope=3")[0] == 2


def test_tournament_exit_codes(tmp_path, capsys):
    bad = tmp_path / "t.json"
    bad.write_text(json.dumps({"lambda": 1, "a": [3, 0, 0], "b": [0, 0, 0]}))
    code, out, _ = call(capsys, "tournament", bad)
    assert code == 1 and json.loads(out)["k"] == 1
    good = tmp_path / "u.json"
    good.write_text(json.dumps({"lambda": 2, "a": [2, 2, 2], "b": [2, 2, 2]}))
    code, out, _ = call(capsys, "tournament", "--realize", good)
    assert code == 0 and json.loads(out)["out"] == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]


def test_gen_hard_odd(capsys):
    code, out, _ = call(capsys, "gen-hard", "--lambda", 3, "--partition", "2,2,3", "--check-if")
    assert code == 0
    payload = json.loads(out)
    assert payload["params"]["n"] == 162 and payload["params"]["m"] == 121


def test_gen_hard_even_miss_exit_1(capsys):
    code, out, _ = call(capsys, "gen-hard", "--lambda", 2, "--partition", "2,2,3", "--search-limit", 40)
    assert code == 1
    assert json.loads(out)["found"] is False


def test_gen_hard_q1_sits_at_the_bound(tmp_path, capsys):
    # with q = 1 the odd reduction's m equals the constructive bound, so decompose handles it
    inst = tmp_path / "h.json"
    assert call(capsys, "gen-hard", "--lambda", 3, "--partition", "2,2,3", "-o", inst)[0] == 0
    assert call(capsys, "decompose", inst)[0] == 0


def test_gen_hard_instance_above_threshold(tmp_path, capsys):
    inst = tmp_path / "h.json"
    assert call(capsys, "gen-hard", "--lambda", 3, "--partition", "5,5,5,4,6,5", "-o", inst)[0] == 0
    code, _, err = call(capsys, "decompose", inst)
    assert code == 2 and "bound" in err
