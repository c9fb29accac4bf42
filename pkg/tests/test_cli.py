import json
import math
import subprocess
import sys

import pytest

from qdirac.cli import main, parse_angle, parse_grid
from qdirac.protocols import basis_cloner, machine_to_json
from qdirac.states import ket, normalized, state_to_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


@pytest.fixture
def state_file(tmp_path):
    def write(state, name="state.json"):
        path = tmp_path / name
        path.write_text(json.dumps(state_to_json(state)))
        return str(path)
    return write


@pytest.mark.parametrize("text, value", [("PI", math.pi), ("PI_2", math.pi / 2), ("pi_4", math.pi / 4),
                                         ("0.5*PI", math.pi / 2), ("1.25", 1.25)])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


def test_parse_grid():
    assert parse_grid("65x33") == (65, 33)


def test_verify_passes(capsys):
    code, report, _ = run_json(capsys, "verify")
    assert code == 0
    assert report["subcommand"] == "verify"
    assert report["results"]["passed"] == report["results"]["total"] == len(report["checks"])


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--format", "text")
    assert code == 0
    assert out.strip().endswith("checks passed")
    assert "[FAIL]" not in out


def test_game_table_text(capsys):
    code, out, _ = run(capsys, "game", "--gamma", "PI_2", "--table", "CDQM", "CDE", "--format", "text")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("Alice \\ Bob")
    assert "(3, 3)" in lines[1] and "(1.5, 4)" in lines[1]
    assert lines[4].startswith("M") and "(1, 1)" in lines[4]


def test_game_pair_with_nash_and_pareto(capsys):
    code, report, _ = run_json(capsys, "game", "--alice", "D", "--bob", "D", "--nash", "--pareto", "--grid", "17x9")
    assert code == 0
    res = report["results"]
    assert res["payoffs"]["alice"] == pytest.approx(1)
    assert res["nash"]["holds"] is False
    assert res["nash"]["witness"]["name"] == "Q"
    assert res["pareto"]["holds"] is False


def test_game_explicit_angles_and_coeffs(capsys):
    code, report, _ = run_json(capsys, "game", "--gamma", "0", "--alice", "PI,0", "--bob", "0,0",
                               "--coeffs", "4,-1,6,0")
    assert code == 0
    assert report["results"]["payoffs"]["alice"] == pytest.approx(6)


@pytest.mark.parametrize("argv", [
    ["game", "--alice", "Z", "--bob", "D"],
    ["game", "--table", "CDX", "CD"],
    ["game", "--grid", "65by33", "--table", "C", "C"],
    ["deutsch", "--table", "0a"],
    ["bogus"],
    [],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_game_domain_errors(capsys):
    code, _, err = run(capsys, "game", "--nash")
    assert code == 1 and "QDiracError" in err
    assert run(capsys, "game", "--gamma", "2.0", "--table", "C", "C")[0] == 1


@pytest.mark.parametrize("table, value, kind", [("00", 0, "constant"), ("01", 1, "balanced"),
                                                 ("10", 1, "balanced"), ("11", 0, "constant")])
def test_deutsch(capsys, table, value, kind):
    code, report, _ = run_json(capsys, "deutsch", "--table", table)
    assert code == 0
    assert report["results"]["eval"] == value
    assert report["results"]["classification"] == kind


def test_deutsch_wrong_length(capsys):
    assert run(capsys, "deutsch", "--table", "0110")[0] == 1


def test_jozsa(capsys):
    code, report, _ = run_json(capsys, "jozsa", "--n", "2", "--table", "0110")
    assert code == 0
    assert report["results"]["eval"] == 0
    assert report["results"]["all_zero_probability"] == pytest.approx(0, abs=1e-9)
    code, report, _ = run_json(capsys, "jozsa", "--table", "11111111")
    assert report["results"]["eval"] == 1


def test_jozsa_promise_violation(capsys):
    code, _, err = run(capsys, "jozsa", "--n", "2", "--table", "1110")
    assert code == 1 and "PromiseViolated" in err
    assert run(capsys, "jozsa", "--n", "3", "--table", "0110")[0] == 1


def test_measure(capsys, state_file):
    path = state_file(normalized([1, 1]))
    code, report, _ = run_json(capsys, "measure", "--state-file", path, "--shots", "2000", "--seed", "5")
    assert code == 0
    res = report["results"]
    assert res["prob1"] == pytest.approx(0.5)
    assert res["counts"]["0"] + res["counts"]["1"] == 2000
    _, again, _ = run_json(capsys, "measure", "--state-file", path, "--shots", "2000", "--seed", "5")
    assert again["results"]["counts"] == res["counts"]


def test_measure_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n_qubits": 1, "amplitudes": [[1, 0], [1, 0]]}))
    code, _, err = run(capsys, "measure", "--state-file", str(bad))
    assert code == 1 and "NotNormalized" in err
    assert run(capsys, "measure", "--state-file", str(tmp_path / "missing.json"))[0] == 1


def test_teleport(capsys, state_file):
    path = state_file(normalized([0.6, 0.8j]))
    code, report, _ = run_json(capsys, "teleport", "--state-file", path)
    assert code == 0
    assert len(report["results"]) == 4
    for row in report["results"]:
        assert row["probability"] == pytest.approx(0.25)
        assert row["fidelity"] == pytest.approx(1)
    code, out, _ = run(capsys, "teleport", "--state-file", path, "--branch", "11", "--format", "text")
    assert code == 0 and out.startswith("m1=1 m2=1")


def test_noclone_basis_cloner(capsys, state_file):
    zero, one = state_file(ket("0"), "zero.json"), state_file(ket("1"), "one.json")
    code, report, _ = run_json(capsys, "noclone", "--basis-cloner", "1", "--states", zero, one)
    assert code == 0
    assert report["results"]["cloner_for_a"] and report["results"]["cloner_for_b"]
    assert report["results"]["overlap"] == pytest.approx(0)
    assert report["checks"][0]["passed"]


def test_noclone_machine_file(capsys, tmp_path, state_file):
    machine = tmp_path / "machine.json"
    machine.write_text(json.dumps(machine_to_json(basis_cloner(1))))
    zero, plus = state_file(ket("0"), "zero.json"), state_file(normalized([1, 1]), "plus.json")
    code, report, _ = run_json(capsys, "noclone", "--machine-file", str(machine), "--states", zero, plus)
    assert code == 0
    assert report["results"]["cloner_for_a"] and not report["results"]["cloner_for_b"]
    assert report["checks"] == []
    assert run(capsys, "noclone", "--states", zero, plus)[0] == 1


def test_bell_output_feeds_measure(capsys, tmp_path):
    code, out, _ = run(capsys, "bell", "01")
    assert code == 0
    assert json.loads(out)["results"]["entangled"] is True
    path = tmp_path / "bell.json"
    path.write_text(out)
    code, report, _ = run_json(capsys, "measure", "--state-file", str(path), "--qubit", "1")
    assert code == 0 and report["results"]["prob1"] == pytest.approx(0.5)


def test_eps_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("QDIRAC_EPS", "1e-6")
    _, report, _ = run_json(capsys, "verify")
    assert report["inputs"]["eps"] == 1e-6
    _, report, _ = run_json(capsys, "verify", "--eps", "1e-8")
    assert report["inputs"]["eps"] == 1e-8
    monkeypatch.setenv("QDIRAC_EPS", "-3")
    assert run(capsys, "verify")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdirac", "deutsch", "--table", "01", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "eval: 1" in proc.stdout
