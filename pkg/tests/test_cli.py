import json
import os
import subprocess
import sys

import pytest

from s4red.cli import EXIT_FAIL, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, main, sidecar_path
from s4red.circuits import circuit_equivalence_bruteforce
from s4red.f4arith import p1_equivalence_bruteforce
from s4red.formats import parse
from s4red.respoly import restricted_equivalence_bruteforce

EXAMPLE = "kind: group-word\nq: 2\nm: 2\nx1 x2 (1 2) x1' x2'\n"
SQUARE = "kind: group-word\nq: 2\nm: 2\nx1 x1\n"
SIXTH = "kind: restricted-poly\nx1 x1 x1 x1 x1 x1 + [1,0;0,1]\n"
NOT_VALID = "kind: restricted-poly\nx1 + [1,0;0,1]\n"
CONSTS = "kind: p1\nn: 1\n0\n1\n2\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# ---------------------------------------------------------------- oracle


def test_oracle_polsat(write, capsys):
    code, out, _ = run(["oracle", "--problem", "polsat", write("ex.txt", EXAMPLE)], capsys)
    assert code == EXIT_FAIL and json.loads(out)["satisfiable"] is False
    code, out, _ = run(["oracle", "--problem", "polsat", write("sq.txt", SQUARE)], capsys)
    assert code == EXIT_OK and len(json.loads(out)["witness"]) == 1


def test_oracle_validity(write, capsys):
    assert run(["oracle", "--problem", "respoleqv", write("a.txt", SIXTH)], capsys)[0] == EXIT_OK
    code, out, _ = run(["oracle", "--problem", "respoleqv", write("b.txt", NOT_VALID)], capsys)
    assert code == EXIT_FAIL and json.loads(out)["counterexample"]
    assert run(["oracle", "--problem", "p1", write("c.txt", CONSTS)], capsys)[0] == EXIT_OK
    assert run(["oracle", "--problem", "poleqv", write("d.txt", SQUARE)], capsys)[0] == EXIT_FAIL


# ---------------------------------------------------------------- solve and verify


def test_solve_exit_codes(write, capsys):
    code, out, _ = run(["solve", write("sq.txt", SQUARE)], capsys)
    assert code == EXIT_OK and json.loads(out)["answer"] == "SAT"
    not_square = "kind: group-word\nx1 x1 (1 2)\n"
    code, out, _ = run(["solve", "--method", "probabilistic", "--seed", "3", "--repeats", "2",
                        write("ns.txt", not_square)], capsys)
    assert code == EXIT_FAIL and json.loads(out)["answer"] == "probably-UNSAT"
    code, out, _ = run(["solve", "--method", "brute", write("ns2.txt", not_square)], capsys)
    assert code == EXIT_FAIL


def test_verify_exit_codes(write, capsys):
    code, out, _ = run(["verify", "--pass", "respoly-p1", write("a.txt", SIXTH)], capsys)
    assert code == EXIT_OK and json.loads(out)["status"] == "pass"
    code, out, _ = run(["--cap", "10", "verify", "--pass", "respoly-p1", write("b.txt", SIXTH)], capsys)
    assert code == EXIT_PARTIAL and json.loads(out)["status"] == "partial"


def test_cap_from_environment(write, capsys, monkeypatch):
    monkeypatch.setenv("S4R_CAP", "10")
    assert run(["verify", "--pass", "respoly-p1", write("a.txt", SIXTH)], capsys)[0] == EXIT_PARTIAL
    assert run(["oracle", "--problem", "polsat", write("ex.txt", EXAMPLE)], capsys)[0] == EXIT_PARTIAL


# ---------------------------------------------------------------- reduce


def test_reduce_writes_target_and_sidecar(write, tmp_path, capsys):
    out = str(tmp_path / "p1.txt")
    code, _, _ = run(["reduce", "--from", "respoleqv", "--to", "p1", write("a.txt", SIXTH), "-o", out], capsys)
    assert code == EXIT_OK
    inst = parse("p1", open(out).read())
    assert p1_equivalence_bruteforce(inst) is None
    prov = json.load(open(sidecar_path(out)))
    assert prov["from"] == "respoleqv" and prov["to"] == "p1"


def test_reduce_to_stdout(write, capsys):
    code, out, _ = run(["reduce", "--from", "p1", "--to", "circuit", write("c.txt", CONSTS)], capsys)
    assert code == EXIT_OK
    C = parse("circuit", out)
    assert circuit_equivalence_bruteforce(C, 1) is None


def test_reduce_polsat_to_respoleqv(write, capsys):
    word = "kind: group-word\n(1 2)\n"
    code, out, _ = run(["reduce", "--from", "polsat-s4", "--to", "respoleqv", write("w.txt", word)], capsys)
    assert code == EXIT_OK
    # (1 2) = 1 has no solution, so u vanishes on every invertible point
    u = parse("restricted-poly", out)
    assert u.n == 2 and restricted_equivalence_bruteforce(u) is None


# ---------------------------------------------------------------- usage errors


def test_usage_errors(write, capsys):
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["oracle", "--problem", "nope", "x.txt"])
    assert info.value.code == EXIT_USAGE
    assert main(["oracle", "--problem", "polsat", "/no/such/file"]) == EXIT_USAGE
    assert main(["oracle", "--problem", "p1", write("bad.txt", "kind: p1\nn: 1\nx9\n")]) == EXIT_USAGE
    assert main(["solve", "--gamma", "sesh:x", write("sq.txt", SQUARE)]) == EXIT_USAGE
    assert main(["reduce", "--from", "p1", "--to", "polsat-s4", write("c.txt", CONSTS)]) == EXIT_USAGE
    capsys.readouterr()


def test_module_entry_point(write):
    env = dict(os.environ, PYTHONPATH=os.pathsep.join(sys.path))
    proc = subprocess.run([sys.executable, "-m", "s4red", "oracle", "--problem", "polsat",
                           write("ex.txt", EXAMPLE)], capture_output=True, text=True, env=env)
    assert proc.returncode == EXIT_FAIL
    proc = subprocess.run([sys.executable, "-m", "s4red"], capture_output=True, text=True, env=env)
    assert proc.returncode == EXIT_USAGE
