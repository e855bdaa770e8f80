import json

import pytest

from s4red.algebra import Matrix
from s4red.circuits import example_circuit
from s4red.f4arith import P1Instance, Z3Poly
from s4red.formats import parse
from s4red.holomorph import GroupWord, HolElement
from s4red.respoly import Polynomial
from s4red.verify import PASSES, verify_pass

from helpers import make_rng, random_circuit, random_p1, random_poly, random_word

I2 = Matrix.identity(2, 2)
EXAMPLE = parse("kind: group-word\nq: 2\nm: 2\nx1 x2 (1 2) x1' x2'\n")
SIXTH = Polynomial([(1,) * 6, (I2,)])


def test_example_word_through_polsat_respoleqv():
    rep = verify_pass(EXAMPLE, "polsat-respoleqv")
    assert rep.status == "pass"
    assert rep.source["satisfiable"] is False
    assert rep.target["identically_zero"] is True


def test_sixth_power_through_respoly_p1():
    rep = verify_pass(SIXTH, "respoly-p1")
    assert rep.status == "pass"
    assert rep.source["valid"] and rep.target["valid"]


def test_cap_gives_partial():
    rep = verify_pass(GroupWord((1, 2, 3), 2, 2), "collect", cap=100)
    assert rep.status == "partial"
    assert rep.notes


def test_report_is_json():
    rep = verify_pass(GroupWord((1, 1), 2, 2), "combine")
    d = json.loads(json.dumps(rep.as_dict()))
    assert d["pass"] == "combine" and d["status"] == "pass"
    assert all({"name", "value", "bound", "ok"} <= set(c) for c in d["checks"])


def test_wrong_instance_type():
    with pytest.raises(TypeError):
        verify_pass(SIXTH, "collect")
    with pytest.raises(ValueError):
        verify_pass(SIXTH, "no-such-pass")


def instances_for(name, rng):
    kind = PASSES[name]
    if kind == "group-word":
        # combine enumerates GL^(n + 2k); one variable already means up to 6^9 points
        top = 0 if name == "combine" else 1
        return [random_word(rng, rng.randint(0, top), rng.randint(1, 5)) for _ in range(4)]
    if kind == "restricted-poly":
        return [random_poly(rng, 1, 3, 3) for _ in range(4)] + [SIXTH]
    if kind == "p1":
        return [random_p1(rng, rng.randint(0, 3)) for _ in range(4)]
    return [random_circuit(rng, rng.randint(1, 4)) for _ in range(4)] + [example_circuit()]


@pytest.mark.parametrize("name", list(PASSES))
def test_each_pass_verifies(name):
    rng = make_rng(90 + list(PASSES).index(name))
    for inst in instances_for(name, rng):
        rep = verify_pass(inst, name)
        assert rep.status == "pass", rep.as_dict()


def test_copoleqv_on_constants():
    one = HolElement.identity(2, 2)
    assert verify_pass(GroupWord((one,), 2, 2), "copoleqv-polsat").status == "pass"


def test_p1_circuit_reports_validity():
    inst = P1Instance(tuple(Z3Poly.const(c, 1) for c in range(3)), 1)
    rep = verify_pass(inst, "p1-circuit")
    assert rep.status == "pass" and rep.source["valid"] and rep.target["valid"]
