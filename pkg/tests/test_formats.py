import pytest
from hypothesis import given, settings, strategies as st

from s4red.algebra import Matrix
from s4red.errors import ParseError
from s4red.formats import KINDS, kind_of, normalize, parse, serialize
from s4red.holomorph import GroupWord, Perm, hol_group_order, s4_iso
from s4red.respoly import Polynomial

from helpers import make_rng, random_instance

EXAMPLE = "kind: group-word\nq: 2\nm: 2\nx1 x2 (1 2) x1' x2'\n"


def test_example_word():
    w = parse(EXAMPLE)
    assert isinstance(w, GroupWord) and w.n == 2
    t = s4_iso(Perm.from_cycles("(1 2)"))
    inv = hol_group_order(2, 2) - 1
    assert w.letters == (1, 2, t) + (1,) * inv + (2,) * inv
    assert parse("group-word", "x1 x2 (1 2) x1' x2'") == w


def test_zero_is_the_empty_polynomial():
    p = parse("restricted-poly", "0")
    assert isinstance(p, Polynomial) and p.num_monomials == 0
    assert serialize(p).endswith("\n0\n")


def test_kind_detection():
    assert kind_of(Matrix.identity(2, 2)) == "matrix"
    assert kind_of(parse(EXAMPLE)) == "group-word"
    with pytest.raises(TypeError):
        kind_of(3)


@pytest.mark.parametrize("kind", KINDS)
def test_round_trip_random(kind):
    rng = make_rng(80 + KINDS.index(kind))
    for _ in range(100):
        x = random_instance(rng, kind)
        text = serialize(x)
        y = parse(text)
        assert y == x
        assert serialize(y) == text
        assert parse(kind, text) == x


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(KINDS), st.integers(0, 2**32))
def test_round_trip_hypothesis(kind, seed):
    x = random_instance(make_rng(seed), kind)
    assert parse(serialize(x)) == x


@pytest.mark.parametrize("kind, messy, clean", [
    ("group-word", "m: 2\n   x1   x2 (1 2)\n", "kind: group-word\nq: 2\nm: 2\nn: 2\nx1 x2 [0,1;1,0,1,1]\n"),
    ("restricted-poly", "  x1 [1,0;0,1]+x2  \n", "kind: restricted-poly\nq: 2\nm: 2\nn: 2\nx1 [1,0;0,1] + x2\n"),
    ("p1", "n: 2\n x1*x2 +  2*x1^2\n", "kind: p1\nn: 2\n2*x1^2+1*x1*x2\n"),
    ("circuit", "(mod2 1\n  (term 1 (mod3 0 (term 2 (in 1)))))\n",
     "kind: circuit\nshape: 2,3\ninputs: 2\n(mod2 1 (term 1 (mod3 0 (term 2 (in 1)))))\n"),
])
def test_normalize(kind, messy, clean):
    assert normalize(kind, messy) == clean
    assert normalize(kind, clean) == clean


@pytest.mark.parametrize("kind, text, line, col", [
    ("group-word", "q: 2\nm: 2\nx1 x2 ? x1\n", 3, 7),
    ("group-word", "q: 2\nm: 2\n\nx1 [0,1;1,0,0]\n", 4, 4),
    ("group-word", "q: 2\nm: 2\nn: 1\nx2", 3, 1),  # reported at the header
    ("restricted-poly", "x1 + + x2\n", 1, 5),
    ("p1", "n: 2\nx1 + 3*x2\n", 2, 5),
    ("circuit", "(mod2 0 (term 1 (in 0))", 1, 23),
    ("circuit", "(mod2 0 (term 1 (foo 0)))", 1, 18),
    ("matrix", "q: 2\n[1,0;0]\n", 2, 1),
])
def test_errors_carry_positions(kind, text, line, col):
    with pytest.raises(ParseError) as info:
        parse(kind, text)
    assert (info.value.line, info.value.col) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


def test_parameter_mismatches():
    with pytest.raises(ParseError):
        parse("group-word", "kind: p1\nx1")
    with pytest.raises(ParseError):
        parse("group-word", "q: 5\nm: 2\nx1")
    with pytest.raises(ParseError):
        parse("p1", "x1")  # n is required
    with pytest.raises(ParseError):
        parse("nonsense")
