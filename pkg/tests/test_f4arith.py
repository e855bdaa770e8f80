import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from s4red import f4arith
from s4red.algebra import ALPHA, Matrix, SIGMA, f4_matrix, gl_enumerate
from s4red.errors import CapExceeded
from s4red.f4arith import (
    P1Instance, Z3Poly, bit_to_z3, constant_signs, decode_signs, f_encode, multilinear_coefficients,
    p1_equivalence_bruteforce, p1_evaluate, p1_normalize, p1_to_respoly, respoly_to_p1, rho, sgn,
    sign_points, star_mul, z3_evaluate, z3_multilinear_reduce, z3_to_bit,
)
from s4red.respoly import Polynomial, restricted_equivalence_bruteforce, rp_evaluate

from helpers import f4_add, f4_alpha_power, f4_mul, make_rng, random_p1, random_poly

I2 = Matrix.identity(2, 2)
GL = gl_enumerate(2, 2)
PAIRS = list(itertools.product(range(4), repeat=2))


def ref_z3(terms, a):
    return sum(c * math.prod(x**k for x, k in zip(a, e)) for e, c in terms.items()) % 3


def ref_p1(inst, a):
    acc = 0
    for p in inst.polys:
        acc = f4_add(acc, f4_alpha_power(ref_z3(p.terms, a)))
    return acc


def signs(n):
    return list(itertools.product((1, -1), repeat=n))


z3polys = st.integers(0, 3).flatmap(lambda n: st.dictionaries(
    st.tuples(*[st.integers(0, 4)] * n), st.integers(1, 2), max_size=5).map(lambda t: Z3Poly(t, n)))


# ---------------------------------------------------------------- sign conventions


def test_sign_conversions():
    assert [bit_to_z3(b) for b in (0, 1)] == [1, 2]
    assert [z3_to_bit(s) for s in (1, 2, -1)] == [0, 1, 1]
    with pytest.raises(ValueError):
        z3_to_bit(0)
    assert sign_points(2).tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]


# ---------------------------------------------------------------- Z3 polynomials


def test_constant_and_square():
    for c in range(3):
        assert z3_evaluate(Z3Poly.const(c, 2), (1, -1)) == c
    sq = Z3Poly({(2,): 1}, 1)
    red = z3_multilinear_reduce(sq)
    assert red == Z3Poly.const(1, 1)
    for a in (1, -1):
        assert z3_evaluate(sq, (a,)) == z3_evaluate(red, (a,)) == 1


@settings(max_examples=200, deadline=None)
@given(z3polys)
def test_reduce_preserves_values(p):
    red = p.multilinear_reduce()
    assert all(x <= 1 for e in red.terms for x in e)
    for a in signs(p.n):
        assert z3_evaluate(p, a) == z3_evaluate(red, a) == ref_z3(p.terms, a)
    bits = sign_points(p.n)
    assert p.values(bits).tolist() == [ref_z3(p.terms, [(-1) ** b for b in row]) for row in bits]


@settings(max_examples=100, deadline=None)
@given(z3polys)
def test_interpolation_round_trip(p):
    red = p.multilinear_reduce()
    assert Z3Poly.from_values(p.values(), p.n) == red
    assert multilinear_coefficients(p.values().reshape(1, -1), p.n).shape == (1, 2**p.n)


def test_polynomial_arithmetic():
    x, y = Z3Poly.var(0, 2), Z3Poly.var(1, 2)
    p = (x + y) * (x - y)
    assert p == x * x - y * y
    assert (p + 3).terms == p.terms
    assert (x + x + x).is_zero()
    with pytest.raises(ValueError):
        x + Z3Poly.var(0, 3)
    with pytest.raises(ValueError):
        z3_evaluate(x, (1,))


# ---------------------------------------------------------------- the F4 sum


def test_p1_examples():
    consts = P1Instance(tuple(Z3Poly.const(c, 1) for c in range(3)), 1)
    assert p1_equivalence_bruteforce(consts) is None
    single = P1Instance((Z3Poly.const(0, 1),), 1)
    assert p1_equivalence_bruteforce(single) == (1,)
    x = Z3Poly.var(0, 1)
    assert p1_equivalence_bruteforce(P1Instance((x, x), 1)) is None


def test_p1_evaluation_matches_reference():
    rng = make_rng(30)
    for _ in range(60):
        inst = random_p1(rng, rng.randint(0, 4))
        vals = inst.values()
        for a in signs(inst.n):
            assert p1_evaluate(inst, a) == ref_p1(inst, a)
        assert vals.tolist() == [ref_p1(inst, a) for a in signs(inst.n)]


def test_p1_cap():
    with pytest.raises(CapExceeded):
        p1_equivalence_bruteforce(P1Instance((Z3Poly.const(0, 30),), 30), cap=1000)


def test_normalize_preserves_values():
    rng = make_rng(31)
    for _ in range(60):
        inst = random_p1(rng, rng.randint(0, 4), max_k=8)
        norm = p1_normalize(inst)
        assert norm.k <= inst.k
        assert np.array_equal(norm.values(), inst.values())


# ---------------------------------------------------------------- pairs, rho and f


def ref_star(a, b):
    a1, a2 = a
    b1, b2 = b
    return (f4_add(f4_mul(a1, b1), f4_mul(f4_mul(a2, a2), b2)),
            f4_add(f4_mul(f4_mul(a1, a1), b2), f4_mul(a2, b1)))


def test_rho_values():
    assert rho((1, 0)) == I2
    assert rho((0, 1)) == SIGMA
    assert rho((2, 0)) == ALPHA


def test_rho_is_a_ring_isomorphism():
    images = {rho(a) for a in PAIRS}
    assert len(images) == 16
    for a, b in itertools.product(PAIRS, repeat=2):
        assert star_mul(a, b) == ref_star(a, b)
        assert rho(star_mul(a, b)) == rho(a) * rho(b)
        assert rho((a[0] ^ b[0], a[1] ^ b[1])) == rho(a) + rho(b)


def test_f_on_signs():
    for t in range(3):
        assert f_encode(1, t) == (f4_alpha_power(t), 0)
        assert f_encode(-1, t) == (0, f4_alpha_power(t))
    with pytest.raises(ValueError):
        f_encode(0, 1)


def test_f_image_is_gl():
    image = {rho(f_encode(s, t)) for s in (1, -1) for t in range(3)}
    assert image == set(GL) and len(image) == 6


def test_f_multiplication_rule():
    for r, s in itertools.product((1, -1), repeat=2):
        for u, v in itertools.product(range(3), repeat=2):
            assert star_mul(f_encode(r, u), f_encode(s, v)) == f_encode(r * s, s * u + v)


def test_f_product_of_sequences():
    rng = make_rng(32)
    for _ in range(200):
        k = rng.randint(1, 8)
        ss = [rng.choice((1, -1)) for _ in range(k)]
        ts = [rng.randrange(3) for _ in range(k)]
        acc = f_encode(ss[0], ts[0])
        for s, t in zip(ss[1:], ts[1:]):
            acc = star_mul(acc, f_encode(s, t))
        # f(s1 ... sk, sum_i t_i prod_{j > i} s_j)
        total = sum(t * math.prod(ss[i + 1:]) for i, t in enumerate(ts))
        assert acc == f_encode(math.prod(ss), total % 3)


def test_sgn_is_multiplicative():
    assert [sgn(A) for A in [I2, ALPHA, ALPHA * ALPHA]] == [1, 1, 1]
    assert sgn(SIGMA) == -1
    for A, B in itertools.product(GL, repeat=2):
        assert sgn(A * B) == sgn(A) * sgn(B)
    with pytest.raises(ValueError):
        sgn(Matrix.zero(2, 2))


def test_constant_sign_triples():
    table = constant_signs()
    assert set(table) == set(GL)
    for c, (s1, s2, s3) in table.items():
        assert decode_signs(s1, s2, s3) == c
        assert rho(f_encode(s1, s2 + s3)) == c


# ---------------------------------------------------------------- restricted polynomials to the F4 problem


def valid_p1(inst):
    return p1_equivalence_bruteforce(inst) is None


def test_zero_polynomial_gives_empty_instance():
    inst = respoly_to_p1(Polynomial.zero())
    assert inst.k == 0 and valid_p1(inst)


def test_sixth_power_instance_is_valid():
    inst = respoly_to_p1(Polynomial([(1,) * 6, (I2,)]))
    assert inst.n == 4
    assert valid_p1(inst)


def test_invalid_polynomial_instance_has_counterexample():
    inst = respoly_to_p1(Polynomial([(1,), (I2,)]))
    assert not valid_p1(inst)


def test_respoly_to_p1_random():
    rng = make_rng(33)
    for _ in range(40):
        n = rng.randint(0, 2)
        p = random_poly(rng, n, 3, 4)
        inst = respoly_to_p1(p)
        assert inst.n == 3 * n + 1
        assert inst.k == 8 * p.num_monomials
        assert valid_p1(inst) == (restricted_equivalence_bruteforce(p, n=n) is None)


def test_respoly_to_p1_routes_agree(monkeypatch):
    rng = make_rng(34)
    polys = [random_poly(rng, rng.randint(0, 2), 3, 4) for _ in range(15)]
    by_tables = [respoly_to_p1(p) for p in polys]
    monkeypatch.setattr(f4arith, "TABLE_VARIABLES", -1)
    symbolic = [respoly_to_p1(p) for p in polys]
    for a, b in zip(by_tables, symbolic):
        assert a.k == b.k
        assert np.array_equal(a.values(), b.values())
        assert [x.multilinear_reduce() for x in a.polys] == [x.multilinear_reduce() for x in b.polys]


# ---------------------------------------------------------------- the F4 problem to restricted polynomials


def test_constants_instance_gives_valid_polynomial():
    inst = P1Instance(tuple(Z3Poly.const(c, 0) for c in range(3)), 0)
    s = p1_to_respoly(inst)
    assert s.num_monomials == 3
    assert restricted_equivalence_bruteforce(s) is None


def test_single_variable_instance():
    s = p1_to_respoly(P1Instance((Z3Poly.var(0, 1),), 1))
    assert list(s.monomials()) == [(1, ALPHA, 1, 1, 1, 1, 1)]
    for y in GL:
        value = rp_evaluate(s, [y])
        assert value == f4_matrix(f4_alpha_power(1 if sgn(y) == 1 else 2))
        assert not value.is_zero()


def test_coefficient_two_is_written_twice():
    s = p1_to_respoly(P1Instance((Z3Poly({(1,): 2}, 1),), 1))
    assert s.length == 2 * 7


def test_p1_to_respoly_random():
    rng = make_rng(35)
    for _ in range(60):
        inst = random_p1(rng, rng.randint(0, 2), max_k=3)
        s = p1_to_respoly(inst)
        assert (restricted_equivalence_bruteforce(s, n=inst.n) is None) == valid_p1(inst)
