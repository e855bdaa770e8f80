import itertools

import pytest
from hypothesis import given, settings, strategies as st

from s4red.algebra import (
    ALPHA, ALPHA_SQ, SIGMA, FieldElement, Matrix, f4_matrix, f4_power, field, gl_enumerate,
    invertible_sum, mat_ring, parse_matrix, rank_normal_form,
)
from s4red.errors import DecompositionImpossible, ParseError

from helpers import all_matrices, f4_add, f4_mul, ref_add, ref_det, ref_mul, rows

I2 = Matrix.identity(2, 2)


def matrices(m, q):
    return st.tuples(*[st.integers(0, q - 1)] * (m * m)).map(lambda e: Matrix(q, m, e))


# ---------------------------------------------------------------- fields


@pytest.mark.parametrize("q", [2, 3])
def test_prime_field_tables_match_integer_arithmetic(q):
    F = field(q)
    for a, b in itertools.product(range(q), repeat=2):
        assert F.add(a, b) == (a + b) % q
        assert F.mul(a, b) == (a * b) % q


def test_f4_tables_match_polynomial_model():
    F = field(4)
    for a, b in itertools.product(range(4), repeat=2):
        assert F.add(a, b) == f4_add(a, b)
        assert F.mul(a, b) == f4_mul(a, b)


def test_f4_embedding_is_a_ring_homomorphism():
    for a, b in itertools.product(range(4), repeat=2):
        assert f4_matrix(f4_add(a, b)) == f4_matrix(a) + f4_matrix(b)
        assert f4_matrix(f4_mul(a, b)) == f4_matrix(a) * f4_matrix(b)


def test_f4_laws():
    one = FieldElement(1, 4)
    a = FieldElement(2, 4)
    assert a ** 3 == one
    assert one + a + a ** 2 == FieldElement(0, 4)
    for x in range(4):
        assert FieldElement(x, 4) + FieldElement(x, 4) == FieldElement(0, 4)


def test_f4_power_values():
    assert f4_power(0) == FieldElement(1, 4)
    assert f4_matrix(f4_power(1)) == Matrix.from_rows([[0, 1], [1, 1]], 2)
    assert f4_matrix(f4_power(1)) + f4_matrix(f4_power(2)) == I2
    assert f4_power(5) == f4_power(2)


def test_sigma_identities():
    assert SIGMA * SIGMA == I2
    assert SIGMA * ALPHA * SIGMA == ALPHA_SQ
    f4_images = {f4_matrix(x) for x in range(4)}
    for x in range(4):
        a = f4_matrix(x)
        assert SIGMA * a * SIGMA == a * a
        if x:
            assert SIGMA * a not in f4_images


def test_field_element_inverse_and_errors():
    for q in (2, 3, 4):
        for x in range(1, q):
            assert FieldElement(x, q) * FieldElement(x, q).inverse() == FieldElement(1, q)
    with pytest.raises(ZeroDivisionError):
        FieldElement(0, 3).inverse()
    with pytest.raises(ValueError):
        FieldElement(3, 3)
    with pytest.raises(ValueError):
        field(5)


# ---------------------------------------------------------------- matrices


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2)])
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_matrix_ops_match_reference(m, q, data):
    a = data.draw(matrices(m, q))
    b = data.draw(matrices(m, q))
    assert rows(a * b) == ref_mul(rows(a), rows(b), q)
    assert rows(a + b) == ref_add(rows(a), rows(b), q)
    assert a.is_invertible() == (ref_det(rows(a), q) != 0)


def test_identity_is_neutral_on_all_of_mat2_f2():
    for A in all_matrices(2, 2):
        assert I2 * A == A == A * I2


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2), (1, 3)])
def test_inverse_round_trip(m, q):
    ident = Matrix.identity(m, q)
    for A in gl_enumerate(m, q):
        assert A * A.inverse() == ident == A.inverse() * A


def test_singular_inverse_and_mismatch_errors():
    with pytest.raises(ZeroDivisionError):
        Matrix.zero(2, 2).inverse()
    with pytest.raises(ValueError):
        Matrix.identity(2, 2) + Matrix.identity(2, 3)
    with pytest.raises(ValueError):
        Matrix.identity(2, 2) * Matrix.identity(3, 2)
    with pytest.raises(ValueError):
        Matrix(2, 2, (0, 1, 2, 0))


def test_code_round_trip():
    for A in all_matrices(2, 3):
        assert Matrix.from_code(A.code, 2, 3) == A


# ---------------------------------------------------------------- GL enumeration


@pytest.mark.parametrize("m,q,count", [(1, 2, 1), (2, 2, 6), (2, 3, 48), (3, 2, 168), (2, 4, 180)])
def test_gl_enumerate_counts(m, q, count):
    gl = gl_enumerate(m, q)
    assert len(gl) == count
    assert [A.entries for A in gl] == sorted(A.entries for A in gl)


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2)])
def test_gl_enumerate_is_exactly_the_nonzero_determinants(m, q):
    expected = [A for A in all_matrices(m, q) if ref_det(rows(A), q)]
    assert gl_enumerate(m, q) == expected


def test_gl_enumerate_small_cases_and_errors():
    assert gl_enumerate(1, 2) == [Matrix(2, 1, (1,))]
    with pytest.raises(ValueError):
        gl_enumerate(4, 2)
    with pytest.raises(ValueError):
        gl_enumerate(2, 5)


def test_mat_ring_tables_agree_with_matrix_ops():
    R = mat_ring(2, 3)
    for a, b in [(0, 5), (17, 40), (80, 80), (33, 61)]:
        A, B = R.matrix(a), R.matrix(b)
        assert R.matrix(R.mul[a, b]) == A * B
        assert R.matrix(R.add[a, b]) == A + B


# ---------------------------------------------------------------- rank normal form


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2), (2, 4)])
def test_rank_normal_form_reconstructs(m, q):
    for A in all_matrices(m, q):
        nf = rank_normal_form(A)
        assert nf.P.is_invertible() and nf.Q.is_invertible()
        assert nf.reconstruct() == A
        assert nf.k == A.rank()


def test_rank_normal_form_extremes():
    assert rank_normal_form(Matrix.zero(3, 2)).k == 0
    assert rank_normal_form(Matrix.identity(3, 3)).k == 3


# ---------------------------------------------------------------- invertible sums


def test_invertible_sum_worked_decompositions():
    B, C = invertible_sum(Matrix.from_rows([[1, 0], [0, 0]], 2))
    assert (B, C) == (Matrix.from_rows([[0, 1], [1, 0]], 2), Matrix.from_rows([[1, 1], [1, 0]], 2))
    assert invertible_sum(I2) == (Matrix.from_rows([[0, 1], [1, 1]], 2), Matrix.from_rows([[1, 1], [1, 0]], 2))
    assert invertible_sum(Matrix.identity(3, 2)) == (
        Matrix.from_rows([[1, 0, 1], [0, 0, 1], [1, 1, 1]], 2),
        Matrix.from_rows([[0, 0, 1], [0, 1, 1], [1, 1, 0]], 2),
    )
    assert invertible_sum(Matrix.zero(2, 2)) == (I2, I2)
    assert invertible_sum(Matrix.zero(3, 2)) == (Matrix.identity(3, 2),) * 2


@pytest.mark.parametrize("m,q", [(2, 2), (2, 3), (3, 2), (1, 3), (2, 4)])
def test_invertible_sum_exhaustive(m, q):
    gl = set(gl_enumerate(m, q))
    for A in all_matrices(m, q):
        B, C = invertible_sum(A)
        assert B in gl and C in gl
        assert B + C == A


def test_invertible_sum_odd_characteristic_uses_scalar_two():
    A = Matrix.identity(2, 3)
    B, C = invertible_sum(A)
    assert B == Matrix.scalar(2, 2, 3)


def test_invertible_sum_excluded_case():
    with pytest.raises(DecompositionImpossible):
        invertible_sum(Matrix(2, 1, (1,)))
    B, C = invertible_sum(Matrix(2, 1, (0,)))
    assert B == C == Matrix(2, 1, (1,))


# ---------------------------------------------------------------- literals


def test_parse_matrix_literal():
    assert parse_matrix("[0,1;1,1]", 2) == ALPHA
    assert parse_matrix("[1, 2 ; 0, 1]", 3) == Matrix.from_rows([[1, 2], [0, 1]], 3)
    for bad in ["[1,0;0]", "[1,0;0,2]", "1,0;0,1", "[a,0;0,1]"]:
        with pytest.raises(ParseError):
            parse_matrix(bad, 2)
