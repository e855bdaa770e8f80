"""Finite fields F2, F3, F4 and square matrices over them.

Field elements are small integer codes.  For F2 and F3 the code is the
residue.  F4 uses 0, 1, 2 = alpha, 3 = alpha^2 = 1 + alpha, so addition is
XOR of the codes.  A matrix is identified with an integer code: its
row-major entries read as a base-q number, first entry most significant.
"""

from dataclasses import dataclass
from functools import cache
import itertools
import re

import numpy as np

from .errors import DecompositionImpossible, ParseError


class Field:
    """A finite field given by addition and multiplication tables on codes."""

    def __init__(self, q, p, add, mul, name):
        self.q = q
        self.p = p  # characteristic
        self.name = name
        self.add_table = np.array(add, dtype=np.int64)
        self.mul_table = np.array(mul, dtype=np.int64)
        self._add = tuple(tuple(r) for r in add)
        self._mul = tuple(tuple(r) for r in mul)
        self._neg = tuple(next(b for b in range(q) if self._add[a][b] == 0) for a in range(q))
        self._inv = tuple(
            None if a == 0 else next(b for b in range(q) if self._mul[a][b] == 1) for a in range(q)
        )
        self.neg_table = np.array(self._neg, dtype=np.int64)
        self.inv_table = np.array([0 if x is None else x for x in self._inv], dtype=np.int64)

    @property
    def elements(self):
        return range(self.q)

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in {self.name}")
        return self._inv[a]

    def __repr__(self):
        return f"Field({self.name})"


def _prime_field(p):
    add = [[(a + b) % p for b in range(p)] for a in range(p)]
    mul = [[(a * b) % p for b in range(p)] for a in range(p)]
    return Field(p, p, add, mul, f"F{p}")


def _f4():
    # exponent of each nonzero code as a power of alpha
    log = {1: 0, 2: 1, 3: 2}
    exp = {0: 1, 1: 2, 2: 3}
    add = [[a ^ b for b in range(4)] for a in range(4)]
    mul = [[0 if a == 0 or b == 0 else exp[(log[a] + log[b]) % 3] for b in range(4)]
           for a in range(4)]
    return Field(4, 2, add, mul, "F4")


GF2 = _prime_field(2)
GF3 = _prime_field(3)
GF4 = _f4()
FIELDS = {2: GF2, 3: GF3, 4: GF4}

F4_ALPHA = 2
F4_ALPHA2 = 3


def field(q):
    try:
        return FIELDS[q]
    except KeyError:
        raise ValueError(f"unsupported field size q={q}; expected 2, 3 or 4") from None


@dataclass(frozen=True)
class FieldElement:
    value: int
    q: int

    def __post_init__(self):
        if not 0 <= self.value < field(self.q).q:
            raise ValueError(f"{self.value} is not an element code of F{self.q}")

    def _other(self, other):
        if isinstance(other, int):
            return other % self.q if self.q != 4 else other
        if other.q != self.q:
            raise ValueError("field mismatch")
        return other.value

    def __add__(self, other):
        return FieldElement(field(self.q).add(self.value, self._other(other)), self.q)

    def __sub__(self, other):
        return FieldElement(field(self.q).sub(self.value, self._other(other)), self.q)

    def __mul__(self, other):
        return FieldElement(field(self.q).mul(self.value, self._other(other)), self.q)

    def __neg__(self):
        return FieldElement(field(self.q).neg(self.value), self.q)

    def __pow__(self, k):
        F = field(self.q)
        if k < 0:
            return FieldElement(F.inv(self.value), self.q) ** (-k)
        out = 1
        for _ in range(k):
            out = F.mul(out, self.value)
        return FieldElement(out, self.q)

    def inverse(self):
        return FieldElement(field(self.q).inv(self.value), self.q)

    def __str__(self):
        if self.q == 4:
            return ["0", "1", "a", "a^2"][self.value]
        return str(self.value)


def f4_power(t):
    """alpha**t in F4; the exponent is read modulo 3."""
    return FieldElement([1, 2, 3][t % 3], 4)


@dataclass(frozen=True)
class Matrix:
    q: int
    m: int
    entries: tuple

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("matrix dimension must be at least 1")
        if len(self.entries) != self.m * self.m:
            raise ValueError(f"expected {self.m * self.m} entries, got {len(self.entries)}")
        F = field(self.q)
        if any(not (isinstance(x, (int, np.integer)) and 0 <= x < F.q) for x in self.entries):
            raise ValueError(f"entries must be element codes of F{self.q}: {self.entries}")
        object.__setattr__(self, "entries", tuple(int(x) for x in self.entries))

    # constructors
    @classmethod
    def from_rows(cls, rows, q):
        return cls(q, len(rows), tuple(x for r in rows for x in r))

    @classmethod
    def identity(cls, m, q):
        return cls(q, m, tuple(1 if i == j else 0 for i in range(m) for j in range(m)))

    @classmethod
    def zero(cls, m, q):
        return cls(q, m, (0,) * (m * m))

    @classmethod
    def scalar(cls, c, m, q):
        return cls(q, m, tuple(c if i == j else 0 for i in range(m) for j in range(m)))

    @classmethod
    def rank_diagonal(cls, k, m, q):
        """E_k: k leading ones on the diagonal, zeros elsewhere."""
        return cls(q, m, tuple(1 if i == j and i < k else 0 for i in range(m) for j in range(m)))

    @classmethod
    def from_code(cls, code, m, q):
        digits = []
        for _ in range(m * m):
            code, d = divmod(code, q)
            digits.append(d)
        if code:
            raise ValueError("matrix code out of range")
        return cls(q, m, tuple(reversed(digits)))

    @property
    def code(self):
        c = 0
        for x in self.entries:
            c = c * self.q + x
        return c

    @property
    def rows(self):
        m = self.m
        return tuple(self.entries[i * m:(i + 1) * m] for i in range(m))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.m + j]

    def _check(self, other):
        if not isinstance(other, Matrix) or other.q != self.q or other.m != self.m:
            raise ValueError(f"matrix mismatch: {self.m}x{self.m}/F{self.q} vs {other!r}")

    def __add__(self, other):
        self._check(other)
        F = field(self.q)
        return Matrix(self.q, self.m, tuple(F.add(a, b) for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._check(other)
        F = field(self.q)
        return Matrix(self.q, self.m, tuple(F.sub(a, b) for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        F = field(self.q)
        return Matrix(self.q, self.m, tuple(F.neg(a) for a in self.entries))

    def __mul__(self, other):
        F = field(self.q)
        if isinstance(other, FieldElement):
            other = other.value
        if isinstance(other, int):
            return Matrix(self.q, self.m, tuple(F.mul(other, a) for a in self.entries))
        self._check(other)
        m = self.m
        out = []
        for i in range(m):
            for j in range(m):
                s = 0
                for k in range(m):
                    s = F.add(s, F.mul(self.entries[i * m + k], other.entries[k * m + j]))
                out.append(s)
        return Matrix(self.q, m, tuple(out))

    def __rmul__(self, c):
        return self * c

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = Matrix.identity(self.m, self.q)
        for _ in range(k):
            out = out * self
        return out

    def apply(self, v):
        """Matrix times column vector (a tuple of field codes)."""
        F = field(self.q)
        m = self.m
        out = []
        for i in range(m):
            s = 0
            for k in range(m):
                s = F.add(s, F.mul(self.entries[i * m + k], v[k]))
            out.append(s)
        return tuple(out)

    def rank(self):
        return _echelon(self)[0]

    def is_invertible(self):
        return self.rank() == self.m

    def is_zero(self):
        return not any(self.entries)

    def inverse(self):
        F = field(self.q)
        m = self.m
        aug = [list(r) + [1 if i == j else 0 for j in range(m)] for i, r in enumerate(self.rows)]
        for col in range(m):
            piv = next((r for r in range(col, m) if aug[r][col]), None)
            if piv is None:
                raise ZeroDivisionError(f"singular matrix {self}")
            aug[col], aug[piv] = aug[piv], aug[col]
            s = F.inv(aug[col][col])
            aug[col] = [F.mul(s, x) for x in aug[col]]
            for r in range(m):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(aug[r], aug[col])]
        return Matrix(self.q, m, tuple(x for r in aug for x in r[m:]))

    def __str__(self):
        return "[" + ";".join(",".join(str(x) for x in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"Matrix(F{self.q}, {self})"


def _echelon(A):
    F = field(A.q)
    rows = [list(r) for r in A.rows]
    m = A.m
    rank = 0
    for col in range(m):
        piv = next((r for r in range(rank, m) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        s = F.inv(rows[rank][col])
        rows[rank] = [F.mul(s, x) for x in rows[rank]]
        for r in range(m):
            if r != rank and rows[r][col]:
                f = rows[r][col]
                rows[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank, rows


_LITERAL = re.compile(r"\[\s*([^\]]*)\]")


def parse_matrix(text, q, m=None):
    """Parse ``[a,b;c,d]`` (rows separated by ``;``)."""
    text = text.strip()
    mt = _LITERAL.fullmatch(text)
    if not mt:
        raise ParseError(f"not a matrix literal: {text!r}")
    rows = [r.split(",") for r in mt.group(1).split(";")]
    try:
        vals = [[int(x) for x in r] for r in rows]
    except ValueError:
        raise ParseError(f"non-integer entry in {text!r}") from None
    size = len(vals)
    if any(len(r) != size for r in vals):
        raise ParseError(f"matrix literal is not square: {text!r}")
    if m is not None and size != m:
        raise ParseError(f"expected a {m}x{m} matrix, got {text!r}")
    try:
        return Matrix.from_rows(vals, q)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# F4 inside Mat2(F2)
ALPHA = Matrix.from_rows([[0, 1], [1, 1]], 2)
ALPHA_SQ = Matrix.from_rows([[1, 1], [1, 0]], 2)
SIGMA = Matrix.from_rows([[0, 1], [1, 0]], 2)
F4_EMBEDDING = {
    0: Matrix.zero(2, 2),
    1: Matrix.identity(2, 2),
    2: ALPHA,
    3: ALPHA_SQ,
}


def f4_matrix(a):
    """Image of an F4 code (or FieldElement) in Mat2(F2)."""
    if isinstance(a, FieldElement):
        a = a.value
    return F4_EMBEDDING[a]


def _all_entry_arrays(m, q):
    n = q ** (m * m)
    codes = np.arange(n, dtype=np.int64)
    digits = np.empty((n, m * m), dtype=np.int64)
    for pos in range(m * m - 1, -1, -1):
        digits[:, pos] = codes % q
        codes //= q
    return digits.reshape(n, m, m)


def _determinants(E, q):
    """Leibniz determinants of a stack of matrices of element codes."""
    F = field(q)
    add, mul, neg = F.add_table, F.mul_table, F.neg_table
    n, m, _ = E.shape
    det = np.zeros(n, dtype=np.int64)
    for perm in itertools.permutations(range(m)):
        term = np.ones(n, dtype=np.int64)
        for i, j in enumerate(perm):
            term = mul[term, E[:, i, j]]
        inversions = sum(1 for a in range(m) for b in range(a + 1, m) if perm[a] > perm[b])
        if inversions % 2:
            term = neg[term]
        det = add[det, term]
    return det


def _check_supported(m, q):
    field(q)
    if not 1 <= m <= 3:
        raise ValueError(f"unsupported dimension m={m}; expected 1 <= m <= 3")


@cache
def gl_codes(m, q):
    """Codes of GL_m(F_q) in increasing order (lexicographic on entries)."""
    _check_supported(m, q)
    det = _determinants(_all_entry_arrays(m, q), q)
    return tuple(int(c) for c in np.nonzero(det)[0])


def gl_enumerate(m, q):
    """All invertible m x m matrices over F_q, lexicographic on row-major entries."""
    return [Matrix.from_code(c, m, q) for c in gl_codes(m, q)]


class MatRing:
    """Mat_m(F_q) with element codes and numpy operation tables."""

    TABLE_LIMIT = 1024

    def __init__(self, m, q):
        _check_supported(m, q)
        self.m = m
        self.q = q
        self.field = field(q)
        self.size = q ** (m * m)
        if self.size > self.TABLE_LIMIT:
            raise ValueError(f"Mat_{m}(F_{q}) has {self.size} elements; too large for tables")
        E = _all_entry_arrays(m, q)
        self.entries = E
        F = self.field
        weights = q ** np.arange(m * m - 1, -1, -1)
        flat = E.reshape(self.size, m * m)
        # addition: entrywise
        s = F.add_table[flat[:, None, :], flat[None, :, :]]
        self.add = (s * weights).sum(axis=2)
        prod = np.zeros((self.size, self.size, m, m), dtype=np.int64)
        for i in range(m):
            for j in range(m):
                acc = np.zeros((self.size, self.size), dtype=np.int64)
                for k in range(m):
                    acc = F.add_table[acc, F.mul_table[E[:, None, i, k], E[None, :, k, j]]]
                prod[:, :, i, j] = acc
        self.mul = (prod.reshape(self.size, self.size, m * m) * weights).sum(axis=2)
        self.neg = (F.neg_table[flat] * weights).sum(axis=1)
        self.zero = 0
        self.one = Matrix.identity(m, q).code
        self.gl = np.array(gl_codes(m, q), dtype=np.int64)

    def matrix(self, code):
        return Matrix.from_code(int(code), self.m, self.q)


@cache
def mat_ring(m, q):
    return MatRing(m, q)


@dataclass(frozen=True)
class RankNormalForm:
    P: Matrix
    k: int
    Q: Matrix

    def reconstruct(self):
        return self.P * Matrix.rank_diagonal(self.k, self.P.m, self.P.q) * self.Q


def rank_normal_form(A):
    """Invertible P, Q and the rank k with A = P E_k Q.

    Pivots are taken as the first nonzero entry of the remaining block in a
    column-major scan.  Row operations accumulate into R and column
    operations into S so that R A S = E_k; then P = R^-1 and Q = S^-1.
    """
    F = field(A.q)
    m = A.m
    M = [list(r) for r in A.rows]
    R = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    S = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    k = 0
    while k < m:
        piv = next(((i, j) for j in range(k, m) for i in range(k, m) if M[i][j]), None)
        if piv is None:
            break
        i, j = piv
        M[k], M[i] = M[i], M[k]
        R[k], R[i] = R[i], R[k]
        for row in M:
            row[k], row[j] = row[j], row[k]
        for row in S:
            row[k], row[j] = row[j], row[k]
        s = F.inv(M[k][k])
        M[k] = [F.mul(s, x) for x in M[k]]
        R[k] = [F.mul(s, x) for x in R[k]]
        for r in range(m):
            if r != k and M[r][k]:
                f = M[r][k]
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[k])]
                R[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[r], R[k])]
        for c in range(m):
            if c != k and M[k][c]:
                f = M[k][c]
                for row in M:
                    row[c] = F.sub(row[c], F.mul(f, row[k]))
                for row in S:
                    row[c] = F.sub(row[c], F.mul(f, row[k]))
        k += 1
    P = Matrix.from_rows(R, A.q).inverse()
    Q = Matrix.from_rows(S, A.q).inverse()
    return RankNormalForm(P, k, Q)


# invertible splittings of diagonal blocks over F2
_BLOCK_E1 = (((0, 1), (1, 0)), ((1, 1), (1, 0)))
_BLOCK_I2 = (((0, 1), (1, 1)), ((1, 1), (1, 0)))
_BLOCK_I3 = (((1, 0, 1), (0, 0, 1), (1, 1, 1)), ((0, 0, 1), (0, 1, 1), (1, 1, 0)))


def _block_diag(blocks, m, q):
    out = [[0] * m for _ in range(m)]
    pos = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[pos + i][pos + j] = x
        pos += len(b)
    assert pos == m
    return Matrix.from_rows(out, q)


def _e_k_split_f2(k, m):
    left, right = [], []
    if k == 1:
        if m == 1:
            raise DecompositionImpossible("(1) over F2 is not a sum of two units")
        left.append(_BLOCK_E1[0])
        right.append(_BLOCK_E1[1])
        used = 2
    else:
        used = 0
        if k % 2:
            left.append(_BLOCK_I3[0])
            right.append(_BLOCK_I3[1])
            used = 3
        while used < k:
            left.append(_BLOCK_I2[0])
            right.append(_BLOCK_I2[1])
            used += 2
    rest = m - used
    if rest:
        ident = tuple(tuple(1 if i == j else 0 for j in range(rest)) for i in range(rest))
        left.append(ident)
        right.append(ident)
    return _block_diag(left, m, 2), _block_diag(right, m, 2)


def invertible_sum(A):
    """Invertible B, C with A = B + C.

    Impossible only for the 1x1 matrix (1) over F2.
    """
    m, q = A.m, A.q
    if m == 1 and q == 2 and A.entries == (1,):
        raise DecompositionImpossible("(1) over F2 is not a sum of two invertible elements")
    nf = rank_normal_form(A)
    if q > 2:
        a = 2  # smallest code outside {0, 1}
        aI = Matrix.scalar(a, m, q)
        B = nf.P * aI * nf.Q
        C = nf.P * (Matrix.rank_diagonal(nf.k, m, q) - aI) * nf.Q
    else:
        L, Rt = _e_k_split_f2(nf.k, m)
        B = nf.P * L * nf.Q
        C = nf.P * Rt * nf.Q
    return B, C
