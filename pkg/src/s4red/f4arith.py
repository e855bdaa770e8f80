"""The F4 arithmetic problem and its links to restricted polynomials over Mat2(F2).

An instance is a list of polynomials p_1..p_k over Z3 in n variables; it is
VALID when sum_i alpha**p_i(a) = 0 in F4 for every a in {-1, 1}^n.

Sign conventions: a sign s in {-1, 1} is the Z3 value 1 or 2 in polynomial
arithmetic, and the bit 0 or 1 at circuit boundaries (s = (-1)**bit).
``bit_to_z3`` and ``z3_to_bit`` are the only places that mapping lives.
"""

from dataclasses import dataclass
from functools import cache
import itertools

import numpy as np

from .algebra import ALPHA, GF4, SIGMA, Matrix, f4_matrix, gl_enumerate
from .errors import check_cap
from .respoly import Polynomial


def bit_to_z3(b):
    """Circuit bit -> sign as a Z3 value: 0 -> 1, 1 -> 2 (= -1)."""
    return 2 if b else 1


def z3_to_bit(s):
    """Sign as a Z3 value (or +-1 int) -> circuit bit."""
    s %= 3
    if s not in (1, 2):
        raise ValueError(f"{s} is not a sign")
    return 1 if s == 2 else 0


def sign_points(n):
    """All points of {0,1}^n as a (2^n, n) bit array, first variable most significant."""
    idx = np.arange(2**n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.int64)


class Z3Poly:
    """Polynomial over Z3 as {exponent tuple: coefficient in {1, 2}}.

    Variables are 0-based internally and printed as x1, x2, ...
    """

    __slots__ = ("n", "terms")

    def __init__(self, terms=None, n=0):
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise ValueError(f"exponent {e} does not have {n} entries")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            c = (clean.get(e, 0) + int(c)) % 3
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self.terms = clean

    @classmethod
    def const(cls, c, n=0):
        c = int(c) % 3
        return cls._raw({(0,) * n: c} if c else {}, n)

    @classmethod
    def var(cls, i, n):
        e = [0] * n
        e[i] = 1
        return cls({tuple(e): 1}, n)

    def _coerce(self, other):
        if isinstance(other, Z3Poly):
            if other.n != self.n:
                raise ValueError("arity mismatch")
            return other
        return Z3Poly.const(int(other), self.n)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            c = (out.get(e, 0) + c) % 3
            if c:
                out[e] = c
            else:
                out.pop(e, None)
        return Z3Poly._raw(out, self.n)

    __radd__ = __add__

    def __neg__(self):
        return Z3Poly._raw({e: (-c) % 3 for e, c in self.terms.items()}, self.n)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = (out.get(e, 0) + c1 * c2) % 3
        return Z3Poly(out, self.n)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Z3Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def evaluate(self, a):
        """Value at a point of Z3 values (signs may be given as +-1)."""
        if len(a) != self.n:
            raise ValueError(f"expected {self.n} values, got {len(a)}")
        a = [x % 3 for x in a]
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(a, e):
                t = t * pow(x, k, 3)
            total += t
        return total % 3

    def multilinear_reduce(self):
        """Remainder modulo x_i^2 - 1: exponents taken mod 2."""
        if all(x <= 1 for e in self.terms for x in e):
            return self
        out = {}
        for e, c in self.terms.items():
            key = tuple(x % 2 for x in e)
            out[key] = out.get(key, 0) + c
        return Z3Poly(out, self.n)

    def values(self, bits=None):
        """Values at all sign points (or the given (N, n) bit array) as Z3 ints."""
        if bits is None:
            bits = sign_points(self.n)
        N = bits.shape[0]
        if not self.terms:
            return np.zeros(N, dtype=np.int64)
        E = np.array([[x % 2 for x in e] for e in self.terms], dtype=np.int64).reshape(len(self.terms), self.n)
        C = np.array(list(self.terms.values()), dtype=np.int64)
        out = np.zeros(N, dtype=np.int64)
        step = max(1, (1 << 22) // max(1, len(C)))
        for s in range(0, N, step):
            par = (bits[s:s + step] @ E.T) & 1
            out[s:s + step] = np.where(par == 1, 3 - C, C).sum(axis=1) % 3
        return out

    @classmethod
    def _raw(cls, terms, n):
        """Trusted constructor: terms already reduced, coefficients in {1, 2}."""
        obj = cls.__new__(cls)
        obj.n = n
        obj.terms = terms
        return obj

    @classmethod
    def from_values(cls, values, n):
        """The multilinear polynomial with the given values on {-1,1}^n."""
        coeffs = multilinear_coefficients(np.asarray(values).reshape(1, -1), n)[0]
        return cls.from_coefficients(coeffs, n)

    @classmethod
    def from_coefficients(cls, coeffs, n, pts=None):
        """Multilinear polynomial from a coefficient vector indexed like sign_points(n)."""
        pts = sign_points(n) if pts is None else pts
        nz = np.nonzero(coeffs)[0]
        return cls._raw({tuple(pts[i].tolist()): int(coeffs[i]) for i in nz}, n)

    def extend(self, n_new, offset=0):
        """Same polynomial with variables moved to offset.. in n_new variables."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * n_new
            ne[offset:offset + self.n] = e
            out[tuple(ne)] = c
        return Z3Poly._raw(out, n_new)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), [-x for x in t[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = [str(c)] + [f"x{i + 1}" + (f"^{k}" if k != 1 else "") for i, k in enumerate(e) if k]
            parts.append("*".join(factors))
        return "+".join(parts)

    def __repr__(self):
        return f"Z3Poly({self}, n={self.n})"


def multilinear_coefficients(tables, n):
    """Batched interpolation: rows of values on {-1,1}^n to multilinear coefficients.

    A Walsh-Hadamard transform over Z3; the coefficient of prod_{i in S} x_i
    sits at the sign_points row whose bits mark S.
    """
    K = tables.shape[0]
    a = (np.asarray(tables, dtype=np.int64) % 3).reshape((K,) + (2,) * n)
    for axis in range(1, n + 1):
        lo = np.take(a, 0, axis=axis)
        hi = np.take(a, 1, axis=axis)
        a = np.stack([(lo + hi) % 3, (lo - hi) % 3], axis=axis)
    # divide by 2^n, i.e. multiply by (-1)^n in Z3
    return (a.reshape(K, -1) * (2 if n % 2 else 1)) % 3


def z3_evaluate(p, a):
    return p.evaluate(a)


def z3_multilinear_reduce(p):
    return p.multilinear_reduce()


@dataclass(frozen=True)
class P1Instance:
    polys: tuple
    n: int

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if any(p.n != self.n for p in self.polys):
            raise ValueError("all polynomials must have the same arity")

    @property
    def k(self):
        return len(self.polys)

    def values(self, bits=None):
        """F4 codes of sum_i alpha^p_i at all sign points."""
        codes = np.array([1, 2, 3], dtype=np.int64)
        if bits is None:
            bits = sign_points(self.n)
        acc = np.zeros(bits.shape[0], dtype=np.int64)
        for p in self.polys:
            acc ^= codes[p.values(bits)]
        return acc


def _alpha_code(t):
    return [1, 2, 3][t % 3]


def p1_evaluate(inst, a):
    """sum_i alpha^p_i(a) as an F4 code; a holds signs (+-1 or Z3 values)."""
    acc = 0
    for p in inst.polys:
        acc ^= _alpha_code(p.evaluate(a))
    return acc


def p1_equivalence_bruteforce(inst, cap=None):
    """None if the sum vanishes at every sign point, else the first bad point as +-1 ints."""
    check_cap(2**inst.n, cap)
    chunk = 1 << 16
    for start in range(0, 2**inst.n, chunk):
        idx = np.arange(start, min(start + chunk, 2**inst.n), dtype=np.int64)
        bits = ((idx[:, None] >> np.arange(inst.n - 1, -1, -1)) & 1).astype(np.int64)
        bad = np.nonzero(inst.values(bits))[0]
        if bad.size:
            return tuple(-1 if b else 1 for b in bits[bad[0]])
    return None


def p1_normalize(inst):
    """Merge terms whose exponents differ by a constant.

    alpha^(g + c) summed over a group of terms with the same non-constant
    part g is alpha^g times a fixed F4 element, which is 0 or a single
    power alpha^c.  Uses x + x = 0 and 1 + alpha + alpha^2 = 0, so the
    value at every sign point is unchanged.
    """
    groups = {}
    memo = {}
    zero = (0,) * inst.n
    for p in inst.polys:
        if id(p) not in memo:
            r = p.multilinear_reduce()
            memo[id(p)] = (frozenset((e, x) for e, x in r.terms.items() if e != zero), r.terms.get(zero, 0))
        rest, c = memo[id(p)]
        groups.setdefault(rest, [0, 0, 0])[c] ^= 1
    out = []
    for rest, parity in groups.items():
        # parity[c] of alpha^c terms; sum of the present powers
        total = 0
        for c in range(3):
            if parity[c]:
                total ^= _alpha_code(c)
        if total == 0:
            continue
        c = {1: 0, 2: 1, 3: 2}[total]
        terms = dict(rest)
        if c:
            terms[(0,) * inst.n] = c
        out.append(Z3Poly(terms, inst.n))
    return P1Instance(tuple(out), inst.n)


# ------------------------------------------------------------------ F4 pairs


def star_mul(a, b):
    """(a1 b1 + a2^2 b2, a1^2 b2 + a2 b1) on F4 pairs."""
    add, mul = GF4.add, GF4.mul
    a1, a2 = a
    b1, b2 = b
    return (add(mul(a1, b1), mul(mul(a2, a2), b2)), add(mul(mul(a1, a1), b2), mul(a2, b1)))


def pair_add(a, b):
    return (a[0] ^ b[0], a[1] ^ b[1])


def rho(a):
    """a1 + sigma a2 in Mat2(F2)."""
    return f4_matrix(a[0]) + SIGMA * f4_matrix(a[1])


def f_encode(s, t):
    """f(s, t) = (alpha^(s+t) + alpha^(2+t), alpha^(s+t) + alpha^(1+t)) for a sign s and t in Z3."""
    s %= 3
    if s not in (1, 2):
        raise ValueError("s must be a sign")
    return (_alpha_code(s + t) ^ _alpha_code(2 + t), _alpha_code(s + t) ^ _alpha_code(1 + t))


def sgn(x):
    """(-1)^i for x = sigma^i alpha^j in GL2(F2)."""
    for i, j in itertools.product(range(2), range(3)):
        if (SIGMA**i) * (ALPHA**j) == x:
            return -1 if i else 1
    raise ValueError(f"{x} is not in GL2(F2)")


@cache
def constant_signs():
    """For each c in GL2(F2), the first sign triple with rho(f(s1, s2 + s3)) = c."""
    out = {}
    for bits in itertools.product((0, 1), repeat=3):
        s = [bit_to_z3(b) for b in bits]
        c = rho(f_encode(s[0], s[1] + s[2]))
        out.setdefault(c, tuple(s))
    if set(out) != set(gl_enumerate(2, 2)):
        raise AssertionError("rho o f does not reach every invertible matrix")
    return out


def decode_signs(s1, s2, s3):
    """The matrix rho(f(s1, s2 + s3)) encoded by a sign triple."""
    return rho(f_encode(s1, s2 + s3))


def _uv_by_tables(poly, n):
    """u + v and v per monomial, as indices into a list of distinct polynomials.

    Evaluates every monomial on all 2^(3n) sign points at once (words are
    left-padded to equal length) and interpolates each distinct table.
    """
    N = 3 * n + 1
    z = np.array([bit_to_z3(b) for b in (0, 1)], dtype=np.int64)[sign_points(3 * n)]  # (P, 3n)
    signs = constant_signs()
    # letter id -> sign triple tables; id 0 pads words on the left (z1 = 1, z2 + z3 = 0)
    letters = {None: 0}
    rows = [np.stack([np.ones(z.shape[0], dtype=np.int64), np.zeros(z.shape[0], dtype=np.int64),
                      np.zeros(z.shape[0], dtype=np.int64)])]
    monos = list(poly.monomials())
    for mono in monos:
        for x in mono:
            if x not in letters:
                letters[x] = len(rows)
                if isinstance(x, Matrix):
                    rows.append(np.array(signs[x], dtype=np.int64)[:, None].repeat(z.shape[0], axis=1))
                else:
                    rows.append(z[:, 3 * (x - 1):3 * x].T.copy())
    T = np.stack(rows)  # (letters, 3, P)
    tables = {}
    keys = [None] * len(monos)
    order = sorted(range(len(monos)), key=lambda i: len(monos[i]))
    step = max(1, (1 << 22) // max(1, z.shape[0]))
    for s0 in range(0, len(order), step):
        idx = order[s0:s0 + step]
        width = max(len(monos[i]) for i in idx)
        ids = np.zeros((len(idx), width), dtype=np.int64)
        for r, i in enumerate(idx):
            ids[r, width - len(monos[i]):] = [letters[x] for x in monos[i]]
        v = np.zeros((len(idx), z.shape[0]), dtype=np.int64)
        suffix = np.ones_like(v)
        for col in range(width - 1, -1, -1):
            t = T[ids[:, col]]
            v = (v + (t[:, 1] + t[:, 2]) * suffix) % 3
            suffix = (suffix * t[:, 0]) % 3
        U = (suffix + v) % 3
        for r, i in enumerate(idx):
            pair = []
            for t in (U[r], v[r]):
                key = t.tobytes()
                if key not in tables:
                    tables[key] = (len(tables), t)
                pair.append(tables[key][0])
            keys[i] = pair
    polys = [None] * len(tables)
    if tables:
        rows = np.stack([t for _, t in tables.values()])
        coeffs = multilinear_coefficients(rows, 3 * n)
        pts = sign_points(3 * n)
        for i, row in enumerate(coeffs):
            polys[i] = Z3Poly.from_coefficients(row, 3 * n, pts).extend(N)
    return keys, polys


def _uv_symbolic(poly, n):
    """Same as _uv_by_tables by direct Z3 polynomial arithmetic; size stays
    linear in the word length, so it is used when 2^(3n) is too large."""
    N = 3 * n + 1
    signs = constant_signs()
    one = Z3Poly.const(1, N)
    polys, index, keys = [], {}, []

    def intern(t):
        k = frozenset(t.terms.items())
        if k not in index:
            index[k] = len(polys)
            polys.append(t)
        return index[k]

    for mono in poly.monomials():
        v = Z3Poly({}, N)
        suffix = one
        for x in reversed(mono):
            if isinstance(x, Matrix):
                z1, z2, z3 = (Z3Poly.const(s, N) for s in signs[x])
            else:
                z1, z2, z3 = (Z3Poly.var(3 * (x - 1) + j, N) for j in range(3))
            v = (v + (z2 + z3) * suffix).multilinear_reduce()
            suffix = (suffix * z1).multilinear_reduce()
        keys.append((intern(suffix + v), intern(v)))
    return keys, polys


TABLE_VARIABLES = 15


def respoly_to_p1(p, cap=None):
    """Problem-1 instance over 3n+1 sign variables, VALID iff p vanishes on GL2(F2)^n.

    Variable x_(k,j) for the k-th matrix variable is index 3(k-1) + (j-1);
    the selector variable is index 3n.  Each monomial y_1..y_l contributes
    eight exponents built from u = prod_i z_i1 and
    v = sum_i (z_i2 + z_i3) prod_{j>i} z_j1, where z_i is the sign triple of
    the variable or of the constant's encoding.  For small n, u and v are
    computed as value tables on the sign points and interpolated once per
    distinct table; otherwise symbolically.
    """
    if (p.q, p.m) != (2, 2):
        raise ValueError("restricted polynomial must be over Mat2(F2)")
    poly = p if isinstance(p, Polynomial) else p.expand(cap)
    n = poly.n
    N = 3 * n + 1
    if 3 * n <= TABLE_VARIABLES:
        keys, polys = _uv_by_tables(poly, n)
    else:
        keys, polys = _uv_symbolic(poly, n)
    X = Z3Poly.var(3 * n, N)
    made = {}

    def shifted(i, with_x, c):
        key = (i, with_x, c)
        if key not in made:
            made[key] = polys[i] + (X if with_x else 0) + c
        return made[key]

    out = []
    for iu, iv in keys:
        out.extend([
            shifted(iu, True, 0), shifted(iv, True, 2), shifted(iu, False, 1), shifted(iv, False, 0),  # (alpha^X + alpha) a_m
            shifted(iu, True, 0), shifted(iv, True, 1), shifted(iu, False, 2), shifted(iv, False, 0),  # (alpha^X + alpha^2) b_m
        ])
    return P1Instance(tuple(out), N)


def p1_to_respoly(inst):
    """s over Mat2(F2) with s(y) = sum_i alpha^p_i(sgn(y)); VALID iff s vanishes on GL."""
    n = inst.n
    I = Matrix.identity(2, 2)
    monos = []
    for p in inst.polys:
        word = []
        for e, c in p.sorted_terms():
            m_word = [i + 1 for i, k in enumerate(e) for _ in range(k)]
            for _ in range(c):  # a coefficient 2 monomial is written twice
                word.extend(m_word + [ALPHA] + m_word * 5)
        monos.append(tuple(word) if word else (I,))
    return Polynomial(monos, 2, 2, n)
