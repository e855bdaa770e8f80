"""Independent reference arithmetic and random instance generators for the tests.

Nothing here calls into the package's arithmetic: matrices are nested
lists reduced mod p, F4 elements are pairs (a, b) meaning a + b*t with
t^2 = t + 1, and permutations are plain tuples.
"""

import itertools
import random

from s4red.algebra import Matrix, gl_enumerate
from s4red.circuits import CCCircuit, InputWire, ModGate
from s4red.f4arith import P1Instance, Z3Poly
from s4red.holomorph import GroupWord, HolElement, hol_group
from s4red.respoly import Polynomial


# ---------------------------------------------------------------- prime field matrices


def ref_mul(a, b, p):
    m = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(m)) % p for j in range(m)] for i in range(m)]


def ref_add(a, b, p):
    return [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(a, b)]


def ref_det(a, p):
    m = len(a)
    total = 0
    for perm in itertools.permutations(range(m)):
        sign = 1
        for i in range(m):
            for j in range(i + 1, m):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(m):
            term *= a[i][perm[i]]
        total += term
    return total % p


def rows(M):
    return [list(r) for r in M.rows]


def all_matrices(m, q):
    for entries in itertools.product(range(q), repeat=m * m):
        yield Matrix(q, m, entries)


# ---------------------------------------------------------------- F4 as F2[t]/(t^2 + t + 1)

# code -> (a, b) for a + b t; the package codes 0, 1, alpha, alpha^2
F4_PAIRS = {0: (0, 0), 1: (1, 0), 2: (0, 1), 3: (1, 1)}
PAIR_CODES = {v: k for k, v in F4_PAIRS.items()}


def f4_add(x, y):
    a, b = F4_PAIRS[x]
    c, d = F4_PAIRS[y]
    return PAIR_CODES[((a + c) % 2, (b + d) % 2)]


def f4_mul(x, y):
    a, b = F4_PAIRS[x]
    c, d = F4_PAIRS[y]
    # (a + bt)(c + dt) = ac + (ad + bc) t + bd (t + 1)
    return PAIR_CODES[((a * c + b * d) % 2, (a * d + b * c + b * d) % 2)]


def f4_alpha_power(t):
    out = 1
    for _ in range(t % 3):
        out = f4_mul(out, 2)
    return out


# ---------------------------------------------------------------- permutations of 1..4


def perm_compose(p, q):
    """(p q)(i) = p(q(i)) on tuples of images."""
    return tuple(p[q[i] - 1] for i in range(4))


def affine_perm(g):
    """The permutation of the labels 1=00, 2=01, 3=10, 4=11 induced by u -> A u + v."""
    A = rows(g.A)
    out = []
    for i in range(1, 5):
        u = ((i - 1) >> 1 & 1, (i - 1) & 1)
        img = tuple((A[r][0] * u[0] + A[r][1] * u[1] + g.v[r]) % 2 for r in range(2))
        out.append(1 + 2 * img[0] + img[1])
    return tuple(out)


# ---------------------------------------------------------------- random instances


def random_element(rng, q=2, m=2):
    return rng.choice(hol_group(q, m).elements)


def random_word(rng, n, length, q=2, m=2, const_prob=0.5):
    letters = []
    for _ in range(length):
        if n == 0 or rng.random() < const_prob:
            letters.append(random_element(rng, q, m))
        else:
            letters.append(rng.randint(1, n))
    return GroupWord(tuple(letters), q, m, n)


def random_assignment(rng, n, q=2, m=2):
    return tuple(random_element(rng, q, m) for _ in range(n))


def random_monomial(rng, n, max_len, q=2, m=2, const_prob=0.5):
    gl = gl_enumerate(m, q)
    length = rng.randint(1, max_len)
    return tuple(rng.choice(gl) if n == 0 or rng.random() < const_prob else rng.randint(1, n)
                 for _ in range(length))


def random_poly(rng, n, max_terms, max_len, q=2, m=2, allow_zero=True):
    k = rng.randint(0 if allow_zero else 1, max_terms)
    return Polynomial([random_monomial(rng, n, max_len, q, m) for _ in range(k)], q, m, n)


def random_z3poly(rng, n, max_terms=4, max_exp=2):
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        e = tuple(rng.randint(0, max_exp) for _ in range(n))
        terms[e] = rng.randint(1, 2)
    return Z3Poly(terms, n)


def random_p1(rng, n, max_k=3, max_terms=3):
    k = rng.randint(1, max_k)
    return P1Instance(tuple(random_z3poly(rng, n, max_terms) for _ in range(k)), n)


def random_matrix(rng, q=2, m=2):
    return Matrix(q, m, tuple(rng.randrange(q) for _ in range(m * m)))


def random_circuit(rng, m, width=3, fan=3):
    """A random shape-(2,3,2) circuit, sometimes with wires directly under upper gates."""
    def wire():
        return InputWire(rng.randrange(m))

    def bottom():
        kids = [(rng.randint(1, 2), wire()) for _ in range(rng.randint(0, fan))]
        return ModGate(2, rng.randint(0, 1), kids)

    def middle():
        kids = [(rng.randint(0, 3), bottom() if rng.random() < 0.8 else wire()) for _ in range(rng.randint(0, fan))]
        return ModGate(3, rng.randint(0, 2), kids)

    kids = [(rng.randint(0, 2), middle() if rng.random() < 0.85 else wire()) for _ in range(rng.randint(0, width))]
    return CCCircuit(ModGate(2, rng.randint(0, 1), kids), (2, 3, 2), m)


FIELDS = [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (2, 3)]


def random_instance(rng, kind):
    """One random instance of a text-format kind, over a random small field where that applies."""
    q, m = rng.choice(FIELDS)
    if kind == "matrix":
        return random_matrix(rng, q, m)
    if kind == "group-word":
        return random_word(rng, rng.randint(0, 3), rng.randint(0, 10), q, m)
    if kind == "restricted-poly":
        return random_poly(rng, rng.randint(0, 3), 4, 4, q, m)
    if kind == "p1":
        return random_p1(rng, rng.randint(0, 4), max_k=4, max_terms=4)
    if kind == "circuit":
        return random_circuit(rng, rng.randint(1, 6))
    raise ValueError(kind)


def hol_identity():
    return HolElement.identity(2, 2)


def make_rng(seed):
    return random.Random(seed)


def ref_poly_value(monomials, point, p=2, m=2):
    """Sum of monomial products at ``point`` (x_i -> nested list), all mod p."""
    total = [[0] * m for _ in range(m)]
    for mono in monomials:
        acc = [[int(i == j) for j in range(m)] for i in range(m)]
        for x in mono:
            acc = ref_mul(acc, rows(x) if isinstance(x, Matrix) else point[x - 1], p)
        total = ref_add(total, acc, p)
    return total
