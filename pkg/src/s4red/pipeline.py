"""Reductions between group-word problems over Hol(q, m) and restricted
polynomial equivalence over Mat_m(F_q).

* ``collect_to_inequalities``: a word equation w = 1 becomes a set E of
  restricted polynomials such that w = 1 is solvable iff some e in E is
  nonzero at some invertible point.
* ``combine_inequalities``: a disjunction of "p_i != 0" becomes a single
  "u != 0" with two switch variables per disjunct.
* ``respoleqv_to_poleqv``: restricted equivalence becomes word equivalence
  using the idempotent word e onto V.
* ``copoleqv_to_polsat``: "w != 1 somewhere" becomes a word equation using
  the collapse word f.
"""

from dataclasses import dataclass, field as dc_field
import itertools

import numpy as np

from .algebra import Matrix, invertible_sum
from .bounds import check_bound
from .holomorph import GroupWord, HolElement, hol_group_order, word_inverse
from .nearring import collapse_word, default_a, idempotent_word
from .respoly import (
    Polynomial, Product, Sum, conjunction_gadget, mat_ring, points_gl, zero_indicator,
)
from .errors import check_cap


@dataclass
class InequalitySet:
    """The set E with the index v of each member and the collected data."""

    q: int
    m: int
    n: int
    k: int  # word length
    l: int  # q**m
    entries: list  # (v, e_v) pairs
    collected: list  # p_0 monomial, then p_1 .. p_{n+l}
    vectors: list  # c_1 .. c_l
    checks: list = dc_field(default_factory=list)

    @property
    def polys(self):
        return [e for _, e in self.entries]

    @property
    def index_set(self):
        return [v for v, _ in self.entries]

    def __len__(self):
        return len(self.entries)

    def first_witness(self, cap=None):
        """First (v, Z) with e_v(Z) != 0 over GL^n, or None."""
        R = mat_ring(self.m, self.q)
        check_cap(len(self.entries) * len(R.gl) ** self.n, cap)
        for v, e in self.entries:
            for _, block in points_gl(self.n, self.q, self.m):
                hit = np.nonzero(e.values(block) != R.zero)[0]
                if hit.size:
                    return v, tuple(R.matrix(c) for c in block[hit[0]])
        return None

    def assignment(self, v, Z):
        """The holomorph assignment x_j = <v_j, Z_j> encoded by a witness."""
        return tuple(HolElement(v[j], Z[j]) for j in range(self.n))


def _first_column(vec, m, q):
    entries = [0] * (m * m)
    for i, x in enumerate(vec):
        entries[i * m] = x
    return Matrix(q, m, tuple(entries))


def index_set(n, q, m):
    """T: tuples of n vectors with at most q**m nonzero entries, by support size then lexicographic."""
    l = q**m
    vecs = list(itertools.product(range(q), repeat=m))
    zero = vecs[0]
    nonzero = vecs[1:]
    out = []
    for size in range(0, min(n, l) + 1):
        block = []
        for support in itertools.combinations(range(n), size):
            for vals in itertools.product(nonzero, repeat=size):
                v = [zero] * n
                for j, x in zip(support, vals):
                    v[j] = x
                block.append(tuple(v))
        out.extend(sorted(block))
    return out


def collect_to_inequalities(w):
    """Reduce the equation w = 1 to a set of inequalities e_v, one per index v."""
    q, m = w.q, w.m
    if (m, q) == (1, 2):
        raise ValueError("Hol(2,1) is excluded: (1) over F2 is not a sum of two units")
    ident = Matrix.identity(m, q)
    letters = list(w.letters) or [HolElement.identity(q, m)]
    n, k = w.n, len(letters)
    l = q**m
    vectors = list(itertools.product(range(q), repeat=m))
    # prefix monomials: I for the first letter, V_1 ... V_{i-1} afterwards
    mats = [x if not isinstance(x, HolElement) else x.A for x in letters]
    prefixes = [(ident,)] + [tuple(mats[:i]) for i in range(1, k)]
    var_terms = {j: [] for j in range(1, n + 1)}
    const_terms = {c: [] for c in vectors}
    for i, x in enumerate(letters):
        if isinstance(x, HolElement):
            const_terms[x.v].append(prefixes[i])
        else:
            var_terms[x].append(prefixes[i])
    p_vars = [Polynomial(var_terms[j], q, m, n) for j in range(1, n + 1)]
    p_consts = [Polynomial(const_terms[c], q, m, n) for c in vectors]
    p0 = tuple(mats)
    p0_minus = Polynomial([p0, (-ident,)], q, m, n)
    splits = {}

    def split(vec):
        if vec not in splits:
            M, N = invertible_sum(_first_column(vec, m, q))
            splits[vec] = Polynomial([(M,), (N,)], q, m)
        return splits[vec]

    entries = []
    for v in index_set(n, q, m):
        parts = []
        for j in range(n):
            if any(v[j]):
                parts.append(Product([p_vars[j], split(v[j])]).expand())
        for t, c in enumerate(vectors):
            parts.append(Product([p_consts[t], split(c)]).expand())
        b_v = Polynomial([mono for part in parts for mono in part.monomials()], q, m, n)
        entries.append((v, conjunction_gadget(b_v, p0_minus)))

    C = zero_indicator(m, q).length
    checks = [
        # the cardinality bound is applied with n >= 1 (it fails for n = 0)
        check_bound("inequality count", len(entries), (max(n, 1) * l) ** l),
    ]
    per_e = 2 * C**3 * (2 * k * k * (k + 1)) ** (2 * C)
    longest = max(e.length for _, e in entries)
    checks.append(check_bound("inequality length", longest, per_e))
    return InequalitySet(q, m, n, k, l, entries, [p0] + p_vars + p_consts, vectors, checks)


def combine_inequalities(ps, n=None):
    """u = sum_i (y_i1 + y_i2) p_i with fresh variables n+1 .. n+2k."""
    ps = list(ps)
    if not ps:
        raise ValueError("need at least one polynomial")
    q, m = ps[0].q, ps[0].m
    n = max(p.n for p in ps) if n is None else n
    terms = []
    for i, p in enumerate(ps, start=1):
        switch = Polynomial([(n + 2 * i - 1,), (n + 2 * i,)], q, m)
        terms.append(Product([switch, p]))
    u = Sum(terms, q, m)
    lengths = sum(p.length for p in ps)
    counts = sum(p.num_monomials for p in ps)
    u.checks = (
        check_bound("combined length (expansion count)", u.length, 2 * (lengths + counts)),
        # the literal bound 2k + 2 sum |p_i| only covers single-monomial p_i
        check_bound("combined length (stated bound)", u.length, 2 * len(ps) + 2 * lengths, strict=False),
    )
    u.fresh_start = n + 1
    return u


def polsat_to_respoleqv(w):
    """A restricted polynomial that is nonzero somewhere on GL iff w = 1 is solvable."""
    E = collect_to_inequalities(w)
    u = combine_inequalities(E.polys, n=E.n)
    u.inequalities = E
    u.checks = tuple(E.checks) + tuple(u.checks)
    return u


def _phi(mono):
    return tuple(HolElement((0,) * x.m, x) if isinstance(x, Matrix) else x for x in mono)


def respoleqv_to_poleqv(p, cap=None):
    """Word in n+1 variables that is identically 1 iff p vanishes on GL^n."""
    q, m = p.q, p.m
    if (q, m) != (2, 2):
        raise ValueError("the idempotent word e is only available for Hol(2,2)")
    poly = p if isinstance(p, Polynomial) else p.expand(cap)
    n = poly.n
    e = idempotent_word().substitute({1: GroupWord((n + 1,), q, m)})
    letters = []
    for mono in poly.monomials():
        head = GroupWord(_phi(mono), q, m, n)
        letters.extend(head.letters)
        letters.extend(e.letters)
        letters.extend(word_inverse(head).letters)
    check = check_bound("translated word length", len(letters),
                        (len(e) + hol_group_order(q, m)) * poly.length)
    return GroupWord(tuple(letters), q, m, n + 1, checks=(check,))


def copoleqv_to_polsat(w, a=None):
    """(w2, a) with w2 = a solvable iff w != 1 for some assignment."""
    if (w.q, w.m) != (2, 2):
        raise ValueError("the collapse word is only available for Hol(2,2)")
    a = a or default_a()
    f = collapse_word(a)
    n = w.n
    inner = f.substitute({1: w}, n=n)
    order = hol_group_order(w.q, w.m)
    letters = (n + 1,) + inner.letters + (n + 1,) * (order - 1)
    check = check_bound("collapse word length", len(letters), len(f) * max(len(w), 1) + order)
    return GroupWord(letters, w.q, w.m, n + 1, checks=(check,)), a
