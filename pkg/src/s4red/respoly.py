"""Restricted polynomial expressions over Mat_m(F_q).

A monomial is a nonempty tuple of letters: a positive int is the variable
x_i and a Matrix is an invertible constant.  A polynomial is a formal sum
of monomials whose length is the total number of letters.

Expansions produced by the reductions get astronomically large, so besides
the explicit ``Polynomial`` there are lazy nodes (``Product``,
``Substitution``, ``Sum``).  Each node reports its exact expanded length
and monomial count by formula, evaluates pointwise with numpy ring tables,
and yields its monomials in stable left-to-right distribution order.
"""

from functools import cache
import heapq
import itertools
import math

import numpy as np

from .algebra import Matrix, field, mat_ring
from .bounds import check_bound
from .errors import CapExceeded, SearchFailed, check_cap, default_cap


def _is_var(x):
    return not isinstance(x, Matrix)


def monomial_str(mono):
    return " ".join(f"x{x}" if _is_var(x) else str(x) for x in mono)


class RestrictedPolynomial:
    """Common interface of explicit and lazy restricted polynomials."""

    q: int
    m: int
    checks = ()

    @property
    def n(self):
        return max(self.variables(), default=0)

    def monomials(self):
        raise NotImplementedError

    @property
    def length(self):
        raise NotImplementedError

    @property
    def num_monomials(self):
        raise NotImplementedError

    def variables(self):
        raise NotImplementedError

    def values(self, points):
        """Ring codes of p on an (N, k) array of ring codes, column i-1 for x_i."""
        raise NotImplementedError

    def ring(self):
        return mat_ring(self.m, self.q)

    def evaluate(self, assignment):
        """Value at a dict {i: Matrix} or a sequence x_1, x_2, ..."""
        R = self.ring()
        k = self.n
        row = []
        for i in range(1, k + 1):
            if isinstance(assignment, dict):
                val = assignment.get(i)
            else:
                val = assignment[i - 1] if i <= len(assignment) else None
            if val is None:
                if i in self.variables():
                    raise KeyError(f"variable x{i} is unbound")
                row.append(0)
                continue
            if (val.m, val.q) != (self.m, self.q):
                raise ValueError("dimension mismatch")
            row.append(val.code)
        pts = np.array([row], dtype=np.int64).reshape(1, k)
        return R.matrix(self.values(pts)[0])

    def expand(self, cap=None):
        cap = default_cap() if cap is None else cap
        if self.num_monomials > cap:
            raise CapExceeded(f"expansion has {self.num_monomials} monomials (cap {cap})")
        return Polynomial(tuple(self.monomials()), self.q, self.m, self.n)

    def __str__(self):
        if self.num_monomials > 10000:
            return f"<restricted polynomial: {self.num_monomials} monomials, length {self.length}>"
        mons = list(self.monomials())
        return " + ".join(monomial_str(m) for m in mons) if mons else "0"


class Polynomial(RestrictedPolynomial):
    """Explicit list of monomials."""

    def __init__(self, monomials, q=2, m=2, n=None):
        self.q = q
        self.m = m
        mons = []
        top = 0
        for mono in monomials:
            mono = tuple(mono)
            if not mono:
                raise ValueError("restricted monomials are nonempty")
            for x in mono:
                if isinstance(x, Matrix):
                    if (x.m, x.q) != (m, q):
                        raise ValueError(f"constant {x} is not in Mat_{m}(F_{q})")
                    if not x.is_invertible():
                        raise ValueError(f"constant {x} is not invertible")
                elif isinstance(x, (int, np.integer)) and x >= 1:
                    top = max(top, int(x))
                else:
                    raise ValueError(f"bad letter {x!r}")
            mons.append(tuple(int(x) if _is_var(x) else x for x in mono))
        self._monomials = tuple(mons)
        if n is not None and n < top:
            raise ValueError(f"polynomial uses x{top} but declares n={n}")
        self._n = top if n is None else n

    @classmethod
    def zero(cls, q=2, m=2, n=0):
        return cls((), q, m, n)

    @property
    def n(self):
        return self._n

    def monomials(self):
        return iter(self._monomials)

    @property
    def monomial_list(self):
        return self._monomials

    @property
    def length(self):
        return sum(len(mono) for mono in self._monomials)

    @property
    def num_monomials(self):
        return len(self._monomials)

    def variables(self):
        return {x for mono in self._monomials for x in mono if _is_var(x)}

    def values(self, points):
        R = self.ring()
        points = np.asarray(points, dtype=np.int64)
        total = np.zeros(points.shape[0], dtype=np.int64)
        for mono in self._monomials:
            acc = np.full(points.shape[0], R.one, dtype=np.int64)
            for x in mono:
                acc = R.mul[acc, points[:, x - 1] if _is_var(x) else x.code]
            total = R.add[total, acc]
        return total

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and (self.q, self.m, self.n) == (other.q, other.m, other.n)
                and self._monomials == other._monomials)

    def __hash__(self):
        return hash((self.q, self.m, self.n, self._monomials))

    def __repr__(self):
        return f"Polynomial({self})"


def _params(parts):
    qs = {(p.q, p.m) for p in parts}
    if len(qs) != 1:
        raise ValueError("restricted polynomials over different rings")
    return qs.pop()


class Sum(RestrictedPolynomial):
    """Formal sum: concatenation of monomial lists."""

    def __init__(self, parts, q=None, m=None):
        self.parts = tuple(parts)
        if self.parts:
            self.q, self.m = _params(self.parts)
        else:
            self.q, self.m = q or 2, m or 2

    def monomials(self):
        for p in self.parts:
            yield from p.monomials()

    @property
    def length(self):
        return sum(p.length for p in self.parts)

    @property
    def num_monomials(self):
        return sum(p.num_monomials for p in self.parts)

    def variables(self):
        return set().union(*(p.variables() for p in self.parts)) if self.parts else set()

    def values(self, points):
        R = self.ring()
        total = np.zeros(np.asarray(points).shape[0], dtype=np.int64)
        for p in self.parts:
            total = R.add[total, p.values(points)]
        return total


class Product(RestrictedPolynomial):
    """Distributed product p_1 * ... * p_k, first factor varying slowest."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("a product needs at least one factor")
        self.q, self.m = _params(self.factors)
        lens = [f.length for f in self.factors]
        bound = sum(lens) * math.prod(lens)
        self.checks = (check_bound("product expansion length", self.length, bound),)

    def monomials(self):
        lists = [list(f.monomials()) for f in self.factors]
        for combo in itertools.product(*lists):
            yield tuple(itertools.chain.from_iterable(combo))

    @property
    def length(self):
        counts = [f.num_monomials for f in self.factors]
        total = 0
        for i, f in enumerate(self.factors):
            total += f.length * math.prod(c for j, c in enumerate(counts) if j != i)
        return total

    @property
    def num_monomials(self):
        return math.prod(f.num_monomials for f in self.factors)

    def variables(self):
        return set().union(*(f.variables() for f in self.factors))

    def values(self, points):
        R = self.ring()
        acc = None
        for f in self.factors:
            v = f.values(points)
            acc = v if acc is None else R.mul[acc, v]
        return acc


class Substitution(RestrictedPolynomial):
    """outer(inner): the single variable of ``outer`` replaced by ``inner``."""

    def __init__(self, outer, inner):
        self.q, self.m = _params([outer, inner])
        vs = outer.variables()
        if len(vs) > 1:
            raise ValueError("the outer polynomial must use at most one variable")
        self.outer = outer if isinstance(outer, Polynomial) else outer.expand()
        self.inner = inner
        self.var = vs.pop() if vs else None
        lq, lp = self.outer.length, inner.length
        if lp > 0:
            bound = lq * lp**lq
            self.checks = (check_bound("composition expansion length", self.length, bound),)

    def _shape(self):
        for mono in self.outer.monomials():
            r = sum(1 for x in mono if _is_var(x))
            yield r, len(mono) - r

    def monomials(self):
        inner = list(self.inner.monomials())
        for mono in self.outer.monomials():
            choices = [inner if _is_var(x) else [(x,)] for x in mono]
            for combo in itertools.product(*choices):
                yield tuple(itertools.chain.from_iterable(combo))

    @property
    def num_monomials(self):
        N = self.inner.num_monomials
        return sum(N**r for r, _ in self._shape())

    @property
    def length(self):
        N, L = self.inner.num_monomials, self.inner.length
        return sum(N**r * c + (r * N ** (r - 1) * L if r else 0) for r, c in self._shape())

    def variables(self):
        return set(self.inner.variables()) if self.var is not None else set()

    def values(self, points):
        table = self.unary_table()
        if self.var is None:
            return np.full(np.asarray(points).shape[0], table[0], dtype=np.int64)
        return table[self.inner.values(points)]

    def unary_table(self):
        R = self.ring()
        k = self.var or 1
        pts = np.zeros((R.size, k), dtype=np.int64)
        pts[:, k - 1] = np.arange(R.size)
        return self.outer.values(pts)


# ------------------------------------------------------------------ public ops


def rp_evaluate(p, assignment):
    return p.evaluate(assignment)


def rp_expand_product(ps):
    """Lazy distributed product; call ``.expand()`` for explicit monomials."""
    return Product(ps)


def rp_substitute(q, p):
    return Substitution(q, p)


def constant(A):
    return Polynomial([(A,)], A.q, A.m)


def variable(i, q=2, m=2):
    return Polynomial([(i,)], q, m)


def points_gl(n, q, m, chunk=1 << 18):
    """Blocks of GL_m(F_q)^n as ring codes, lexicographic in gl order."""
    from .holomorph import assignment_chunks
    gl = mat_ring(m, q).gl
    for start, block in assignment_chunks(len(gl), n, chunk, values=gl):
        yield start, block


def restricted_equivalence_bruteforce(p, cap=None, n=None):
    """None when p vanishes on all of GL^n, otherwise the first nonzero point."""
    R = p.ring()
    n = p.n if n is None else n
    check_cap(len(R.gl) ** n, cap)
    for _, block in points_gl(n, p.q, p.m):
        bad = np.nonzero(p.values(block) != R.zero)[0]
        if bad.size:
            return tuple(R.matrix(c) for c in block[bad[0]])
    return None


# ------------------------------------------------------------------ linear algebra


class SpanSolver:
    """Incremental row echelon form over F_q with provenance tags."""

    def __init__(self, q):
        F = field(q)
        self.add, self.mul = F.add_table, F.mul_table
        self.neg, self.inv = F.neg_table, F.inv_table
        self.rows = {}  # pivot -> (row, combo dict tag -> coefficient)

    def _reduce(self, vec, combo):
        vec = vec.copy()
        while True:
            nz = np.nonzero(vec)[0]
            if nz.size == 0 or int(nz[0]) not in self.rows:
                return vec, combo, (int(nz[0]) if nz.size else None)
            piv = int(nz[0])
            row, rc = self.rows[piv]
            c = int(self.neg[vec[piv]])
            vec = self.add[vec, self.mul[c, row]]
            for t, x in rc.items():
                y = int(self.add[combo.get(t, 0), self.mul[c, x]])
                if y:
                    combo[t] = y
                else:
                    combo.pop(t, None)

    def insert(self, vec, tag):
        """Add a vector; returns True when the rank grows."""
        vec, combo, piv = self._reduce(np.asarray(vec, dtype=np.int64), {tag: 1})
        if piv is None:
            return False
        s = int(self.inv[vec[piv]])
        self.rows[piv] = (self.mul[s, vec], {t: int(self.mul[s, x]) for t, x in combo.items()})
        return True

    def solve(self, target):
        """Coefficients {tag: c} with sum c * vec_tag == target, or None."""
        vec, combo, piv = self._reduce(np.asarray(target, dtype=np.int64), {})
        if piv is not None:
            return None
        return {t: int(self.neg[c]) for t, c in combo.items()}

    @property
    def rank(self):
        return len(self.rows)


# ------------------------------------------------------------------ zero indicator


def _table_vector(table, R):
    return R.entries[table].reshape(-1)


@cache
def zero_indicator(m, q, cap=4096):
    """Unary f with f(0) = I and f(A) = 0 for every nonzero A in Mat_m(F_q).

    Monomial functions are explored in order of (x-degree, length), starting
    from x and the invertible constants and closing under right
    multiplication by a generator.  Each new function table joins an F_q
    basis of the function space; the search stops once the indicator table
    lies in the span, and the span coefficients give the polynomial.
    """
    if (m, q) == (1, 2):
        raise ValueError("no zero indicator over F2 itself (restricted polynomials vanish at 0)")
    R = mat_ring(m, q)
    ident = np.arange(R.size, dtype=np.int64)
    gens = [(1, ident)] + [(R.matrix(c), np.full(R.size, c, dtype=np.int64)) for c in R.gl]
    target = np.full(R.size, R.zero, dtype=np.int64)
    target[R.zero] = R.one
    target_vec = _table_vector(target, R)
    solver = SpanSolver(q)
    words = []
    seen = set()
    heap = []
    counter = itertools.count()
    for letter, table in gens:
        deg = 1 if _is_var(letter) else 0
        heapq.heappush(heap, (deg, 1, next(counter), (letter,), table))
    found = None
    while heap:
        deg, ln, _, word, table = heapq.heappop(heap)
        key = table.tobytes()
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > cap:
            raise SearchFailed(f"zero indicator for Mat_{m}(F_{q}) needs more than {cap} monomial functions")
        words.append(word)
        if solver.insert(_table_vector(table, R), len(words) - 1):
            found = solver.solve(target_vec)
            if found is not None:
                break
        for letter, gtable in gens:
            d = deg + (1 if _is_var(letter) else 0)
            heapq.heappush(heap, (d, ln + 1, next(counter), word + (letter,), R.mul[table, gtable]))
    if found is None:
        raise SearchFailed("monomial closure exhausted without reaching the zero indicator")
    monos = []
    for tag in sorted(found):
        c = found[tag]
        if c == 1:
            monos.append(words[tag])
        else:
            monos.append((Matrix.scalar(c, m, q),) + words[tag])
    f = Polynomial(monos, q, m, 1)
    pts = np.arange(R.size, dtype=np.int64).reshape(-1, 1)
    if not np.array_equal(f.values(pts), target):
        raise AssertionError("zero indicator table check failed")
    return f


def zero_indicator_constant(m, q):
    """C = |f| for the cached zero indicator."""
    return zero_indicator(m, q).length


def conjunction_gadget(p1, p2):
    """p3 = f(p1) f(p2): nonzero exactly where p1 and p2 both vanish."""
    q, m = _params([p1, p2])
    f = zero_indicator(m, q)
    p3 = Product([Substitution(f, p1), Substitution(f, p2)])
    C = f.length
    # a zero input contributes length 0; the bound is applied with |p| >= 1
    bound = 2 * C**3 * (max(p1.length, 1) * max(p2.length, 1)) ** (2 * C)
    p3.checks = p3.checks + (check_bound("conjunction gadget length", p3.length, bound),)
    return p3


# ------------------------------------------------------------------ collapse on GL


def _unique_rows(tables, counts, p):
    """Merge equal rows, adding counts mod p; drop rows with count 0."""
    uniq, first, inverse = np.unique(tables, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    tot = np.zeros(len(uniq), dtype=np.int64)
    np.add.at(tot, inverse, counts)
    tot %= p
    keep = np.nonzero(tot)[0]
    return uniq[keep], tot[keep], first[keep]


def _ring_coordinates(R, p):
    """(size, d) coordinates of ring elements over the prime field F_p."""
    flat = R.entries.reshape(R.size, -1).astype(np.int64)
    if R.q == p:
        return flat
    k = round(math.log(R.q, p))
    # prime-power fields use codes whose base-p digits add independently
    return np.concatenate([(flat // p**i) % p for i in range(k)], axis=1)


class _ModPBasis:
    """Row echelon basis over F_p built from chosen input rows, with the
    change of basis kept so targets can be written in the chosen rows."""

    def __init__(self, p, dim):
        self.p = p
        self.inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
        self.B = np.zeros((0, dim), dtype=np.int64)  # reduced rows, unit pivot columns
        self.T = np.zeros((0, 0), dtype=np.int64)  # B = T @ rows[chosen]
        self.pivots = []
        self.chosen = []

    def _reduce(self, X):
        if not self.pivots:
            return X % self.p
        return (X - X[:, self.pivots] @ self.B) % self.p

    def insert_rows(self, X, ids, batch=256):
        p = self.p
        for s in range(0, len(ids), batch):
            if len(self.pivots) == X.shape[1]:
                return
            Xr = self._reduce(X[s:s + batch])
            for i in np.nonzero(Xr.any(axis=1))[0]:
                x = X[s + i]
                x = self._reduce(x[None, :])[0]
                if not x.any():
                    continue
                t = (-(X[s + i][self.pivots] @ self.T)) % p if self.pivots else np.zeros(0, dtype=np.int64)
                t = np.append(t, 1)
                lead = int(np.nonzero(x)[0][0])
                c = self.inv[x[lead]]
                x = (x * c) % p
                t = (t * c) % p
                col = self.B[:, lead].copy()
                self.B = (self.B - np.outer(col, x)) % p
                self.T = np.hstack([self.T, np.zeros((len(self.T), 1), dtype=np.int64)])
                self.T = (self.T - np.outer(col, t)) % p
                self.B = np.vstack([self.B, x])
                self.T = np.vstack([self.T, t])
                self.pivots.append(lead)
                self.chosen.append(ids[s + i])

    def express(self, target):
        """{chosen id: coefficient} summing to target, which must lie in the span."""
        if self._reduce(target[None, :]).any():
            raise ArithmeticError("target outside the span")
        coeffs = (target[self.pivots] @ self.T) % self.p if self.pivots else []
        return {self.chosen[j]: int(c) for j, c in enumerate(coeffs) if c}


class _FunctionSum:
    """sum_t count_t * t over distinct monomial function tables t on a point set."""

    def __init__(self, tables, counts, reps):
        self.tables = tables  # (S, P) ring codes
        self.counts = counts  # (S,) in 1..p-1
        self.reps = reps  # list of monomials, one per row

    @classmethod
    def merge(cls, parts, p):
        parts = [x for x in parts if len(x.reps)]
        if not parts:
            return None
        tables = np.concatenate([x.tables for x in parts])
        counts = np.concatenate([x.counts for x in parts])
        reps = [r for x in parts for r in x.reps]
        t, c, first = _unique_rows(tables, counts, p)
        return cls(t, c, [reps[i] for i in first])

    def times(self, other, R, p, limit):
        S1, S2 = len(self.reps), len(other.reps)
        if S1 * S2 > limit:
            raise CapExceeded(f"collapse step would combine {S1 * S2} function pairs (limit {limit})")
        P = self.tables.shape[1]
        tables = R.mul[self.tables[:, None, :], other.tables[None, :, :]].reshape(S1 * S2, P)
        counts = (self.counts[:, None] * other.counts[None, :]).reshape(-1) % p
        t, c, first = _unique_rows(tables, counts, p)
        reps = [self.reps[i // S2] + other.reps[i % S2] for i in first]
        return _FunctionSum(t, c, reps)

    def span_reduce(self, R, p):
        """Same total function written with linearly independent tables.

        Function tables on P points live in an F_p space of dimension
        P * d, so at most that many monomials survive.
        """
        coords = _ring_coordinates(R, p)
        S, P = self.tables.shape
        if S <= 1:
            return self
        X = coords[self.tables].reshape(S, -1)
        if S <= X.shape[1] and S <= 64:
            return self
        total = (self.counts @ X) % p
        basis = _ModPBasis(p, X.shape[1])
        basis.insert_rows(X, list(range(S)))
        found = basis.express(total)
        keep = sorted(found)
        return _FunctionSum(self.tables[keep], np.array([found[i] for i in keep], dtype=np.int64),
                            [self.reps[i] for i in keep])


def _function_sum(node, points, R, p, limit):
    empty = _FunctionSum(np.zeros((0, points.shape[0]), dtype=np.int64), np.zeros(0, dtype=np.int64), [])
    if isinstance(node, Polynomial):
        if not node.num_monomials:
            return empty
        tables = np.stack([Polynomial([mono], node.q, node.m).values(points) for mono in node.monomial_list])
        t, c, first = _unique_rows(tables, np.ones(len(tables), dtype=np.int64), p)
        return _FunctionSum(t, c, [node.monomial_list[i] for i in first]).span_reduce(R, p)
    if isinstance(node, Sum):
        out = _FunctionSum.merge([_function_sum(x, points, R, p, limit) for x in node.parts], p)
        return out.span_reduce(R, p) if out else empty
    if isinstance(node, Product):
        acc = None
        for f in node.factors:
            fs = _function_sum(f, points, R, p, limit)
            acc = fs if acc is None else acc.times(fs, R, p, limit).span_reduce(R, p)
            if not len(acc.reps):
                return empty
        return acc
    if isinstance(node, Substitution):
        inner = _function_sum(node.inner, points, R, p, limit)
        pieces = []
        for mono in node.outer.monomials():
            acc = None
            for x in mono:
                if _is_var(x):
                    fs = inner
                else:
                    fs = _FunctionSum(np.full((1, points.shape[0]), x.code, dtype=np.int64),
                                      np.ones(1, dtype=np.int64), [(x,)])
                acc = fs if acc is None else acc.times(fs, R, p, limit).span_reduce(R, p)
                if not len(acc.reps):
                    acc = None
                    break
            if acc is not None:
                pieces.append(acc)
        out = _FunctionSum.merge(pieces, p)
        return out.span_reduce(R, p) if out else empty
    raise TypeError(f"cannot collapse {type(node).__name__}")


def collapse_on_gl(poly, n=None, limit=5 * 10**6):
    """An explicit polynomial equal to ``poly`` at every point of GL^n.

    Monomials inducing the same function on GL^n are merged and their
    multiplicities reduced modulo the characteristic, keeping one
    representative word per function.  Large sums are then rewritten over
    a linearly independent subset of their monomial tables, so no
    intermediate sum exceeds the dimension of the function space.  This is
    a pointwise identity on invertible inputs only, which is all that
    restricted equivalence sees.
    """
    n = poly.n if n is None else n
    R = poly.ring()
    p = field(poly.q).p
    check_cap(len(R.gl) ** n, 10**6)
    points = next(points_gl(n, poly.q, poly.m, chunk=len(R.gl) ** n + 1))[1]
    fs = _function_sum(poly, points, R, p, limit)
    monos = []
    for rep, c in zip(fs.reps, fs.counts):
        monos.extend([rep] * int(c))
    return Polynomial(monos, poly.q, poly.m, n)
