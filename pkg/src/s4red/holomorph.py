"""The holomorph Hol(q, m) = F_q^m semidirect GL_m(F_q), words over it, and S4.

An element <v, A> acts on F_q^m by u -> A u + v, and the product
<v, A><w, B> = <v + A w, A B> is composition with the right factor applied
first.  Group words mix constants with variables x1..xn; brute-force
oracles evaluate a word on every assignment with numpy lookup tables.
"""

from dataclasses import dataclass, field as dc_field
from functools import cache
import itertools
import re

import numpy as np

from .algebra import Matrix, field, gl_codes, gl_enumerate
from .errors import check_cap

# ---------------------------------------------------------------- elements


@dataclass(frozen=True)
class HolElement:
    v: tuple
    A: Matrix

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(int(x) for x in self.v))
        if len(self.v) != self.A.m:
            raise ValueError("vector length does not match matrix dimension")
        if any(not 0 <= x < self.A.q for x in self.v):
            raise ValueError(f"vector entries must lie in F{self.A.q}")

    @property
    def q(self):
        return self.A.q

    @property
    def m(self):
        return self.A.m

    @classmethod
    def identity(cls, q, m):
        return cls((0,) * m, Matrix.identity(m, q))

    def is_identity(self):
        return not any(self.v) and self.A == Matrix.identity(self.m, self.q)

    def __mul__(self, other):
        return hol_mul(self, other)

    def inverse(self):
        return hol_inverse(self)

    def __str__(self):
        return "[" + ",".join(map(str, self.v)) + ";" + ",".join(map(str, self.A.entries)) + "]"


def _vec_add(q, a, b):
    F = field(q)
    return tuple(F.add(x, y) for x, y in zip(a, b))


def hol_mul(g, h):
    if (g.q, g.m) != (h.q, h.m):
        raise ValueError("holomorph parameter mismatch")
    return HolElement(_vec_add(g.q, g.v, g.A.apply(h.v)), g.A * h.A)


def hol_inverse(g):
    Ai = g.A.inverse()
    F = field(g.q)
    return HolElement(tuple(F.neg(x) for x in Ai.apply(g.v)), Ai)


def hol_product(gs):
    """Product of a nonempty list via <sum_i (A_1...A_{i-1}) v_i, A_1...A_k>."""
    gs = list(gs)
    if not gs:
        raise ValueError("hol_product needs at least one element")
    q, m = gs[0].q, gs[0].m
    prefix = Matrix.identity(m, q)
    vec = (0,) * m
    for g in gs:
        if (g.q, g.m) != (q, m):
            raise ValueError("holomorph parameter mismatch")
        vec = _vec_add(q, vec, prefix.apply(g.v))
        prefix = prefix * g.A
    return HolElement(vec, prefix)


# ---------------------------------------------------------------- group tables


def _vectors(q, m):
    return list(itertools.product(range(q), repeat=m))


class HolGroup:
    """Hol(q, m) with elements indexed in (vector, matrix) lexicographic order."""

    TABLE_LIMIT = 2000

    def __init__(self, q, m):
        self.q = q
        self.m = m
        self.vectors = _vectors(q, m)
        self.gl = gl_enumerate(m, q)
        self.elements = [HolElement(v, A) for v in self.vectors for A in self.gl]
        self.order = len(self.elements)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self.identity = self._index[HolElement.identity(q, m)]
        ident = Matrix.identity(m, q)
        self.V = np.array([self._index[HolElement(v, ident)] for v in self.vectors], dtype=np.int64)
        self.mul = None
        self.inv = None
        if self.order <= self.TABLE_LIMIT:
            self._build_tables()

    def _build_tables(self):
        n = self.order
        ngl = len(self.gl)
        gl_index = {A.code: i for i, A in enumerate(self.gl)}
        # matrix products and matrix-vector actions on indices
        mat_mul = np.empty((ngl, ngl), dtype=np.int64)
        for i, A in enumerate(self.gl):
            for j, B in enumerate(self.gl):
                mat_mul[i, j] = gl_index[(A * B).code]
        vindex = {v: i for i, v in enumerate(self.vectors)}
        act = np.empty((ngl, len(self.vectors)), dtype=np.int64)
        for i, A in enumerate(self.gl):
            for j, v in enumerate(self.vectors):
                act[i, j] = vindex[A.apply(v)]
        vadd = np.empty((len(self.vectors),) * 2, dtype=np.int64)
        for i, a in enumerate(self.vectors):
            for j, b in enumerate(self.vectors):
                vadd[i, j] = vindex[_vec_add(self.q, a, b)]
        idx = np.arange(n)
        gv, ga = idx // ngl, idx % ngl
        # <v,A><w,B> = <v + A w, A B>
        vv = vadd[gv[:, None], act[ga[:, None], gv[None, :]]]
        aa = mat_mul[ga[:, None], ga[None, :]]
        dtype = np.int16 if n < 2**15 else np.int32
        self.mul = (vv * ngl + aa).astype(dtype)
        self.inv = np.argmax(self.mul == self.identity, axis=1).astype(np.int64)

    def index(self, g):
        return self._index[g]

    def element(self, i):
        return self.elements[int(i)]

    def in_V(self, i):
        return self.elements[int(i)].A == Matrix.identity(self.m, self.q)


@cache
def hol_group(q, m):
    return HolGroup(q, m)


# ---------------------------------------------------------------- words


@dataclass(frozen=True)
class GroupWord:
    """Letters are positive ints (variable x_i) or HolElement constants."""

    letters: tuple
    q: int = 2
    m: int = 2
    n: int = None
    checks: tuple = dc_field(default=(), compare=False, repr=False)

    def __post_init__(self):
        letters = tuple(self.letters)
        object.__setattr__(self, "letters", letters)
        top = 0
        for x in letters:
            if isinstance(x, HolElement):
                if (x.q, x.m) != (self.q, self.m):
                    raise ValueError("constant from a different holomorph")
            elif isinstance(x, (int, np.integer)) and x >= 1:
                top = max(top, int(x))
            else:
                raise ValueError(f"bad letter {x!r}")
        n = top if self.n is None else self.n
        if n < top:
            raise ValueError(f"word uses x{top} but declares n={n}")
        object.__setattr__(self, "n", n)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other):
        if (self.q, self.m) != (other.q, other.m):
            raise ValueError("holomorph parameter mismatch")
        return GroupWord(self.letters + other.letters, self.q, self.m, max(self.n, other.n))

    def variables(self):
        return sorted({x for x in self.letters if not isinstance(x, HolElement)})

    def substitute(self, images, n=None):
        """Replace variable x_i by the word images[i] (a dict or 1-based sequence)."""
        out = []
        for x in self.letters:
            if isinstance(x, HolElement):
                out.append(x)
            else:
                img = images[x] if isinstance(images, dict) else images[x - 1]
                out.extend(img.letters)
        top = max([x for x in out if not isinstance(x, HolElement)], default=0)
        return GroupWord(tuple(out), self.q, self.m, max(top, n or 0))

    def __str__(self):
        return " ".join(f"x{x}" if not isinstance(x, HolElement) else str(x) for x in self.letters)


def _lookup(a, i):
    if isinstance(a, dict):
        if i not in a:
            raise KeyError(f"variable x{i} is unbound")
        return a[i]
    if i > len(a):
        raise KeyError(f"variable x{i} is unbound")
    return a[i - 1]


def word_evaluate(w, a=()):
    """Value of w when x_i takes a[i-1] (or a[i] for a dict)."""
    vals = [x if isinstance(x, HolElement) else _lookup(a, x) for x in w.letters]
    if not vals:
        return HolElement.identity(w.q, w.m)
    return hol_product(vals)


def word_inverse(w):
    """Symbolic inverse: reverse, invert constants, x -> x^(|G|-1)."""
    order = hol_group_order(w.q, w.m)
    out = []
    for x in reversed(w.letters):
        if isinstance(x, HolElement):
            out.append(hol_inverse(x))
        else:
            out.extend([x] * (order - 1))
    return GroupWord(tuple(out), w.q, w.m, w.n)


def hol_group_order(q, m):
    return q**m * len(gl_codes(m, q))


def equation_word(lhs, rhs):
    """Normalize the equation lhs = rhs to the single word lhs * rhs^-1."""
    return lhs + word_inverse(rhs)


# ---------------------------------------------------------------- vectorized evaluation


def compile_word(w, group=None):
    """Letters as ints: constants become group indices >= 0, x_i becomes -i."""
    group = group or hol_group(w.q, w.m)
    return [group.index(x) if isinstance(x, HolElement) else -int(x) for x in w.letters]


def evaluate_indices(w, assignments, group=None):
    """Evaluate w on a batch of assignments given as an (N, n) index array."""
    group = group or hol_group(w.q, w.m)
    mul = group.mul
    assignments = np.asarray(assignments, dtype=np.int64)
    N = assignments.shape[0]
    acc = np.full(N, group.identity, dtype=np.int64)
    pending = None  # merged run of constants
    for c in compile_word(w, group):
        if c >= 0:
            pending = c if pending is None else int(mul[pending, c])
            continue
        if pending is not None:
            acc = mul[acc, pending]
            pending = None
        acc = mul[acc, assignments[:, -c - 1]]
    if pending is not None:
        acc = mul[acc, pending]
    return acc.astype(np.int64)


def assignment_chunks(base, n, chunk=1 << 18, values=None):
    """Yield (start, (k, n) array) blocks of all base**n tuples in lexicographic order."""
    total = base**n
    shape = (base,) * n
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        if n == 0:
            block = np.zeros((1, 0), dtype=np.int64)
        else:
            block = np.stack(np.unravel_index(np.arange(start, stop), shape), axis=1)
        if values is not None:
            block = np.asarray(values)[block]
        yield start, block


def polsat_bruteforce(w, target=None, cap=None):
    """First assignment (tuple of HolElement) with w = target, or None if UNSAT."""
    group = hol_group(w.q, w.m)
    t = group.identity if target is None else group.index(target)
    check_cap(group.order**w.n, cap)
    for _, block in assignment_chunks(group.order, w.n):
        hits = np.nonzero(evaluate_indices(w, block, group) == t)[0]
        if hits.size:
            return tuple(group.element(i) for i in block[hits[0]])
    return None


def poleqv_bruteforce(w, cap=None):
    """None if w = 1 under every assignment, else the first counterexample."""
    group = hol_group(w.q, w.m)
    check_cap(group.order**w.n, cap)
    for _, block in assignment_chunks(group.order, w.n):
        bad = np.nonzero(evaluate_indices(w, block, group) != group.identity)[0]
        if bad.size:
            return tuple(group.element(i) for i in block[bad[0]])
    return None


# ---------------------------------------------------------------- short subproducts


def short_subproduct(gs, a):
    """Indices i_1 < ... < i_r, r < |G|, whose product of gs equals a.

    Walks the prefix products; whenever one repeats, the segment between
    the two equal prefixes multiplies to 1 and is deleted.  The surviving
    prefixes are pairwise distinct, so at most |G| - 1 indices remain.
    """
    gs = list(gs)
    if not gs:
        if not a.is_identity():
            raise ValueError("empty product is the identity")
        return []
    if hol_product(gs) != a:
        raise ValueError("the elements do not multiply to a")
    one = HolElement.identity(a.q, a.m)
    idx = []
    prefixes = [one]
    seen = {one: 0}
    for i, g in enumerate(gs):
        p = prefixes[-1] * g
        if p in seen:
            cut = seen[p]
            for q in prefixes[cut + 1:]:
                del seen[q]
            del idx[cut:]
            del prefixes[cut + 1:]
            continue
        idx.append(i)
        prefixes.append(p)
        seen[p] = len(idx)
    return idx


# ---------------------------------------------------------------- S4


@dataclass(frozen=True)
class Perm:
    """A permutation of {1, 2, 3, 4}; images[i-1] is the image of i."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        if sorted(self.images) != [1, 2, 3, 4]:
            raise ValueError(f"not a permutation of 1..4: {self.images}")

    def __call__(self, i):
        return self.images[i - 1]

    def __mul__(self, other):
        # (p q)(i) = p(q(i)): the right factor acts first
        return Perm(tuple(self(other(i)) for i in range(1, 5)))

    def inverse(self):
        out = [0] * 4
        for i, j in enumerate(self.images, start=1):
            out[j - 1] = i
        return Perm(tuple(out))

    @classmethod
    def identity(cls):
        return cls((1, 2, 3, 4))

    @classmethod
    def from_cycles(cls, text):
        """Parse cycle notation such as ``(1 2)(3 4)`` or ``()``."""
        text = text.strip()
        if not re.fullmatch(r"(\(\s*[1-4]?(\s*[, ]\s*[1-4])*\s*\))+", text):
            raise ValueError(f"bad cycle notation {text!r}")
        p = cls.identity()
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(t) for t in re.split(r"[\s,]+", body.strip()) if t]
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle {body!r}")
            img = list(range(1, 5))
            for i, x in enumerate(pts):
                img[x - 1] = pts[(i + 1) % len(pts)]
            # cycles written left to right compose right to left
            p = p * Perm(tuple(img))
        return p

    def cycles(self):
        seen, out = set(), []
        for i in range(1, 5):
            if i in seen or self(i) == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(out) or "()"

    def __str__(self):
        return self.cycles()


def _label_vec(i):
    # 1 = 00, 2 = 01, 3 = 10, 4 = 11
    return ((i - 1) >> 1 & 1, (i - 1) & 1)


def _vec_label(v):
    return 1 + 2 * v[0] + v[1]


def s4_iso(p):
    """The affine map of F2^2 that moves the labelled points like p."""
    v = _label_vec(p(1))
    c1 = _vec_add(2, _label_vec(p(3)), v)  # image of e1 = (1,0)
    c2 = _vec_add(2, _label_vec(p(2)), v)  # image of e2 = (0,1)
    A = Matrix.from_rows([[c1[0], c2[0]], [c1[1], c2[1]]], 2)
    if not A.is_invertible():
        raise AssertionError("affine image is not invertible")
    return HolElement(v, A)


def s4_iso_inv(g):
    if (g.q, g.m) != (2, 2):
        raise ValueError("S4 corresponds to Hol(2,2) only")
    return Perm(tuple(_vec_label(_vec_add(2, g.A.apply(_label_vec(i)), g.v)) for i in range(1, 5)))


def all_perms():
    return [Perm(p) for p in itertools.permutations(range(1, 5))]
