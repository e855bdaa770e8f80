"""Search for unary words over Hol(2,2) with prescribed function tables.

A unary word w(x) with constants induces a map G -> G; pointwise products
of such maps correspond to concatenation of words.  Two maps are needed by
the reductions:

* an idempotent e with image in V = {<v, I>} that fixes V pointwise, and
* for a in V \\ {1}, a map f that is the identity on V and constantly a
  elsewhere.

Plain breadth-first closure is tried first under a small budget.  It does
not reach either target at desk scale, so a staged search follows:
conjugated powers g x^k g^-1 ("blocks"), products of up to two blocks, then
pairs of such products whose quotient tables in G/V = GL_2(F_2) cancel.
The V-valued maps form an F_2 vector space (pointwise product is vector
addition), so targets are solved by linear algebra with bitset
provenance, after closing the span under conjugation by constants.
Every returned word is re-evaluated on all inputs before it is returned.
"""

from dataclasses import dataclass, field as dc_field
from functools import cache

import numpy as np

from .errors import SearchFailed
from .holomorph import GroupWord, HolElement, evaluate_indices, hol_group

DEFAULT_STATE_CAP = 10**7
BFS_BUDGET = 200_000


@dataclass(frozen=True)
class FunctionTable:
    q: int
    m: int
    table: tuple  # table[i] = index of the image of element i

    def group(self):
        return hol_group(self.q, self.m)

    def __call__(self, g):
        G = self.group()
        return G.element(self.table[G.index(g)])

    def compose(self, other):
        """(self o other)(g) = self(other(g))."""
        return FunctionTable(self.q, self.m, tuple(self.table[i] for i in other.table))

    def items(self):
        G = self.group()
        return [(G.element(i), G.element(j)) for i, j in enumerate(self.table)]


@dataclass(frozen=True)
class ProvenancedWord:
    word: GroupWord
    table: FunctionTable

    def verify(self):
        return word_table(self.word) == self.table


def word_table(word):
    """Induced map of a one-variable word, by evaluation on every element."""
    G = hol_group(word.q, word.m)
    if word.n > 1:
        raise ValueError("expected a word in the single variable x1")
    args = np.arange(G.order, dtype=np.int64).reshape(-1, 1)
    return FunctionTable(word.q, word.m, tuple(int(x) for x in evaluate_indices(word, args, G)))


def _provenanced(letters, q=2, m=2):
    w = GroupWord(tuple(letters), q, m, 1)
    return ProvenancedWord(w, word_table(w))


# ------------------------------------------------------------------ plain BFS


@dataclass
class Closure:
    tables: np.ndarray  # (S, |G|)
    parent: np.ndarray  # index of the prefix state, -1 for seeds
    letter: np.ndarray  # group index of the last letter, -1 for x
    truncated: bool
    states: int
    index: dict = dc_field(default_factory=dict)

    def word(self, i):
        G = hol_group(2, 2)
        out = []
        while i >= 0:
            c = int(self.letter[i])
            out.append(1 if c < 0 else G.element(c))
            i = int(self.parent[i])
        return GroupWord(tuple(reversed(out)), 2, 2, 1)

    def provenanced(self, i):
        return ProvenancedWord(self.word(i), FunctionTable(2, 2, tuple(int(x) for x in self.tables[i])))

    def __len__(self):
        return len(self.tables)

    def find(self, table):
        return self.index.get(np.asarray(table, dtype=np.int8).tobytes())


def unary_closure(cap=DEFAULT_STATE_CAP, q=2, m=2, stop=None):
    """Breadth-first closure of {x, constants} under right multiplication.

    States are distinct tables; each keeps the first (hence shortest) word
    found.  ``stop`` may be a predicate on a batch of tables returning a
    boolean mask; the search halts at the first level containing a hit.
    """
    if (q, m) != (2, 2):
        raise ValueError("unary closure is implemented for Hol(2,2)")
    if cap < 1:
        raise ValueError("cap must be positive")
    G = hol_group(q, m)
    mul = G.mul.astype(np.int64)
    N = G.order
    gens = np.vstack([np.arange(N)] + [np.full(N, c) for c in range(N)])
    gen_letter = np.array([-1] + list(range(N)))
    tables, parents, letters = [], [], []
    index = {}

    def add(batch, par, let):
        new = []
        for row, p_, l_ in zip(batch, par, let):
            key = row.astype(np.int8).tobytes()
            if key in index or len(index) >= cap:
                continue
            index[key] = len(tables)
            tables.append(row)
            parents.append(p_)
            letters.append(l_)
            new.append(index[key])
        return new

    states = 0
    frontier = add(gens, [-1] * len(gens), gen_letter)
    states += len(gens)
    truncated = False
    while frontier and not truncated:
        if stop is not None and np.any(stop(np.array([tables[i] for i in frontier]))):
            break
        F = np.array([tables[i] for i in frontier])
        batch = mul[F[:, None, :], gens[None, :, :]].reshape(-1, N)
        states += len(batch)
        par = np.repeat(frontier, len(gens))
        let = np.tile(gen_letter, len(frontier))
        frontier = add(batch, par, let)
        truncated = len(index) >= cap
    return Closure(np.array(tables), np.array(parents), np.array(letters), truncated, states, index)


# ------------------------------------------------------------------ target tests


def _v_mask(G):
    mask = np.zeros(G.order, dtype=bool)
    mask[G.V] = True
    return mask


def is_idempotent_onto_V(table, G=None):
    G = G or hol_group(2, 2)
    t = np.asarray(table)
    inV = _v_mask(G)
    return bool(inV[t].all() and np.array_equal(t[G.V], G.V))


def is_collapse_to(table, a_index, G=None):
    G = G or hol_group(2, 2)
    t = np.asarray(table)
    inV = _v_mask(G)
    return bool(np.array_equal(t[inV], np.nonzero(inV)[0]) and np.all(t[~inV] == a_index))


# ------------------------------------------------------------------ staged search


class _F2Basis:
    """Bitset echelon basis; combos are bitmasks over accepted generators."""

    def __init__(self):
        self.rows = {}
        self.accepted = []

    def reduce(self, v):
        c = 0
        while v:
            h = v.bit_length() - 1
            row = self.rows.get(h)
            if row is None:
                break
            v ^= row[0]
            c ^= row[1]
        return v, c

    def insert(self, v, payload):
        v, c = self.reduce(v)
        if not v:
            return False
        self.rows[v.bit_length() - 1] = (v, c ^ (1 << len(self.accepted)))
        self.accepted.append(payload)
        return True

    def solve(self, target):
        v, c = self.reduce(target)
        if v:
            return None
        return [self.accepted[i] for i in range(len(self.accepted)) if c >> i & 1]

    @property
    def rank(self):
        return len(self.rows)


class _Staged:
    def __init__(self, cap):
        G = hol_group(2, 2)
        self.G = G
        self.cap = cap
        self.states = 0
        self.mul = G.mul.astype(np.int64)
        self.inv = G.inv
        self.ngl = len(G.gl)
        self.gl_inv = np.array([self.G.index(HolElement((0, 0), A.inverse())) % self.ngl for A in G.gl])
        self._blocks()
        self._pairs()

    def _count(self, k):
        self.states += k
        if self.states > self.cap:
            raise SearchFailed(f"staged search exceeded the state cap {self.cap}")

    def _blocks(self):
        G, mul = self.G, self.mul
        N = G.order
        x = np.arange(N)
        powers = [np.full(N, G.identity), x]
        for _ in range(12):
            powers.append(mul[powers[-1], x])
        exponent = next(k for k in range(1, 13) if np.array_equal(powers[k], np.full(N, G.identity)))
        cands = []
        for g in range(N):
            gi = int(self.inv[g])
            for k in range(1, exponent):
                table = mul[mul[g, powers[k]], gi]
                if g == G.identity:
                    letters = (1,) * k
                else:
                    letters = (G.element(g),) + (1,) * k + (G.element(gi),)
                cands.append((len(letters), len(cands), table, letters))
        self._count(len(cands))
        cands.sort(key=lambda c: (c[0], c[1]))
        seen = {}
        for _, _, table, letters in cands:
            key = table.tobytes()
            if key not in seen:
                seen[key] = (table, letters)
        self.blocks = list(seen.values())

    def _pairs(self):
        mul = self.mul
        B = np.array([t for t, _ in self.blocks])
        words = [w for _, w in self.blocks]
        nb = len(B)
        prod = mul[B[:, None, :], B[None, :, :]].reshape(nb * nb, -1)
        self._count(nb * nb)
        lens = np.array([len(w) for w in words])
        tables = np.vstack([B, prod])
        plen = np.concatenate([lens, (lens[:, None] + lens[None, :]).reshape(-1)])
        order = np.argsort(plen, kind="stable")
        tables = tables[order]
        uniq, first = np.unique(tables, axis=0, return_index=True)
        first.sort()
        self.s2_tables = tables[first]
        self.s2_words = []
        for pos in order[first]:
            if pos < nb:
                self.s2_words.append(words[pos])
            else:
                i, j = divmod(pos - nb, nb)
                self.s2_words.append(words[i] + words[j])

    # -- direct join for e
    def direct_idempotent(self):
        G, mul, inv = self.G, self.mul, self.inv
        T = self.s2_tables
        quot = T % self.ngl
        Vi = G.V
        lens = np.array([len(w) for w in self.s2_words])
        key2 = {}
        for i in range(len(T)):
            k = quot[i].tobytes() + T[i, Vi].tobytes()
            key2.setdefault(k, i)
        need_q = self.gl_inv[quot]
        need_v = mul[inv[T[:, Vi]], Vi[None, :]]
        self._count(len(T))
        best = None
        for i in range(len(T)):
            j = key2.get(need_q[i].tobytes() + need_v[i].tobytes())
            if j is None:
                continue
            total = lens[i] + lens[j]
            if best is None or total < best[0]:
                best = (total, i, j)
        if best is None:
            return None
        _, i, j = best
        return self.s2_words[i] + self.s2_words[j]

    # -- span of V-valued maps
    def _vbits(self, table):
        v = table // self.ngl
        bits = 0
        for i, x in enumerate(v):
            bits |= int(x) << (2 * i)
        return bits

    def span(self):
        if hasattr(self, "_basis"):
            return self._basis
        G, mul = self.G, self.mul
        T = self.s2_tables
        quot = T % self.ngl
        buckets = {}
        for i in range(len(T)):
            buckets.setdefault(quot[i].tobytes(), []).append(i)
        identity_q = G.identity % self.ngl
        cands = []
        for key, members in buckets.items():
            need = self.gl_inv[np.frombuffer(key, dtype=quot.dtype)].tobytes()
            other = buckets.get(need)
            if not other:
                continue
            l0, o0 = members[0], other[0]
            pairs = [(l0, o) for o in other] + [(l, o0) for l in members[1:]]
            for l, o in pairs:
                cands.append((len(self.s2_words[l]) + len(self.s2_words[o]), l, o))
        self._count(len(cands))
        cands.sort()
        basis = _F2Basis()
        seen = set()
        for _, l, o in cands:
            table = mul[T[l], T[o]]
            assert np.all(table % self.ngl == identity_q)
            bits = self._vbits(table)
            if bits in seen:
                continue
            seen.add(bits)
            basis.insert(bits, self.s2_words[l] + self.s2_words[o])
        # close under pointwise conjugation by constants
        grew = True
        while grew:
            grew = False
            for letters in list(basis.accepted):
                for g in range(G.order):
                    if g == G.identity:
                        continue
                    gi = int(self.inv[g])
                    w = (G.element(g),) + letters + (G.element(gi),)
                    table = np.array(word_table(GroupWord(w, 2, 2, 1)).table)
                    self._count(1)
                    if basis.insert(self._vbits(table), w):
                        grew = True
        self._basis = basis
        return basis

    def solve_restricted(self, positions, target_table):
        """Combination whose table agrees with target_table at the given inputs."""
        basis = self.span()
        sub = _F2Basis()
        for letters in basis.accepted:
            table = np.array(word_table(GroupWord(letters, 2, 2, 1)).table)
            sub.insert(self._restrict(table, positions), letters)
        return sub.solve(self._restrict(np.asarray(target_table), positions))

    def _restrict(self, table, positions):
        v = table // self.ngl
        bits = 0
        for k, i in enumerate(positions):
            bits |= int(v[i]) << (2 * k)
        return bits


@cache
def _staged(cap):
    return _Staged(cap)


def _bfs_attempt(predicate, budget):
    """predicate maps an (S, |G|) batch of tables to a boolean mask."""
    clo = unary_closure(cap=budget, stop=predicate)
    hits = np.nonzero(predicate(clo.tables))[0]
    if hits.size:
        return clo.provenanced(int(hits[0])), clo.states
    return None, clo.states


def _idempotent_mask(batch, G):
    inV = _v_mask(G)
    return inV[batch].all(axis=1) & (batch[:, G.V] == G.V).all(axis=1)


def _collapse_mask(batch, a_index, G):
    inV = _v_mask(G)
    return (batch[:, inV] == np.nonzero(inV)[0]).all(axis=1) & (batch[:, ~inV] == a_index).all(axis=1)


def _combine(parts):
    letters = []
    for p in parts:
        letters.extend(p)
    return tuple(letters)


@cache
def find_idempotent_onto_V(cap=DEFAULT_STATE_CAP, bfs_budget=BFS_BUDGET):
    """Word e(x) with e(G) inside V and e(h) = h for h in V."""
    G = hol_group(2, 2)
    found, states = _bfs_attempt(lambda b: _idempotent_mask(b, G), min(bfs_budget, cap))
    if found is None:
        staged = _staged(cap)
        letters = staged.direct_idempotent()
        if letters is None:
            target = np.arange(G.order)
            parts = staged.solve_restricted(list(G.V), target)
            if parts is None:
                raise SearchFailed("no idempotent onto V in the searched span")
            letters = _combine(parts)
        found = _provenanced(letters)
        states += staged.states
    if not (found.verify() and is_idempotent_onto_V(found.table.table, G)):
        raise AssertionError("idempotent word failed re-verification")
    return SearchResult(found, states)


@cache
def find_collapse_to_a(a, cap=DEFAULT_STATE_CAP, bfs_budget=BFS_BUDGET):
    """Word f(x) with f = id on V and f = a off V, for a in V \\ {1}."""
    G = hol_group(2, 2)
    ai = G.index(a)
    if ai not in set(G.V.tolist()) or ai == G.identity:
        raise ValueError("a must be a nonidentity element of V")
    found, states = _bfs_attempt(lambda b: _collapse_mask(b, ai, G), min(bfs_budget, cap))
    if found is None:
        staged = _staged(cap)
        target = np.full(G.order, ai)
        target[G.V] = G.V
        parts = staged.solve_restricted(list(range(G.order)), target)
        if parts is None:
            raise SearchFailed("no collapse word in the searched span")
        found = _provenanced(_combine(parts))
        states += staged.states
    if not (found.verify() and is_collapse_to(found.table.table, ai, G)):
        raise AssertionError("collapse word failed re-verification")
    return SearchResult(found, states)


@dataclass(frozen=True)
class SearchResult:
    word: ProvenancedWord
    states: int


def default_a():
    """The first nonidentity element of V in enumeration order."""
    G = hol_group(2, 2)
    return G.element(next(int(i) for i in G.V if i != G.identity))


def idempotent_word():
    return find_idempotent_onto_V().word.word


def collapse_word(a=None):
    return find_collapse_to_a(a or default_a()).word.word
