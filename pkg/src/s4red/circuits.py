"""CC circuits built from Mod gates, and their links to the F4 problem.

A gate Mod_n(c + sum_i k_i * child_i) outputs 1 iff n divides the sum.
Wires are 0-based input bits.  Evaluation of large circuits is done level
by level with sparse matrices over a batch of inputs.
"""

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import check_cap
from .f4arith import P1Instance, Z3Poly, multilinear_coefficients, sign_points


@dataclass(frozen=True)
class InputWire:
    index: int


@dataclass(frozen=True)
class ModGate:
    modulus: int
    const: int
    children: tuple = ()  # of (coefficient, node)

    def __post_init__(self):
        object.__setattr__(self, "children", tuple((int(c), ch) for c, ch in self.children))


@dataclass(frozen=True)
class CCCircuit:
    root: ModGate
    shape: tuple
    num_inputs: int

    def __post_init__(self):
        object.__setattr__(self, "shape", tuple(self.shape))

    @property
    def size(self):
        return len(_levels(self.root)[1])

    def __call__(self, y):
        return circuit_evaluate(self, y)


def _levels(root):
    """Distinct gates grouped by height (1 = reads only inputs) and a flat gate set."""
    seen = {}
    height = {}
    stack = [(root, False)]
    while stack:
        node, done = stack.pop()
        if not isinstance(node, ModGate):
            continue
        key = id(node)
        if done:
            height[key] = 1 + max((height.get(id(ch), 0) for _, ch in node.children), default=0)
            continue
        if key in seen:
            continue
        seen[key] = node
        stack.append((node, True))
        for _, ch in node.children:
            stack.append((ch, False))
    levels = {}
    for key, node in seen.items():
        levels.setdefault(height[key], []).append(node)
    return levels, seen


def circuit_validate(C, shape=None):
    """List of violations of the declared (or given) modulus shape; empty means ok."""
    shape = tuple(shape or C.shape)
    out = []
    top = max(shape) if shape else 0
    stack = [(C.root, 1)]
    seen = set()
    if not isinstance(C.root, ModGate):
        return ["root must be a Mod gate"]
    while stack:
        node, depth = stack.pop()
        if isinstance(node, InputWire):
            if not 0 <= node.index < C.num_inputs:
                out.append(f"input wire {node.index} outside 0..{C.num_inputs - 1}")
            continue
        if (id(node), depth) in seen:
            continue
        seen.add((id(node), depth))
        if depth > len(shape):
            out.append(f"gate at depth {depth} exceeds declared depth {len(shape)}")
            continue
        if node.modulus != shape[depth - 1]:
            out.append(f"gate at depth {depth} has modulus {node.modulus}, expected {shape[depth - 1]}")
        if node.const < 0:
            out.append(f"negative constant {node.const} at depth {depth}")
        for c, ch in node.children:
            if not 0 <= c <= top:
                out.append(f"coefficient {c} outside 0..{top} at depth {depth}")
            stack.append((ch, depth + 1))
    return out


class _Compiled:
    """Sparse per-height weight matrices for batched evaluation."""

    def __init__(self, C):
        levels, gates = _levels(C.root)
        self.m = C.num_inputs
        self.heights = sorted(levels)
        order = [g for h in self.heights for g in levels[h]]
        pos = {id(g): i for i, g in enumerate(order)}
        self.total = len(order)
        self.root = pos[id(C.root)]
        self.layers = []
        start = 0
        for h in self.heights:
            layer = levels[h]
            rows_in, cols_in, vals_in = [], [], []
            rows_ch, cols_ch, vals_ch = [], [], []
            for j, g in enumerate(layer):
                for c, ch in g.children:
                    if isinstance(ch, InputWire):
                        if not 0 <= ch.index < self.m:
                            raise IndexError(f"input wire {ch.index} is unbound")
                        rows_in.append(ch.index)
                        cols_in.append(j)
                        vals_in.append(c)
                    else:
                        rows_ch.append(pos[id(ch)])
                        cols_ch.append(j)
                        vals_ch.append(c)
            k = len(layer)
            w_in = sparse.csr_matrix((vals_in, (rows_in, cols_in)), shape=(self.m, k), dtype=np.int64)
            w_ch = sparse.csr_matrix((vals_ch, (rows_ch, cols_ch)), shape=(start, k), dtype=np.int64)
            consts = np.array([g.const for g in layer], dtype=np.int64)
            mods = np.array([g.modulus for g in layer], dtype=np.int64)
            self.layers.append((start, w_in, w_ch, consts, mods))
            start += k

    def values(self, Y):
        Y = np.asarray(Y, dtype=np.int64)
        out = np.zeros((Y.shape[0], self.total), dtype=np.int64)
        for start, w_in, w_ch, consts, mods in self.layers:
            s = np.broadcast_to(consts, (Y.shape[0], len(consts))).copy()
            if w_in.nnz:
                s += np.asarray((w_in.T @ Y.T).T)
            if w_ch.nnz:
                s += np.asarray((w_ch.T @ out[:, :start].T).T)
            out[:, start:start + len(consts)] = (s % mods == 0)
        return out[:, self.root]


def circuit_values(C, Y):
    """Outputs on an (N, m) batch of input bits."""
    return _Compiled(C).values(Y)


def circuit_evaluate(C, y):
    y = tuple(int(b) for b in y)
    if len(y) < C.num_inputs:
        raise IndexError(f"expected {C.num_inputs} input bits, got {len(y)}")
    return int(_eval(C.root, y))


def _eval(node, y):
    if isinstance(node, InputWire):
        if node.index >= len(y):
            raise IndexError(f"input wire {node.index} is unbound")
        return y[node.index]
    s = node.const + sum(c * _eval(ch, y) for c, ch in node.children)
    return 1 if s % node.modulus == 0 else 0


def all_inputs(m):
    return sign_points(m)


def circuit_equivalence_bruteforce(C, target=1, cap=None):
    """None if C(y) = target for every y, else the first input where it differs."""
    check_cap(2**C.num_inputs, cap)
    comp = _Compiled(C)
    chunk = 1 << 15
    total = 2**C.num_inputs
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        Y = ((idx[:, None] >> np.arange(C.num_inputs - 1, -1, -1)) & 1).astype(np.int64)
        bad = np.nonzero(comp.values(Y) != target)[0]
        if bad.size:
            return tuple(int(b) for b in Y[bad[0]])
    return None


def circuit_flip(C):
    """A circuit computing 1 - C(y).

    For a Mod2 root the constant offset is toggled, which keeps the shape;
    otherwise the circuit is wrapped as Mod2(0 + C).
    """
    r = C.root
    if r.modulus == 2:
        return CCCircuit(ModGate(2, (r.const + 1) % 2, r.children), C.shape, C.num_inputs)
    return CCCircuit(ModGate(2, 0, ((1, r),)), (2,) + C.shape, C.num_inputs)


# ------------------------------------------------------------------ Z3 polynomials to circuits


def _mod32_gate(terms, offset, bottoms):
    """Mod3 gate for sorted (exponent, coefficient) terms, sharing bottom gates."""
    const = 0
    children = []
    for e, c in terms:
        key = (offset,) + e
        if key not in bottoms:
            bottoms[key] = ModGate(2, 0, tuple((1, InputWire(i + offset)) for i, k in enumerate(e) if k))
        const += -c
        children.append(((2 * c) % 3, bottoms[key]))
    return ModGate(3, const % 3, tuple(children))


def poly_to_mod32(p, num_inputs=None, offset=0):
    """CC[3,2] circuit C with C(y) = 1 iff p((-1)^y) = 0.

    Variable i of p reads wire i + offset.
    """
    p = p.multilinear_reduce()
    m = p.n + offset if num_inputs is None else num_inputs
    return CCCircuit(_mod32_gate(p.sorted_terms(), offset, {}), (3, 2), m)


def switch_poly(a, b):
    """f(a, b) = (b + 1) a (a - 2) + (b - 1)(a - 1)(a - 2), reduced on signs."""
    return (b + 1) * a * (a - 2) + (b - 1) * (a - 1) * (a - 2)


def p1_to_circuit(inst, chunk=4096):
    """CC[2,3,2] circuit C_Q on wires (x0, y1..yn) with Q((-1)^y) = 0 iff C_Q(0,y) = C_Q(1,y) = 1.

    Each f(b, p_i) is interpolated from its value table; bottom Mod2 gates
    with the same wire set are shared.
    """
    n = inst.n
    m = n + 1
    pts = sign_points(m)
    b_vals = np.where(pts[:, 0] == 1, 2, 1)
    children = []
    bottoms = {}
    middles = {}
    polys = list(inst.polys)
    for s in range(0, len(polys), chunk):
        part = polys[s:s + chunk]
        a_vals = np.stack([p.values(pts[:, 1:]) for p in part]) if part else np.zeros((0, len(pts)), dtype=np.int64)
        f_vals = ((b_vals + 1) * a_vals * (a_vals - 2) + (b_vals - 1) * (a_vals - 1) * (a_vals - 2)) % 3
        coeffs = multilinear_coefficients(f_vals, m)
        for row in coeffs:
            key = row.tobytes()
            if key not in middles:
                f = Z3Poly.from_coefficients(row, m, pts)
                middles[key] = _mod32_gate(f.sorted_terms(), 0, bottoms)
            children.append((1, middles[key]))
    return CCCircuit(ModGate(2, 0, tuple(children)), (2, 3, 2), m)


# ------------------------------------------------------------------ circuits to the F4 problem


class NormalFormError(ValueError):
    pass


def _normal_bottom(node, m):
    """A depth-3 Mod2 gate as (c2, exponent tuple)."""
    if isinstance(node, InputWire):
        # y = Mod2(1 + y)
        e = [0] * m
        e[node.index] = 1
        return 1, tuple(e)
    if node.modulus != 2:
        raise NormalFormError(f"expected a Mod2 gate at depth 3, found Mod{node.modulus}")
    e = [0] * m
    for c, ch in node.children:
        if not isinstance(ch, InputWire):
            raise NormalFormError("a depth-3 gate may only read input wires")
        e[ch.index] = (e[ch.index] + c) % 2
    return node.const % 2, tuple(e)


def _normal_middle(node, m):
    """A depth-2 Mod3 gate as (c1, list of bottom gates)."""
    if isinstance(node, InputWire):
        # y = Mod3(2 + Mod2(1 + y))
        return 2, [_normal_bottom(node, m)]
    if node.modulus != 3:
        raise NormalFormError(f"expected a Mod3 gate at depth 2, found Mod{node.modulus}")
    bottoms = []
    for c, ch in node.children:
        bottoms.extend([_normal_bottom(ch, m)] * (c % 3))
    return node.const % 3, bottoms


def normal_form(C):
    """(c0, [(c1, [(c2, e), ...]), ...]) for a [2,3,2] circuit; raises NormalFormError."""
    r = C.root
    if not isinstance(r, ModGate) or r.modulus != 2:
        raise NormalFormError("root must be a Mod2 gate")
    middles = []
    for c, ch in r.children:
        middles.extend([_normal_middle(ch, C.num_inputs)] * (c % 2))
    return r.const % 2, middles


def circuit_to_p1(C):
    """Problem-1 instance Q over the wires with C(y) = 1 iff Q((-1)^y) = 0.

    r(z) = (z - alpha)(z - alpha^2) expands to z^2 + alpha^2 z + alpha z + alpha^3,
    so every middle gate contributes exponents 2E, E + 2, E + 1 and 0.
    """
    c0, middles = normal_form(C)
    m = C.num_inputs
    polys = []
    if c0:
        polys.append(Z3Poly.const(0, m))
    for c1, bottoms in middles:
        E = Z3Poly.const(c1, m)
        for c2, e in bottoms:
            mono = Z3Poly({e: 1}, m)
            E = E - 1 - (mono if c2 == 0 else -mono)
        E = E.multilinear_reduce()
        for t in (2 * E, E + 2, E + 1, Z3Poly.const(0, m)):
            polys.append(t.multilinear_reduce())
    return P1Instance(tuple(polys), m)


def example_circuit():
    """Mod2(1 + Mod3(1 + 2 Mod2(y1 + y2)) + Mod3(Mod2(y3))) on wires 0, 1, 2."""
    a = ModGate(3, 1, ((2, ModGate(2, 0, ((1, InputWire(0)), (1, InputWire(1))))),))
    b = ModGate(3, 0, ((1, ModGate(2, 0, ((1, InputWire(2)),))),))
    return CCCircuit(ModGate(2, 1, ((1, a), (1, b))), (2, 3, 2), 3)
