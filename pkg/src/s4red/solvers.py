"""PolSat(S4) decision procedures through CC[2,3,2] circuits.

The equation w = 1 over Hol(2,2) is turned into one circuit D_v per member
e_v of the inequality set: D_v(y) = 1 at some input iff e_v is nonzero at
some invertible point.  Each D_v is searched either by weight-bounded
enumeration or by random sampling, with the weight bound taken from a
hypothesised lower bound gamma on circuit size for AND.

Per member the chain is

    e_v  -> collapse on GL^n -> F4 instance (3n+1 signs) -> merged terms
         -> C_Q on wires (x0, y) -> D = not C_Q

so D(x0, y) = 1 exactly where the instance is nonzero.  Satisfying inputs
are decoded back to matrices, then to holomorph elements, and verified on
the original word before they are reported.
"""

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
import itertools
import math
import re

import numpy as np

from .bounds import check_bound
from .circuits import _Compiled, circuit_flip, p1_to_circuit
from .errors import check_cap
from .f4arith import bit_to_z3, decode_signs, p1_normalize, respoly_to_p1
from .holomorph import HolElement, polsat_bruteforce, word_evaluate
from .pipeline import collect_to_inequalities
from .respoly import collapse_on_gl


@dataclass(frozen=True)
class GammaHypothesis:
    """A hypothesised size lower bound gamma for AND circuits, used through gamma^-1.

    ``kind`` is "exhaustive" (gamma^-1 = number of input wires, always
    valid) or "sesh" with gamma(n) = exp(c n^(1/(h-1))), so that
    gamma^-1(s) = ceil((ln s / c)^(h-1)).  Bounds are clamped to the wire
    count, which keeps them monotone in s.
    """

    kind: str = "exhaustive"
    c: float = 1.0
    h: int = 3

    def __post_init__(self):
        if self.kind not in ("exhaustive", "sesh"):
            raise ValueError(f"unknown hypothesis {self.kind!r}")
        if self.kind == "sesh" and (self.c <= 0 or self.h < 2):
            raise ValueError("sesh needs c > 0 and h >= 2")

    @property
    def label(self):
        if self.kind == "exhaustive":
            return "exhaustive"
        return f"sesh(c={self.c:g}, h={self.h})"

    @property
    def conditional(self):
        return self.kind != "exhaustive"

    def gamma_inv(self, size, wires):
        if self.kind == "exhaustive":
            return wires
        if size <= 1:
            return 0
        raw = (math.log(size) / self.c) ** (self.h - 1)
        return max(0, min(wires, math.ceil(raw)))

    @classmethod
    def parse(cls, text):
        """"exhaustive" or "sesh:c,h"."""
        text = text.strip()
        if text == "exhaustive":
            return cls()
        m = re.fullmatch(r"sesh:([0-9.eE+-]+),([0-9]+)", text)
        if not m:
            raise ValueError(f"hypothesis must be 'exhaustive' or 'sesh:c,h', got {text!r}")
        return cls("sesh", float(m.group(1)), int(m.group(2)))


@dataclass
class CircuitStage:
    """D_v for one member of the inequality set, with the data needed to decode inputs."""

    v: tuple
    n: int
    circuit: object  # D = flip(C_Q)
    compiled: object
    collapsed_monomials: int
    p1_terms: int

    @property
    def wires(self):
        return self.circuit.num_inputs

    @property
    def size(self):
        return self.circuit.size

    def decode(self, y):
        """Matrices Z_1..Z_n read from the sign variables of a circuit input."""
        signs = [bit_to_z3(b) for b in y[1:]]  # wire 0 is the selector x0
        return tuple(decode_signs(*signs[3 * k:3 * k + 3]) for k in range(self.n))

    def assignment(self, y):
        return tuple(HolElement(self.v[k], Z) for k, Z in enumerate(self.decode(y)))


@lru_cache(maxsize=32)
def build_stages(w):
    """One CircuitStage per inequality e_v, in index-set order (cached per word)."""
    _require_s4(w)
    E = collect_to_inequalities(w)
    out = []
    for v, e in E.entries:
        s = collapse_on_gl(e, E.n)
        inst = p1_normalize(respoly_to_p1(s))
        D = circuit_flip(p1_to_circuit(inst))
        out.append(CircuitStage(v, E.n, D, _Compiled(D), s.num_monomials, inst.k))
    return E, out


def _require_s4(w):
    if (w.q, w.m) != (2, 2):
        raise ValueError("the circuit solvers work over Hol(2,2) = S4 only")


def weight_ordered_inputs(m, max_weight, chunk=4096):
    """(N, m) bit blocks: weight 0, 1, ..., max_weight; supports lexicographic within a weight."""
    buf = []
    for k in range(0, min(max_weight, m) + 1):
        for support in itertools.combinations(range(m), k):
            row = [0] * m
            for i in support:
                row[i] = 1
            buf.append(row)
            if len(buf) == chunk:
                yield np.array(buf, dtype=np.int64)
                buf = []
    if buf:
        yield np.array(buf, dtype=np.int64).reshape(len(buf), m)


def _verified(w, stage, y):
    a = stage.assignment(y)
    return a if word_evaluate(w, a).is_identity() else None


@dataclass
class SolveReport:
    answer: str  # SAT, UNSAT or probably-UNSAT
    method: str
    hypothesis: str
    conditional: bool
    witness: tuple = None  # HolElement per variable
    circuit_input: tuple = None
    index: tuple = None  # the v whose circuit produced the witness
    circuit_sizes: list = dc_field(default_factory=list)
    weight_bounds: list = dc_field(default_factory=list)
    inputs_checked: int = 0
    samples: int = 0
    seed: int = None
    repeats: int = 0
    unverified_hits: int = 0
    cross_checked: bool = False
    cross_check_agrees: bool = None
    checks: list = dc_field(default_factory=list)

    @property
    def circuit_size(self):
        return max(self.circuit_sizes, default=0)

    def as_dict(self):
        return {
            "answer": self.answer,
            "method": self.method,
            "hypothesis": self.hypothesis,
            "conditional": self.conditional,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "circuit_input": None if self.circuit_input is None else list(self.circuit_input),
            "index": None if self.index is None else [list(x) for x in self.index],
            "circuit_size": self.circuit_size,
            "circuit_sizes": list(self.circuit_sizes),
            "weight_bounds": list(self.weight_bounds),
            "inputs_checked": self.inputs_checked,
            "samples": self.samples,
            "seed": self.seed,
            "repeats": self.repeats,
            "unverified_hits": self.unverified_hits,
            "cross_checked": self.cross_checked,
            "cross_check_agrees": self.cross_check_agrees,
            "checks": [c.as_dict() for c in self.checks],
        }


def _cross_check(report, w, cross_check, cap):
    if not cross_check:
        return report
    truth = polsat_bruteforce(w, cap=cap) is not None
    report.cross_checked = True
    report.cross_check_agrees = truth == (report.answer == "SAT")
    return report


def solution_count_check(stage, hypothesis, cap=None):
    """Exact #{y : D(y) = 1} against the lower bound 2^(m - gamma^-1(|D|))."""
    m = stage.wires
    check_cap(2**m, cap)
    idx = np.arange(2**m, dtype=np.int64)
    Y = ((idx[:, None] >> np.arange(m - 1, -1, -1)) & 1).astype(np.int64)
    count = int(stage.compiled.values(Y).sum())
    bound = 2 ** (m - hypothesis.gamma_inv(stage.size, m))
    # count >= bound, written as -count <= -bound; only meaningful for satisfiable D
    return count, check_bound("solution count lower bound", -count, -bound, strict=False)


def polsat_bruteforce_report(w, cap=None):
    a = polsat_bruteforce(w, cap=cap)
    return SolveReport("SAT" if a is not None else "UNSAT", "brute", "none", False,
                       witness=a, cross_checked=False)


def polsat_deterministic(w, h=None, cross_check=False, cap=None):
    """Search every D_v over inputs of weight at most gamma^-1(|D_v|).

    Inputs are tried by increasing Hamming weight.  The answer is SAT as
    soon as some D_v outputs 1 at a checked input whose decoded assignment
    satisfies w; with a valid hypothesis this is exact.
    """
    h = h or GammaHypothesis()
    E, stages = build_stages(w)
    report = SolveReport("UNSAT", "deterministic", h.label, h.conditional)
    report.checks = list(E.checks)
    for stage in stages:
        bound = h.gamma_inv(stage.size, stage.wires)
        report.circuit_sizes.append(stage.size)
        report.weight_bounds.append(bound)
        check_cap(sum(math.comb(stage.wires, k) for k in range(bound + 1)), cap)
        for Y in weight_ordered_inputs(stage.wires, bound):
            out = stage.compiled.values(Y)
            report.inputs_checked += len(Y)
            for i in np.nonzero(out == 1)[0]:
                y = tuple(int(b) for b in Y[i])
                a = _verified(w, stage, y)
                if a is None:
                    report.unverified_hits += 1
                    continue
                report.answer = "SAT"
                report.witness, report.circuit_input, report.index = a, y, stage.v
                return _cross_check(report, w, cross_check, cap)
    return _cross_check(report, w, cross_check, cap)


def polsat_probabilistic(w, h=None, seed=0, repeats=20, cross_check=False, cap=None):
    """Sample 2^gamma^-1(|D_v|) uniform inputs per D_v in each repeat.

    One-sided: SAT is only reported with a verified witness, otherwise the
    answer is probably-UNSAT.  A single repeat misses a valid instance with
    probability below 1/2; the default of 20 repeats brings that under
    2^-20.  Repeat r on member i draws from the stream seeded by
    (seed, r, i), so a fixed seed gives an identical report.
    """
    h = h or GammaHypothesis()
    E, stages = build_stages(w)
    report = SolveReport("probably-UNSAT", "probabilistic", h.label, h.conditional,
                         seed=seed, repeats=repeats)
    report.checks = list(E.checks)
    for stage in stages:
        report.circuit_sizes.append(stage.size)
        report.weight_bounds.append(h.gamma_inv(stage.size, stage.wires))
    for r in range(repeats):
        for i, stage in enumerate(stages):
            k = 2 ** report.weight_bounds[i]
            check_cap(k, cap)
            rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r, i)))
            Y = rng.integers(0, 2, size=(k, stage.wires), dtype=np.int64)
            out = stage.compiled.values(Y)
            report.samples += k
            for j in np.nonzero(out == 1)[0]:
                y = tuple(int(b) for b in Y[j])
                a = _verified(w, stage, y)
                if a is None:
                    report.unverified_hits += 1
                    continue
                report.answer = "SAT"
                report.witness, report.circuit_input, report.index = a, y, stage.v
                return _cross_check(report, w, cross_check, cap)
    return _cross_check(report, w, cross_check, cap)
