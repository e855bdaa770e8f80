"""Check one reduction pass on one instance with exhaustive oracles on both sides.

Every pass maps a source instance to a target instance whose decision bit
should agree.  ``verify_pass`` runs the brute-force oracle on each side,
compares the bits (and, where the pass promises it, the pointwise
contract), and collects every length-bound record made while building the
target.  A report is "pass" only when both sides were decided
exhaustively; when an enumeration cap stops a side the report is
"partial" and carries whatever stages finished.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .circuits import (
    circuit_equivalence_bruteforce, circuit_flip, circuit_to_p1, circuit_values, p1_to_circuit,
    poly_to_mod32,
)
from .errors import CapExceeded, check_cap, default_cap
from .f4arith import P1Instance, p1_equivalence_bruteforce, p1_to_respoly, respoly_to_p1, sign_points
from .holomorph import GroupWord, poleqv_bruteforce, polsat_bruteforce, word_evaluate
from .pipeline import (
    collect_to_inequalities, combine_inequalities, copoleqv_to_polsat, respoleqv_to_poleqv,
)
from .respoly import mat_ring, points_gl, restricted_equivalence_bruteforce

PASSES = {
    "collect": "group-word",
    "combine": "group-word",
    "polsat-respoleqv": "group-word",
    "respoleqv-poleqv": "restricted-poly",
    "copoleqv-polsat": "group-word",
    "respoly-p1": "restricted-poly",
    "p1-respoly": "p1",
    "poly-mod32": "p1",
    "p1-circuit": "p1",
    "circuit-p1": "circuit",
    "flip": "circuit",
}


@dataclass
class VerifyReport:
    pass_name: str
    status: str = "partial"  # pass, fail or partial
    source: dict = dc_field(default_factory=dict)
    target: dict = dc_field(default_factory=dict)
    stages: list = dc_field(default_factory=list)
    checks: list = dc_field(default_factory=list)
    notes: list = dc_field(default_factory=list)

    def stage(self, name, **info):
        self.stages.append({"stage": name, **info})

    def as_dict(self):
        return {
            "pass": self.pass_name,
            "status": self.status,
            "source": self.source,
            "target": self.target,
            "stages": self.stages,
            "checks": [c.as_dict() for c in self.checks],
            "bound_warnings": [c.name for c in self.checks if not c.ok],
            "notes": self.notes,
        }


def _fmt(x):
    if x is None:
        return None
    if isinstance(x, (tuple, list)):
        return [_fmt(y) for y in x]
    if isinstance(x, (int, np.integer, str)):
        return int(x) if not isinstance(x, str) else x
    return str(x)


def _decide(report, source_bit, target_bit):
    report.status = "pass" if source_bit == target_bit else "fail"


# ------------------------------------------------------------------ group-word passes


def _first_nonzero_e(E, cap):
    """(v, Z) for the first member of E nonzero on GL^n, scanning each member in turn."""
    return E.first_witness(cap)


def _verify_collect(w, report, cap):
    E = collect_to_inequalities(w)
    report.checks.extend(E.checks)
    report.stage("collect", members=len(E), index_set_size=len(E.index_set))
    a = polsat_bruteforce(w, cap=cap)
    report.source = {"problem": "polsat", "satisfiable": a is not None, "witness": _fmt(a)}
    hit = _first_nonzero_e(E, cap)
    report.target = {"problem": "some e_v nonzero on GL^n", "satisfiable": hit is not None,
                     "witness": None if hit is None else {"v": _fmt(hit[0]), "Z": _fmt(hit[1])}}
    if hit is not None:
        # the witness of the disjunction reassembles an assignment of w
        a2 = E.assignment(*hit)
        report.target["assignment"] = _fmt(a2)
        report.target["assignment_solves_w"] = word_evaluate(w, a2).is_identity()
    _decide(report, a is not None, hit is not None)
    return E


def _verify_combine(w, report, cap):
    E = _verify_collect(w, report, cap)
    if report.status != "pass":
        return
    u = combine_inequalities(E.polys, n=E.n)
    report.checks.extend(u.checks)
    nvars = E.n + 2 * len(E)
    R = mat_ring(w.m, w.q)
    report.stage("combine", fresh_variables=2 * len(E), variables=nvars, length=u.length)
    check_cap(len(R.gl) ** nvars, cap)
    hit = None
    for _, block in points_gl(nvars, w.q, w.m):
        bad = np.nonzero(u.values(block) != R.zero)[0]
        if bad.size:
            hit = tuple(R.matrix(c) for c in block[bad[0]])
            break
    report.target = {"problem": "u nonzero on GL^(n+2k)", "satisfiable": hit is not None,
                     "witness": _fmt(hit)}
    _decide(report, report.source["satisfiable"], hit is not None)


def _verify_polsat_respoleqv(w, report, cap):
    """u is checked through its members: u != 0 somewhere iff some e_v != 0 somewhere."""
    E = collect_to_inequalities(w)
    u = combine_inequalities(E.polys, n=E.n)
    report.checks.extend(E.checks)
    report.checks.extend(u.checks)
    a = polsat_bruteforce(w, cap=cap)
    report.source = {"problem": "polsat", "satisfiable": a is not None, "witness": _fmt(a)}
    R = mat_ring(w.m, w.q)
    nvars = E.n + 2 * len(E)
    direct = len(R.gl) ** nvars <= (default_cap() if cap is None else cap)
    report.stage("reduce", members=len(E), variables=nvars, length=u.length,
                 mode="direct" if direct else "per-member")
    if direct:
        hit = None
        for _, block in points_gl(nvars, w.q, w.m):
            bad = np.nonzero(u.values(block) != R.zero)[0]
            if bad.size:
                hit = True
                break
        nonzero = hit is not None
    else:
        found = []
        for v, e in E.entries:
            z = restricted_equivalence_bruteforce(e, cap=cap, n=E.n)
            report.stage("member", v=_fmt(v), nonzero=z is not None)
            found.append(z is not None)
        nonzero = any(found)
    report.target = {"problem": "respoleqv (complement)", "identically_zero": not nonzero}
    _decide(report, a is not None, nonzero)


def _verify_copoleqv_polsat(w, report, cap):
    w2, a = copoleqv_to_polsat(w)
    report.checks.extend(w2.checks)
    bad = poleqv_bruteforce(w, cap=cap)
    report.source = {"problem": "copoleqv", "not_identity_somewhere": bad is not None,
                     "witness": _fmt(bad)}
    x = polsat_bruteforce(w2, target=a, cap=cap)
    report.stage("reduce", target_length=len(w2), target_element=str(a))
    report.target = {"problem": "polsat w2 = a", "satisfiable": x is not None, "witness": _fmt(x)}
    _decide(report, bad is not None, x is not None)


# ------------------------------------------------------------------ restricted-poly passes


def _verify_respoleqv_poleqv(p, report, cap):
    z = restricted_equivalence_bruteforce(p, cap=cap)
    report.source = {"problem": "respoleqv", "valid": z is None, "counterexample": _fmt(z)}
    w = respoleqv_to_poleqv(p, cap)
    report.checks.extend(w.checks)
    report.stage("reduce", target_length=len(w), target_variables=w.n)
    bad = poleqv_bruteforce(w, cap=cap)
    report.target = {"problem": "poleqv", "valid": bad is None, "counterexample": _fmt(bad)}
    _decide(report, z is None, bad is None)


def _verify_respoly_p1(p, report, cap):
    z = restricted_equivalence_bruteforce(p, cap=cap)
    report.source = {"problem": "respoleqv", "valid": z is None, "counterexample": _fmt(z)}
    inst = respoly_to_p1(p, cap)
    report.stage("reduce", terms=inst.k, sign_variables=inst.n)
    bad = p1_equivalence_bruteforce(inst, cap=cap)
    report.target = {"problem": "p1", "valid": bad is None, "counterexample": _fmt(bad)}
    _decide(report, z is None, bad is None)


# ------------------------------------------------------------------ p1 passes


def _verify_p1_respoly(inst, report, cap):
    bad = p1_equivalence_bruteforce(inst, cap=cap)
    report.source = {"problem": "p1", "valid": bad is None, "counterexample": _fmt(bad)}
    s = p1_to_respoly(inst)
    report.stage("reduce", monomials=s.num_monomials, length=s.length)
    z = restricted_equivalence_bruteforce(s, cap=cap)
    report.target = {"problem": "respoleqv", "valid": z is None, "counterexample": _fmt(z)}
    _decide(report, bad is None, z is None)


def _verify_poly_mod32(inst, report, cap):
    """Pointwise: C_p(y) = 1 iff p((-1)^y) = 0, for every polynomial of the instance."""
    check_cap(2**inst.n * max(inst.k, 1), cap)
    pts = sign_points(inst.n)
    mismatches = 0
    for i, p in enumerate(inst.polys):
        C = poly_to_mod32(p, inst.n)
        lhs = p.values(pts) == 0
        rhs = circuit_values(C, pts) == 1
        bad = int(np.count_nonzero(lhs != rhs))
        mismatches += bad
        report.stage("polynomial", index=i, terms=len(p), gates=C.size, mismatches=bad)
    report.source = {"points": 2**inst.n, "polynomials": inst.k}
    report.target = {"mismatches": mismatches}
    report.status = "pass" if mismatches == 0 else "fail"


def _verify_p1_circuit(inst, report, cap):
    """(Q = 0 at y) iff C(0, y) = C(1, y) = 1, for every y; plus the decision bits."""
    check_cap(2 ** (inst.n + 1), cap)
    C = p1_to_circuit(inst)
    pts = sign_points(inst.n + 1)
    out = circuit_values(C, pts)
    half = 2**inst.n
    both = (out[:half] == 1) & (out[half:] == 1)
    zero = inst.values() == 0
    mismatches = int(np.count_nonzero(both != zero))
    report.stage("reduce", gates=C.size, wires=C.num_inputs, shape=list(C.shape), mismatches=mismatches)
    valid = bool(zero.all())
    report.source = {"problem": "p1", "valid": valid}
    report.target = {"problem": "circuit constant 1", "valid": bool((out == 1).all())}
    report.status = "pass" if mismatches == 0 and valid == report.target["valid"] else "fail"


# ------------------------------------------------------------------ circuit passes


def _verify_circuit_p1(C, report, cap):
    check_cap(2**C.num_inputs, cap)
    inst = circuit_to_p1(C)
    pts = sign_points(C.num_inputs)
    lhs = circuit_values(C, pts) == 1
    rhs = inst.values(pts) == 0
    mismatches = int(np.count_nonzero(lhs != rhs))
    report.stage("reduce", terms=inst.k, mismatches=mismatches)
    y = circuit_equivalence_bruteforce(C, 1, cap)
    bad = p1_equivalence_bruteforce(inst, cap)
    report.source = {"problem": "circuit constant 1", "valid": y is None, "counterexample": _fmt(y)}
    report.target = {"problem": "p1", "valid": bad is None, "counterexample": _fmt(bad)}
    report.status = "pass" if mismatches == 0 and (y is None) == (bad is None) else "fail"


def _verify_flip(C, report, cap):
    check_cap(2**C.num_inputs, cap)
    D = circuit_flip(C)
    pts = sign_points(C.num_inputs)
    mismatches = int(np.count_nonzero(circuit_values(C, pts) + circuit_values(D, pts) != 1))
    report.source = {"gates": C.size, "shape": list(C.shape)}
    report.target = {"gates": D.size, "shape": list(D.shape), "mismatches": mismatches}
    report.status = "pass" if mismatches == 0 else "fail"


_RUNNERS = {
    "collect": _verify_collect,
    "combine": _verify_combine,
    "polsat-respoleqv": _verify_polsat_respoleqv,
    "respoleqv-poleqv": _verify_respoleqv_poleqv,
    "copoleqv-polsat": _verify_copoleqv_polsat,
    "respoly-p1": _verify_respoly_p1,
    "p1-respoly": _verify_p1_respoly,
    "poly-mod32": _verify_poly_mod32,
    "p1-circuit": _verify_p1_circuit,
    "circuit-p1": _verify_circuit_p1,
    "flip": _verify_flip,
}


def verify_pass(instance, pass_name, cap=None):
    """Run ``pass_name`` on ``instance`` and check its biconditional exhaustively."""
    if pass_name not in _RUNNERS:
        raise ValueError(f"unknown pass {pass_name!r}; choose from {', '.join(PASSES)}")
    expected = PASSES[pass_name]
    kinds = {"group-word": GroupWord, "p1": P1Instance}
    if expected in kinds and not isinstance(instance, kinds[expected]):
        raise TypeError(f"pass {pass_name} takes a {expected} instance")
    if expected == "restricted-poly" and not hasattr(instance, "monomials"):
        raise TypeError(f"pass {pass_name} takes a restricted-poly instance")
    report = VerifyReport(pass_name)
    try:
        _RUNNERS[pass_name](instance, report, cap)
    except CapExceeded as exc:
        report.status = "partial"
        report.notes.append(str(exc))
    return report
