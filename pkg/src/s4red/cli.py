"""Command line: reduce, solve, verify, search-words, oracle.

Exit codes: 0 pass or positive answer, 1 fail or negative answer,
2 partial (an enumeration cap stopped the run), 3 usage error.
"""

import argparse
import json
import os
import sys

from . import formats
from .errors import CapExceeded, ParseError, ReductionError
from .f4arith import p1_equivalence_bruteforce, p1_to_respoly, respoly_to_p1
from .circuits import circuit_equivalence_bruteforce, circuit_to_p1, p1_to_circuit
from .holomorph import equation_word, GroupWord, hol_group, poleqv_bruteforce, polsat_bruteforce
from .pipeline import (
    collect_to_inequalities, combine_inequalities, copoleqv_to_polsat, respoleqv_to_poleqv,
)
from .respoly import collapse_on_gl, restricted_equivalence_bruteforce
from .solvers import GammaHypothesis, polsat_bruteforce_report, polsat_deterministic, polsat_probabilistic
from .verify import PASSES, verify_pass

EXIT_OK, EXIT_FAIL, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2, 3

PROBLEM_KINDS = {
    "polsat-s4": "group-word",
    "poleqv-s4": "group-word",
    "copoleqv-s4": "group-word",
    "respoleqv": "restricted-poly",
    "p1": "p1",
    "circuit": "circuit",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load(path, kind):
    return formats.parse(kind, _read(path))


def _emit(obj, out):
    text = obj if isinstance(obj, str) else formats.serialize(obj)
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _json(data, out=None):
    text = json.dumps(data, indent=2, default=str) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def sidecar_path(out):
    root, _ = os.path.splitext(out)
    return root + ".provenance.json"


# ------------------------------------------------------------------ reduce


def _collapsed_u(w, literal, cap):
    """u for the word; with literal=False each member is first collapsed on GL^n."""
    E = collect_to_inequalities(w)
    members = E.polys if literal else [collapse_on_gl(e, E.n) for e in E.polys]
    u = combine_inequalities(members, n=E.n)
    return E, u, (u.expand(cap) if literal else u.expand())


def reduce_instance(src, dst, inst, literal=False, cap=None):
    """(target instance, provenance dict) for a supported (src, dst) pair."""
    prov = {"from": src, "to": dst, "checks": []}
    if src == "polsat-s4" and dst in ("respoleqv", "poleqv-s4", "polsat-s4"):
        E, u, poly = _collapsed_u(inst, literal, cap)
        prov["index_set"] = [[list(x) for x in v] for v in E.index_set]
        prov["members"] = len(E)
        prov["collapsed_on_gl"] = not literal
        prov["checks"] += [c.as_dict() for c in E.checks] + [c.as_dict() for c in u.checks]
        prov["fresh_variables"] = [E.n + 1, E.n + 2 * len(E)]
        if dst == "respoleqv":
            prov["polarity"] = "w satisfiable iff the polynomial is NOT identically zero on GL"
            return poly, prov
        w2 = respoleqv_to_poleqv(poly, cap)
        prov["checks"] += [c.as_dict() for c in w2.checks]
        if dst == "poleqv-s4":
            prov["polarity"] = "w satisfiable iff the output word is NOT an identity"
            return w2, prov
        w3, a = copoleqv_to_polsat(w2)
        prov["checks"] += [c.as_dict() for c in w3.checks]
        prov["target_element"] = str(a)
        prov["polarity"] = "same answer; the equation w3 = a is written as w3 a^-1 = 1"
        return equation_word(w3, GroupWord((a,), 2, 2, w3.n)), prov
    if src == "respoleqv" and dst == "poleqv-s4":
        w = respoleqv_to_poleqv(inst, cap)
        prov["checks"] += [c.as_dict() for c in w.checks]
        prov["polarity"] = "same answer"
        return w, prov
    if src in ("copoleqv-s4", "poleqv-s4") and dst == "polsat-s4":
        w2, a = copoleqv_to_polsat(inst)
        prov["checks"] += [c.as_dict() for c in w2.checks]
        prov["target_element"] = str(a)
        prov["polarity"] = ("w not an identity iff the output is satisfiable"
                            if src == "copoleqv-s4" else "w an identity iff the output is NOT satisfiable")
        return equation_word(w2, GroupWord((a,), 2, 2, w2.n)), prov
    if src == "respoleqv" and dst == "p1":
        poly = inst
        if not literal:
            try:
                poly = collapse_on_gl(inst)
            except CapExceeded:
                prov["note"] = "GL^n too large to collapse; reduced the literal polynomial"
        prov["collapsed_on_gl"] = poly is not inst
        prov["polarity"] = "same answer"
        return respoly_to_p1(poly, cap), prov
    if src == "p1" and dst == "respoleqv":
        prov["polarity"] = "same answer"
        return p1_to_respoly(inst), prov
    if src == "p1" and dst == "circuit":
        prov["polarity"] = "p1 valid iff the circuit is constant 1"
        return p1_to_circuit(inst), prov
    if src == "circuit" and dst == "p1":
        prov["polarity"] = "circuit constant 1 iff p1 valid"
        return circuit_to_p1(inst), prov
    raise UsageError(f"no reduction from {src} to {dst}")


def cmd_reduce(args):
    if args.source not in PROBLEM_KINDS or args.dest not in PROBLEM_KINDS:
        raise UsageError(f"problems are {', '.join(PROBLEM_KINDS)}")
    inst = _load(args.input, PROBLEM_KINDS[args.source])
    target, prov = reduce_instance(args.source, args.dest, inst, args.literal, args.cap)
    _emit(target, args.output)
    if args.output not in (None, "-"):
        _json(prov, sidecar_path(args.output))
    return EXIT_OK


# ------------------------------------------------------------------ solve


def cmd_solve(args):
    w = _load(args.input, "group-word")
    h = GammaHypothesis.parse(args.gamma)
    if args.method == "brute":
        report = polsat_bruteforce_report(w, args.cap)
    elif args.method == "deterministic":
        report = polsat_deterministic(w, h, cross_check=args.cross_check, cap=args.cap)
    else:
        report = polsat_probabilistic(w, h, seed=args.seed, repeats=args.repeats,
                                      cross_check=args.cross_check, cap=args.cap)
    _json(report.as_dict(), args.output)
    return EXIT_OK if report.answer == "SAT" else EXIT_FAIL


# ------------------------------------------------------------------ verify


def cmd_verify(args):
    inst = _load(args.input, PASSES[args.pass_name])
    report = verify_pass(inst, args.pass_name, args.cap)
    _json(report.as_dict(), args.output)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(report.status, EXIT_PARTIAL)


# ------------------------------------------------------------------ search-words


def cmd_search_words(args):
    from .nearring import find_collapse_to_a, find_idempotent_onto_V, default_a, is_collapse_to
    from .nearring import is_idempotent_onto_V, word_table

    G = hol_group(2, 2)
    if args.target == "idempotent-V":
        res = find_idempotent_onto_V(args.state_cap)
        ok = res.word.verify() and is_idempotent_onto_V(word_table(res.word.word).table)
        extra = {}
    else:
        if args.a is None:
            a = default_a()
        else:
            a = formats.parse("group-word", f"q: 2\nm: 2\n{args.a}").letters
            if len(a) != 1 or isinstance(a[0], int):
                raise UsageError("--a must be a single group element")
            a = a[0]
        if G.index(a) == G.identity:
            raise UsageError("--a must not be the identity")
        res = find_collapse_to_a(a, args.state_cap)
        ok = res.word.verify() and is_collapse_to(word_table(res.word.word).table, G.index(a))
        extra = {"a": str(a)}
    _emit(res.word.word, args.output)
    report = {"target": args.target, "length": len(res.word.word), "states": res.states,
              "verified": bool(ok), **extra}
    sys.stderr.write(json.dumps(report) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------ oracle


def cmd_oracle(args):
    problem = args.problem
    kind = {"polsat": "group-word", "poleqv": "group-word", "respoleqv": "restricted-poly",
            "p1": "p1", "circuit": "circuit"}[problem]
    inst = _load(args.input, kind)
    cap = args.cap
    if problem == "polsat":
        a = polsat_bruteforce(inst, cap=cap)
        out = {"problem": problem, "satisfiable": a is not None,
               "witness": None if a is None else [str(x) for x in a]}
        positive = a is not None
    else:
        if problem == "poleqv":
            bad = poleqv_bruteforce(inst, cap=cap)
        elif problem == "respoleqv":
            bad = restricted_equivalence_bruteforce(inst, cap=cap)
        elif problem == "p1":
            bad = p1_equivalence_bruteforce(inst, cap=cap)
        else:
            bad = circuit_equivalence_bruteforce(inst, 1, cap)
        out = {"problem": problem, "valid": bad is None,
               "counterexample": None if bad is None else [str(x) for x in bad]}
        positive = bad is None
    _json(out, args.output)
    return EXIT_OK if positive else EXIT_FAIL


# ------------------------------------------------------------------ entry point


def build_parser():
    p = _Parser(prog="s4red", description="Reductions and solvers for equations over S4 = Hol(2,2).")
    p.add_argument("--cap", type=int, default=None,
                   help="enumeration cap (default: S4R_CAP or 1e8)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reduce", help="translate an instance between problems")
    r.add_argument("--from", dest="source", required=True, choices=sorted(PROBLEM_KINDS))
    r.add_argument("--to", dest="dest", required=True, choices=sorted(PROBLEM_KINDS))
    r.add_argument("--literal", action="store_true",
                   help="expand restricted polynomials exactly instead of collapsing them on GL")
    r.add_argument("input")
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide w = 1 over S4")
    s.add_argument("--method", choices=["brute", "deterministic", "probabilistic"], default="deterministic")
    s.add_argument("--gamma", default="exhaustive", help="exhaustive or sesh:c,h")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--repeats", type=int, default=20)
    s.add_argument("--cross-check", action="store_true", help="also run brute force and record agreement")
    s.add_argument("input")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check one pass against oracles on both sides")
    v.add_argument("--pass", dest="pass_name", required=True, choices=list(PASSES))
    v.add_argument("input")
    v.add_argument("-o", "--output", default=None)
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("search-words", help="find the idempotent word e or the collapse word f")
    w.add_argument("--target", required=True, choices=["idempotent-V", "collapse-a"])
    w.add_argument("--a", default=None, help="target element for collapse-a, e.g. '[0,1;1,0,0,1]'")
    w.add_argument("--state-cap", type=int, default=10**7)
    w.add_argument("-o", "--output", default=None)
    w.set_defaults(func=cmd_search_words)

    o = sub.add_parser("oracle", help="brute-force decision of one problem")
    o.add_argument("--problem", required=True, choices=["polsat", "poleqv", "respoleqv", "p1", "circuit"])
    o.add_argument("input")
    o.add_argument("-o", "--output", default=None)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        GammaHypothesis.parse(getattr(args, "gamma", "exhaustive"))
        return args.func(args)
    except (UsageError, ParseError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"s4red: error: {exc}\n")
        return EXIT_USAGE
    except CapExceeded as exc:
        sys.stderr.write(f"s4red: partial: {exc}\n")
        return EXIT_PARTIAL
    except ReductionError as exc:
        sys.stderr.write(f"s4red: error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
