"""From a restricted polynomial to sums of powers of alpha in F4, then to CC[2,3,2] circuits and back.

x^6 + I vanishes on every invertible 2x2 matrix over F2, so each stage
below should report "valid".  Dropping the exponent to x + I breaks that,
and the counterexample is carried along.  Run with ``python demos/f4_and_circuits.py``.
"""

from s4red.circuits import circuit_equivalence_bruteforce, circuit_to_p1, p1_to_circuit
from s4red.f4arith import p1_equivalence_bruteforce, p1_normalize, respoly_to_p1
from s4red.formats import parse, serialize
from s4red.respoly import collapse_on_gl, restricted_equivalence_bruteforce


def walk(text):
    p = parse("restricted-poly", text)
    print(f"p = {p}")
    print("  zero on GL^n:", restricted_equivalence_bruteforce(p) is None)

    # the literal expansion keeps every monomial; collapsing on GL first can shrink it to nothing
    inst = respoly_to_p1(p)
    small = p1_normalize(respoly_to_p1(collapse_on_gl(p)))
    print(f"  F4 instance: {inst.k} terms in {inst.n} signs; {small.k} from the GL-collapsed polynomial")
    print("  sum of alpha powers is 0 at every sign point:", p1_equivalence_bruteforce(inst) is None)
    print("  same for the collapsed one:", p1_equivalence_bruteforce(small) is None)

    C = p1_to_circuit(small)
    y = circuit_equivalence_bruteforce(C, 1)
    print(f"  circuit: {C.size} gates, shape {C.shape}, {C.num_inputs} wires; constant 1: {y is None}")
    if y is not None:
        print(f"  first input where it outputs 0: {y}")

    back = circuit_to_p1(C)
    print(f"  back to F4: {back.k} terms in {back.n} signs; valid: {p1_equivalence_bruteforce(back) is None}")
    return small


def main():
    walk("kind: restricted-poly\nx1 x1 x1 x1 x1 x1 + [1,0;0,1]\n")
    print()
    small = walk("kind: restricted-poly\nx1 + [1,0;0,1]\n")
    print("\nthe merged F4 instance as a file:")
    print(serialize(small), end="")


if __name__ == "__main__":
    main()
