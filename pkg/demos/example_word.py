"""Does x1 x2 (1 2) = x2 x1 have a solution in S4?

Walks one small equation through every stage: brute force over 24^2
assignments, the inequality set from collecting, the per-member circuits,
and the deterministic circuit solver.  Run with ``python demos/example_word.py``.
"""

import itertools
import time

from s4red.formats import parse
from s4red.holomorph import hol_group, polsat_bruteforce, s4_iso_inv, word_evaluate
from s4red.pipeline import collect_to_inequalities
from s4red.solvers import build_stages, polsat_deterministic

TEXT = """kind: group-word
q: 2
m: 2
x1 x2 (1 2) x1' x2'
"""


def is_odd(perm):
    im = perm.images
    return sum(im[i] > im[j] for i in range(4) for j in range(i + 1, 4)) % 2 == 1


def main():
    w = parse(TEXT)
    G = hol_group(2, 2)
    print(f"word: {len(w)} letters in {w.n} variables over Hol(2,2), |G| = {G.order}")

    # commutator values x1 x2 x1^-1 x2^-1 are even permutations, (1 2) is odd
    values = {word_evaluate(w, a) for a in itertools.product(G.elements, repeat=2)}
    print(f"distinct values over all 576 assignments: {len(values)}")
    print("all values are odd permutations:", all(is_odd(s4_iso_inv(g)) for g in values))
    print("brute force witness:", polsat_bruteforce(w))

    t = time.perf_counter()
    E = collect_to_inequalities(w)
    print(f"\ncollecting: {len(E)} inequalities e_v, longest expansion {max(e.length for e in E.polys)}")
    for c in E.checks:
        print(f"  {c.name}: {c.value} <= {c.bound if c.bound < 10**9 else '~10^%d' % (len(str(c.bound)) - 1)}")

    _, stages = build_stages(w)
    sizes = [s.size for s in stages]
    print(f"circuits D_v: {len(stages)} of them, {stages[0].wires} wires, sizes {min(sizes)}..{max(sizes)}")

    rep = polsat_deterministic(w)
    print(f"deterministic solver: {rep.answer} after {rep.inputs_checked} circuit inputs "
          f"({time.perf_counter() - t:.1f}s)")


if __name__ == "__main__":
    main()
