"""The two unary words the reductions rely on, found by search over Hol(2,2).

e maps every element onto the translation subgroup V and is the identity
there; f fixes V and sends everything else to one translation a.  Both are
printed as function tables over the 24 group elements (as permutations of
1..4) together with the number of closure states the search visited.
Run with ``python demos/witness_words.py``.
"""

from s4red.holomorph import hol_group, s4_iso_inv
from s4red.nearring import default_a, find_collapse_to_a, find_idempotent_onto_V, word_table


def show(name, result, G):
    w = result.word.word
    table = word_table(w).table
    print(f"{name}: {len(w)} letters, {result.states} states visited")
    print(f"  {w}" if len(w) <= 12 else f"  {' '.join(str(x) for x in w.letters[:8])} ...")
    moved = [(str(s4_iso_inv(G.element(i))), str(s4_iso_inv(G.element(int(t)))))
             for i, t in enumerate(table)]
    for src, dst in moved[:6]:
        print(f"  {src:>12} -> {dst}")
    print("  ...")


def main():
    G = hol_group(2, 2)
    print("V =", [str(s4_iso_inv(G.element(int(i)))) for i in G.V])
    show("e", find_idempotent_onto_V(), G)
    a = default_a()
    print(f"\ncollapse target a = {a} = {s4_iso_inv(a)}")
    show("f", find_collapse_to_a(a), G)


if __name__ == "__main__":
    main()
