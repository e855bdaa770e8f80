"""How long is u = sum_i (y_i1 + y_i2) p_i once it is multiplied out?

Each p_i with N_i monomials contributes 2 N_i monomials, each one letter
longer than the monomial it came from, so |u| = 2 sum_i (|p_i| + N_i).
The often-quoted 2k + 2 sum |p_i| agrees only when every p_i is a single
monomial.  This script prints both next to the exact count.
Run with ``python demos/combining_bound.py``.
"""

from s4red.algebra import Matrix
from s4red.pipeline import combine_inequalities
from s4red.respoly import Polynomial

I2 = Matrix.identity(2, 2)
S = Matrix.from_rows([[0, 1], [1, 0]], 2)

CASES = {
    "two single monomials": [Polynomial([(1, S)], n=1), Polynomial([(S, 1, 1)], n=1)],
    "x^6 + I": [Polynomial([(1,) * 6, (I2,)], n=1)],
    "three monomials, one zero": [Polynomial([(1,), (S,), (1, 1)], n=1), Polynomial.zero(n=1)],
}


def main():
    print(f"{'case':<28}{'|u| exact':>10}{'2sum(|p|+N)':>13}{'2k+2sum|p|':>12}")
    for name, ps in CASES.items():
        u = combine_inequalities(ps, n=1)
        exact = sum(len(m) for m in u.monomials())
        counted = 2 * sum(p.length + p.num_monomials for p in ps)
        stated = 2 * len(ps) + 2 * sum(p.length for p in ps)
        flag = "" if exact <= stated else "  <- over"
        print(f"{name:<28}{exact:>10}{counted:>13}{stated:>12}{flag}")


if __name__ == "__main__":
    main()
