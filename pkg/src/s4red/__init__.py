"""Equation solving over S4 = Hol(2,2) through restricted polynomials, F4 sums and CC circuits."""

from .algebra import Matrix, field, gl_enumerate, invertible_sum, mat_ring, parse_matrix
from .circuits import CCCircuit, InputWire, ModGate, circuit_evaluate, circuit_flip, p1_to_circuit
from .errors import (
    BoundViolation, CapExceeded, DecompositionImpossible, ParseError, ReductionError, SearchFailed,
)
from .f4arith import P1Instance, Z3Poly, p1_equivalence_bruteforce, respoly_to_p1
from .formats import parse, serialize
from .holomorph import GroupWord, HolElement, Perm, hol_group, polsat_bruteforce, s4_iso, word_evaluate
from .pipeline import collect_to_inequalities, combine_inequalities, polsat_to_respoleqv
from .respoly import Polynomial, collapse_on_gl, restricted_equivalence_bruteforce
from .solvers import GammaHypothesis, polsat_deterministic, polsat_probabilistic
from .verify import verify_pass

__version__ = "0.1.0"
