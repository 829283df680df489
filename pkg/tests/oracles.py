"""Independent reference implementations used to cross-check the library.

Everything here is deliberately naive: plain Python integers, lists and
dicts, with no numpy and no shared code paths with chevrigid.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

# -- scalar ring oracles -------------------------------------------------------------


def mod_ops(q):
    return {
        "add": lambda a, b: (a + b) % q,
        "mul": lambda a, b: (a * b) % q,
        "neg": lambda a: (-a) % q,
    }


def poly_mul(a: list[int], b: list[int], p: int, k: int) -> list[int]:
    out = [0] * k
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if i + j < k:
                out[i + j] = (out[i + j] + x * y) % p
    return out


def naive_matmul(a, b, mul, add, zero):
    n, m, r = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(r):
            acc = zero
            for t in range(m):
                acc = add(acc, mul(a[i][t], b[t][j]))
            row.append(acc)
        out.append(row)
    return out


# -- root systems ---------------------------------------------------------------------

def a_roots(l: int) -> set[tuple[int, ...]]:
    """Positive roots of A_l as e_i - e_j written in simple-root coordinates."""
    out = set()
    for i in range(l):
        for j in range(i, l):
            out.add(tuple(1 if i <= k <= j else 0 for k in range(l)))
    return out


def d_root_count(l: int) -> int:
    """Count pairs +-e_i +- e_j with i < j that are positive: e_i - e_j, e_i + e_j."""
    return sum(2 for i in range(l) for j in range(i + 1, l))


COXETER = {("A", l): l + 1 for l in range(2, 10)}
COXETER.update({("D", l): 2 * l - 2 for l in range(4, 10)})
COXETER.update({("E", 6): 12, ("E", 7): 18, ("E", 8): 30})

POSITIVE_COUNT = {("E", 6): 36, ("E", 7): 63, ("E", 8): 120}


# -- degree-two polynomial oracle for AffineForm ---------------------------------------

class DensePoly:
    """Polynomial in y_1..y_N with monomials stored as sorted variable tuples."""

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def affine(cls, const, coeffs):
        t = {(): Fraction(const)}
        for i, c in coeffs.items():
            t[(i,)] = Fraction(c)
        return cls(t)

    def __add__(self, other):
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return DensePoly(t)

    def __mul__(self, other):
        t = {}
        for (k1, v1), (k2, v2) in product(self.terms.items(), other.terms.items()):
            k = tuple(sorted(k1 + k2))
            t[k] = t.get(k, 0) + v1 * v2
        return DensePoly(t)

    def truncate(self, degree: int) -> "DensePoly":
        return DensePoly({k: v for k, v in self.terms.items() if len(k) <= degree})

    def affine_part(self):
        const = self.terms.get((), 0)
        coeffs = {k[0]: v for k, v in self.terms.items() if len(k) == 1}
        return const, coeffs


# -- frozen values ---------------------------------------------------------------------

# (ad x_{alpha_1})^2 in A_2: single entry -2 at (row v1, col v-1), 0-based (0, 1)
A2_AD1_SQUARED_ENTRY = ((0, 1), -2)

# diag of h_{alpha_1}(t) in the A_2 basis as exponents of t
A2_H1_EXPONENTS = [2, -2, -1, 1, 1, -1, 0, 0]

# Closure dimensions n^2
CLOSURE_TARGETS = {("A", 2): 64, ("A", 3): 225, ("D", 4): 784, ("E", 6): 6084}
