"""Rigidity of x_{alpha_1}(1) and of the torus element in the A_2 block.

The first part perturbs every entry of the 8x8 block of x_1 allowed by
the weight structure.  Each perturbation gets a variable y_i that lies in
J, and only first-order terms are kept.  Four commutation conditions then
yield a square linear system in y_1..y_27.

The second part checks torus rigidity.  h_{alpha_1}(s) satisfies the three
torus conditions.  Conversely, the proof's chain of deductions is replayed
on any block-diagonal candidate d, and s is recovered.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConstraintViolated, NonvanishingConstant, PositionOutOfRange
from ..group import h_elem, w_elem, x_elem
from ..linalg import Matrix, integer_det, integer_rank, row_reduce
from ..rings import Ring, RingElement, parse_ring
from .golden import H2, W1, W2, X1, reference_algebra


class AffineForm:
    """c0 + sum c_i y_i over a ring, with products truncated at first order."""

    __slots__ = ("ring", "const", "coeffs")

    def __init__(self, ring: Ring, const=0, coeffs: dict[int, RingElement] | None = None):
        self.ring = ring
        self.const = ring(const)
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if not v.is_zero()}

    @classmethod
    def var(cls, ring: Ring, i: int, const=0, coef=1) -> "AffineForm":
        return cls(ring, const, {i: ring(coef)})

    def _lift(self, other) -> "AffineForm":
        if isinstance(other, AffineForm):
            return other
        return AffineForm(self.ring, other)

    def __add__(self, other):
        other = self._lift(other)
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            c[k] = c[k] + v if k in c else v
        return AffineForm(self.ring, self.const + other.const, c)

    __radd__ = __add__

    def __neg__(self):
        return AffineForm(self.ring, -self.const, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        c = {k: v * other.const for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            t = v * self.const
            c[k] = c[k] + t if k in c else t
        return AffineForm(self.ring, self.const * other.const, c)

    __rmul__ = __mul__

    def coeff(self, i: int) -> RingElement:
        return self.coeffs.get(i, self.ring.zero)

    def is_zero(self) -> bool:
        return self.const.is_zero() and not self.coeffs

    def __eq__(self, other):
        other = self._lift(other)
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        terms = [str(self.const)] + [f"{v}*y{k}" for k, v in sorted(self.coeffs.items())]
        return " + ".join(terms)


def form_matmul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum((a[i][t] * b[t][j] for t in range(k)), AffineForm(_ring_of(a, b), 0)) for j in range(m)]
            for i in range(n)]


def _ring_of(*mats):
    for mat in mats:
        for row in mat:
            for v in row:
                if isinstance(v, AffineForm):
                    return v.ring
    return parse_ring("int")


def _forms(ring: Ring, ints) -> list[list[AffineForm]]:
    return [[AffineForm(ring, int(v)) for v in row] for row in np.asarray(ints)]


def _sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _int_inverse(m: np.ndarray) -> np.ndarray:
    z = parse_ring("int")
    return Matrix.from_ints(z, m).inverse().to_ints().astype(np.int64)


# Rows are (condition, row, column), 1-based; the order matches y-elimination.
SLOTS: tuple[tuple[int, int, int], ...] = (
    (1, 1, 2), (1, 1, 3), (1, 1, 4), (1, 1, 5), (1, 1, 6), (1, 1, 7), (1, 1, 8), (1, 2, 6), (1, 3, 6),
    (1, 3, 7), (4, 3, 5), (3, 8, 2), (2, 1, 2), (4, 6, 2), (3, 3, 3), (2, 2, 2), (2, 3, 3), (2, 3, 4),
    (4, 7, 3), (2, 4, 6), (2, 5, 3), (2, 5, 6), (2, 7, 2), (2, 7, 8), (3, 1, 2), (3, 6, 6), (4, 7, 5),
)


def perturbed_x1(ring: Ring) -> list[list[AffineForm]]:
    """x_1 in block shape with y_1..y_27 placed on the entries not fixed by the normalisations.

    Entries named a..h follow the block layout: rows v1, v-1, V1, V2 use
    columns (v1, v-1, V1, V2), and the middle 4x4 block acts on v2, v-2, v12, v-12.
    """
    V = lambda i, c=0, coef=1: AffineForm.var(ring, i, c, coef)
    C = lambda c: AffineForm(ring, c)
    a = [V(1, 1), V(2, -1), V(3, -2), C(1)]
    b = [C(0), V(4, 1), V(5), C(0)]
    c = [V(6), V(7, 1), V(8, 1), V(9)]
    d = [V(10), V(11), V(12), V(13, 1)]
    e = [V(14, 1), V(15), V(16), V(17)]
    f = [V(18), V(19, 1), V(16, 0, -1), V(20, 1)]
    g = [V(21, -1), V(22), V(23, 1), V(24)]
    h = [V(25), V(26), C(0), V(27, 1)]
    z = C(0)
    rows = [
        [a[0], a[1], z, z, z, z, a[2], a[3]],
        [b[0], b[1], z, z, z, z, b[2], b[3]],
        [z, z, e[0], e[1], e[2], e[3], z, z],
        [z, z, f[0], f[1], f[2], f[3], z, z],
        [z, z, g[0], g[1], g[2], g[3], z, z],
        [z, z, h[0], h[1], h[2], h[3], z, z],
        [c[0], c[1], z, z, z, z, c[2], c[3]],
        [d[0], d[1], z, z, z, z, d[2], d[3]],
    ]
    return rows


@dataclass
class LinearSystem27:
    ring: Ring
    labels: list[tuple[int, int, int]]
    matrix: np.ndarray  # 27 x 27 object array of ints
    constants: list[int]
    conditions: dict[int, list[list[AffineForm]]] = field(repr=False, default_factory=dict)

    @property
    def det(self) -> int:
        return integer_det(self.matrix)

    @property
    def rank(self) -> int:
        return integer_rank(self.matrix)

    def unique_zero_solution(self, ring: Ring) -> dict:
        """Solve M y = 0 over a local ring by unit-pivot elimination."""
        m = Matrix.from_ints(ring, np.asarray(self.matrix, dtype=np.int64))
        red, piv, _ = row_reduce(ring, np.concatenate([m.data, ring.zeros((27, 1))], axis=1), ncols=27)
        full = len(piv) == 27
        sol_zero = full and bool(np.all(ring.is_zero(red[:, 27])))
        return {"ring": ring.descriptor, "det_unit": bool(m.det().is_unit()), "full_rank": full,
                "solution_zero": sol_zero}

    def with_flipped(self, slot: tuple[int, int, int], var: int) -> np.ndarray:
        out = self.matrix.copy()
        r = self.labels.index(slot)
        out[r, var - 1] = -out[r, var - 1]
        return out


def con_conditions(x1, ring: Ring) -> dict[int, list[list[AffineForm]]]:
    """Con1..Con4 as matrices of forms."""
    w1, w2, h2 = _forms(ring, W1), _forms(ring, W2), _forms(ring, H2)
    w1i, w2i = _forms(ring, _int_inverse(W1)), _forms(ring, _int_inverse(W2))
    eye = _forms(ring, np.eye(8, dtype=np.int64))
    mm = form_matmul
    x12 = mm(mm(w2, x1), w2i)
    x2 = mm(mm(w1, x12), w1i)
    return {
        1: _sub(mm(x1, x12), mm(x12, x1)),
        2: _sub(mm(mm(mm(h2, x1), h2), x1), eye),
        3: _sub(mm(mm(mm(x1, w1), x1), w1i), mm(mm(mm(w1, h2), x1), h2)),
        4: _sub(mm(x2, x1), mm(mm(x12, x1), x2)),
    }


def build_con_system(ring: Ring | None = None, slots=SLOTS) -> LinearSystem27:
    """Derive the 27 x 27 system from Con1..Con4 at the listed positions."""
    ring = ring or parse_ring("int")
    x1 = perturbed_x1(ring)
    base = [[v.const for v in row] for row in x1]
    if not all(int(base[i][j].raw) == int(X1[i, j]) for i in range(8) for j in range(8)):
        raise NonvanishingConstant("base point differs from x_alpha1(1)")
    cons = con_conditions(x1, ring)
    for k, mat in cons.items():
        for i, row in enumerate(mat):
            for j, v in enumerate(row):
                if not v.const.is_zero():
                    raise NonvanishingConstant(f"Con{k} ({i + 1},{j + 1}) has constant {v.const}")
    rows = []
    consts = []
    for cond, r, c in slots:
        if cond not in cons or not (1 <= r <= 8 and 1 <= c <= 8):
            raise PositionOutOfRange(f"slot {(cond, r, c)}")
        form = cons[cond][r - 1][c - 1]
        rows.append([_to_int(form.coeff(i)) for i in range(1, 28)])
        consts.append(_to_int(form.const))
    mat = np.empty((len(slots), 27), dtype=object)
    for i, row in enumerate(rows):
        mat[i, :] = row
    return LinearSystem27(ring, list(slots), mat, consts, cons)


def _to_int(v: RingElement) -> int:
    return int(v.raw)


# -- torus rigidity -------------------------------------------------------------

BLOCKS = ((0, 1), (2, 3), (4, 5), (6, 7))  # (v1,v-1), (v2,v-2), (v12,v-12), (V1,V2)


@dataclass
class TorusReport:
    s: str
    necessity: bool
    recovered: str | None
    steps: list[dict]
    ok: bool

    def as_dict(self) -> dict:
        return {"s": self.s, "necessity": self.necessity, "recovered": self.recovered,
                "steps": self.steps, "ok": self.ok}


def _torus_mats(ring: Ring):
    alg = reference_algebra()
    s = alg.system
    one = ring(1)
    w1 = w_elem(s.simple(1), one, alg).matrix
    w2 = w_elem(s.simple(2), one, alg).matrix
    x2 = x_elem(s.simple(2), one, alg).matrix
    w1i = w_elem(s.simple(1), -one, alg).matrix
    w2i = w_elem(s.simple(2), -one, alg).matrix
    return alg, w1, w2, x2, w1i, w2i


def torus_conditions(d: Matrix) -> dict[str, Matrix]:
    ring = d.ring
    _, w1, w2, x2, w1i, w2i = _torus_mats(ring)
    x2t = d @ x2 @ w1 @ d @ w1i
    eye = Matrix.identity(ring, 8)
    return {
        "Con5": x2t @ x2 - x2 @ x2t,
        "Con6": d @ w1 @ d @ w1i - eye,
        "Con7": w2 @ d @ w2i - d @ w1 @ w2 @ d @ w2i @ w1i,
    }


def _entries(d: Matrix):
    g = lambda i, j: d[i, j]
    k = [g(0, 0), g(0, 1), g(1, 0), g(1, 1)]
    l = [g(2, 2), g(2, 3), g(3, 2), g(3, 3)]
    m = [g(4, 4), g(4, 5), g(5, 4), g(5, 5)]
    n = [g(6, 6), g(6, 7), g(7, 6), g(7, 7)]
    return k, l, m, n


def recover_torus(d: Matrix, steps: list | None = None) -> RingElement:
    """Replay the deductions on d; return s with d = h_alpha1(s).

    Every step evaluates the condition entries it relies on and then checks
    its conclusion.  The first failure raises ConstraintViolated(label).
    Steps marked ``forced=False`` are conclusions that the listed entries
    do not imply over every local ring; they are checked, not derived.
    """
    ring = d.ring
    steps = steps if steps is not None else []
    z = ring.is_zero(d.data)
    mask = np.ones((8, 8), dtype=bool)
    for a, b in BLOCKS:
        mask[a:b + 1, a:b + 1] = False
    if not np.all(z[mask]):
        raise ConstraintViolated("block shape", "d is not block diagonal")
    con = torus_conditions(d)
    k, l, m, n = _entries(d)

    def step(label, cells, conclusion, forced=True):
        vals = {f"{c}{(i, j)}": str(con[c][i - 1, j - 1]) for c, i, j in cells}
        ok_cells = all(con[c][i - 1, j - 1].is_zero() for c, i, j in cells)
        ok = ok_cells and conclusion()
        steps.append({"step": label, "entries": vals, "forced": forced, "pass": bool(ok)})
        if not ok:
            raise ConstraintViolated(label, "entries do not vanish" if not ok_cells else "conclusion fails")

    if not (k[0].is_unit() and l[0].is_unit()):
        raise ConstraintViolated("units k1, l1", "diagonal entries must be units")
    step("Con5 (1,6): k2 = -k3", [("Con5", 1, 6)], lambda: (k[1] + k[2]).is_zero())
    step("Con5 (2,1),(2,5): l3 = m3 = 0", [("Con5", 2, 1), ("Con5", 2, 5)],
         lambda: l[2].is_zero() and m[2].is_zero())
    step("Con5 (5,6): k2 = k3 = 0", [("Con5", 5, 6)], lambda: k[1].is_zero() and k[2].is_zero())
    step("Con6 diagonal: k1 k4 = l1 m1 = l4 m4 = 1", [("Con6", 1, 1), ("Con6", 3, 3), ("Con6", 4, 4)],
         lambda: k[0] * k[3] == 1 and l[0] * m[0] == 1 and l[3] * m[3] == 1)
    step("Con7 (1,2),(4,3): m2 = l2 = 0", [("Con7", 1, 2), ("Con7", 4, 3)],
         lambda: m[1].is_zero() and l[1].is_zero())
    step("Con7 (1,1): l4 = l1 k1", [("Con7", 1, 1)], lambda: l[3] == l[0] * k[0])
    step("Cartan block: n2 = n3 = 0, n1 = n4 = 1",
         [("Con5", 3, 7), ("Con5", 3, 8), ("Con6", 7, 7), ("Con6", 7, 8), ("Con7", 7, 7)],
         lambda: n[1].is_zero() and n[2].is_zero() and n[0] == 1 and n[3] == 1, forced=False)
    step("Con5 (3,4): k1 = 1/l1^2", [("Con5", 3, 4)], lambda: k[0] * l[0] * l[0] == 1)
    s = l[0].inverse()
    alg = reference_algebra()
    h = h_elem(alg.system.simple(1), s, alg).matrix
    all_zero = all(c.is_zero() for c in con.values())
    ok = all_zero and h == d
    steps.append({"step": "recover s = 1/l1 and d = h_alpha1(s)", "entries": {}, "forced": True, "pass": ok})
    if not ok:
        raise ConstraintViolated("recover s = 1/l1 and d = h_alpha1(s)",
                                 "conditions not all zero" if not all_zero else "d differs from h_alpha1(s)")
    return s


def verify_torus_rigidity(s: RingElement, d: Matrix | None = None) -> TorusReport:
    """Both directions for the unit s (and optionally a given candidate d)."""
    ring = s.ring
    alg = reference_algebra()
    h = h_elem(alg.system.simple(1), s, alg).matrix
    necessity = all(c.is_zero() for c in torus_conditions(h).values())
    steps: list[dict] = []
    cand = h if d is None else d
    try:
        rec = recover_torus(cand, steps)
        recovered = str(rec)
        ok = necessity and (d is not None or rec == s)
    except ConstraintViolated:
        recovered = None
        ok = False
    return TorusReport(str(s), necessity, recovered, steps, ok)
