"""Elementary Chevalley group generators and the Steinberg relation checker.

x_a(t) = I + t A + t^2 (A^2/2) with A = ad x_a, where A^2/2 is computed
over Z.  w_a(t) = x_a(t) x_{-a}(-1/t) x_a(t) and h_a(t) = w_a(t) w_a(1)^{-1}.

Internally the generators are built in batches: a raw parameter array of
shape (S,) + elem_shape gives S matrices at once, which keeps the relation
checks vectorised.
"""

from __future__ import annotations

import functools
import hashlib
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chevalley import ChevalleyAlgebra, algebra
from .errors import NoMatch, NonUnit, RingMismatch
from .linalg import Matrix
from .rings import Ring, RingElement, parse_ring
from .roots import Root, RootSystem, system_of


@dataclass(frozen=True)
class Token:
    kind: str  # "x", "w" or "h"
    root: tuple[int, ...]
    param: RingElement

    def __str__(self):
        return f"{self.kind}{list(self.root)}({self.param})"

    def inverse(self) -> "Token":
        if self.kind == "h":
            return Token("h", self.root, self.param.inverse())
        return Token(self.kind, self.root, -self.param)


class GroupElement:
    """An invertible matrix over a ring, optionally with its generator word."""

    __slots__ = ("matrix", "word", "algebra")

    def __init__(self, matrix: Matrix, word: tuple[Token, ...] | None = None, alg: ChevalleyAlgebra | None = None):
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "algebra", alg)

    def __setattr__(self, name, value):
        raise AttributeError("GroupElement is immutable")

    @property
    def ring(self) -> Ring:
        return self.matrix.ring

    @property
    def n(self) -> int:
        return self.matrix.nrows

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement):
            return NotImplemented
        word = self.word + other.word if self.word is not None and other.word is not None else None
        return GroupElement(self.matrix @ other.matrix, word, self.algebra or other.algebra)

    __mul__ = __matmul__

    def inverse(self) -> "GroupElement":
        if self.word is not None and self.algebra is not None:
            inv_word = tuple(t.inverse() for t in reversed(self.word))
            return GroupElement(evaluate_word(self.algebra, self.ring, inv_word), inv_word, self.algebra)
        return GroupElement(self.matrix.inverse(), None, self.algebra)

    def __eq__(self, other):
        if isinstance(other, GroupElement):
            return self.matrix == other.matrix
        if isinstance(other, Matrix):
            return self.matrix == other
        return NotImplemented

    __hash__ = None

    def det(self) -> RingElement:
        return self.matrix.det()

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def word_reproduces(self) -> bool:
        """True when multiplying out the stored word gives the matrix exactly."""
        if self.word is None:
            return True
        return evaluate_word(self.algebra, self.ring, self.word) == self.matrix

    def residue(self) -> "GroupElement":
        word = None
        if self.word is not None:
            word = tuple(Token(t.kind, t.root, t.param.residue()) for t in self.word)
        return GroupElement(self.matrix.residue(), word, self.algebra)

    def word_str(self) -> str:
        return " ".join(map(str, self.word or ()))


class Generators:
    """Batched generator construction for one algebra over one ring."""

    def __init__(self, alg: ChevalleyAlgebra, ring: Ring):
        self.alg = alg
        self.ring = ring
        self.n = alg.n
        self.eye = ring.eye(self.n)
        self._A: dict[int, np.ndarray] = {}
        self._B: dict[int, np.ndarray] = {}

    def neg(self, ridx: int) -> int:
        m = self.alg.system.m
        return ridx + m if ridx < m else ridx - m

    def _ab(self, ridx: int):
        """Sparse support of A and A^2/2: (rows, cols, A values, B values) in the ring."""
        if ridx not in self._A:
            A = self.alg.ad_root_index(ridx)
            B = self.alg.divided_square(ridx)
            rows, cols = np.nonzero((A != 0) | (B != 0))
            self._A[ridx] = (rows, cols, self.ring.from_ints(A[rows, cols]))
            self._B[ridx] = self.ring.from_ints(B[rows, cols])
        return self._A[ridx], self._B[ridx]

    def x(self, ridx: int, t: np.ndarray) -> np.ndarray:
        r = self.ring
        (rows, cols, av), bv = self._ab(ridx)
        tb = t.reshape(t.shape[:1] + (1,) + t.shape[1:])
        vals = r.add(r.mul(tb, av), r.mul(r.mul(tb, tb), bv))
        out = np.broadcast_to(self.eye, t.shape[:1] + self.eye.shape).copy()
        out[:, rows, cols] = r.add(out[:, rows, cols], vals)
        return out

    def w(self, ridx: int, t: np.ndarray) -> np.ndarray:
        r = self.ring
        xt = self.x(ridx, t)
        return r.matmul(r.matmul(xt, self.x(self.neg(ridx), r.neg(r.inv(t)))), xt)

    def h(self, ridx: int, t: np.ndarray) -> np.ndarray:
        r = self.ring
        return r.matmul(self.w(ridx, t), self.w_minus_one(ridx))

    @functools.lru_cache(maxsize=None)
    def w_minus_one(self, ridx: int) -> np.ndarray:
        """w_a(1)^{-1} = w_a(-1), as a single matrix."""
        return self.w(ridx, self.ring.stack([-1]))[0]

    @functools.lru_cache(maxsize=None)
    def w_one(self, ridx: int) -> np.ndarray:
        return self.w(ridx, self.ring.stack([1]))[0]

    def equal(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Per-sample exact equality of two batches of matrices."""
        z = self.ring.is_zero(self.ring.sub(a, b))
        return z.reshape(z.shape[:1] + (-1,)).all(axis=1) if z.ndim > 2 else np.array([z.all()])


@functools.lru_cache(maxsize=64)
def generators(alg: ChevalleyAlgebra, ring: Ring) -> Generators:
    return Generators(alg, ring)


def _resolve(alpha: Root, t, alg: ChevalleyAlgebra | None):
    alg = alg or algebra(system_of(alpha))
    if not isinstance(t, RingElement):
        raise TypeError("parameter must be a RingElement (its ring determines the group)")
    return alg, alg.system.root_index(alpha)


def x_elem(alpha: Root, t: RingElement, alg: ChevalleyAlgebra | None = None) -> GroupElement:
    alg, r = _resolve(alpha, t, alg)
    g = generators(alg, t.ring)
    mat = g.x(r, t.ring.stack([t]))[0]
    return GroupElement(Matrix(t.ring, mat), (Token("x", alpha.coords, t),), alg)


def w_elem(alpha: Root, t: RingElement, alg: ChevalleyAlgebra | None = None) -> GroupElement:
    alg, r = _resolve(alpha, t, alg)
    if not t.is_unit():
        raise NonUnit(f"w_alpha(t) needs a unit, got {t}")
    g = generators(alg, t.ring)
    mat = g.w(r, t.ring.stack([t]))[0]
    return GroupElement(Matrix(t.ring, mat), (Token("w", alpha.coords, t),), alg)


def h_elem(alpha: Root, t: RingElement, alg: ChevalleyAlgebra | None = None) -> GroupElement:
    alg, r = _resolve(alpha, t, alg)
    if not t.is_unit():
        raise NonUnit(f"h_alpha(t) needs a unit, got {t}")
    g = generators(alg, t.ring)
    mat = g.h(r, t.ring.stack([t]))[0]
    return GroupElement(Matrix(t.ring, mat), (Token("h", alpha.coords, t),), alg)


def identity(alg: ChevalleyAlgebra, ring: Ring) -> GroupElement:
    return GroupElement(Matrix.identity(ring, alg.n), (), alg)


def evaluate_word(alg: ChevalleyAlgebra, ring: Ring, word) -> Matrix:
    g = generators(alg, ring)
    s = alg.system
    out = g.eye
    for tok in word:
        if tok.param.ring != ring:
            raise RingMismatch(f"token over {tok.param.ring.descriptor} in a {ring.descriptor} word")
        r = s.index[tok.root]
        t = ring.stack([tok.param])
        mat = {"x": g.x, "w": g.w, "h": g.h}[tok.kind](r, t)[0]
        out = ring.matmul(out, mat)
    return Matrix(ring, out)


def c_sign(alpha: Root, beta: Root, ring: Ring | None = None, t: RingElement | None = None,
           alg: ChevalleyAlgebra | None = None) -> int:
    """c with w_a(1) x_b(t) w_a(1)^{-1} = x_{s_a b}(c t)."""
    ring = ring or parse_ring("int")
    alg = alg or algebra(system_of(alpha))
    s = alg.system
    t = ring(1) if t is None else t
    one = ring(1)
    conj = w_elem(alpha, one, alg) @ x_elem(beta, t, alg) @ w_elem(alpha, -one, alg)
    gamma = s.reflect(alpha, beta)
    for c in (1, -1):
        if conj.matrix == x_elem(gamma, t * c, alg).matrix:
            return c
    raise NoMatch(f"no sign matches for alpha={alpha}, beta={beta}")


def h_minus_one_pattern(system: RootSystem, i: int, alg: ChevalleyAlgebra | None = None) -> dict:
    """Diagonal of h_{alpha_i}(-1) over Z, compared with two predictions.

    The parity rule predicts -1 on x_{+-beta} iff <beta, alpha_i> is odd.
    The narrower rule predicts -1 iff <beta, alpha_i> = -1.  Positive roots
    where the two predictions differ are listed in ``disagreements``.
    """
    alg = alg or algebra(system)
    z = parse_ring("int")
    a = system.simple(i)
    h = h_elem(a, z(-1), alg).matrix
    diag = [int(h[k, k].raw) for k in range(alg.n)]
    off_diag = any(int(h[p, q].raw) for p, q in h.nonzero_positions() if p != q)
    parity_ok = True
    disagreements = []
    for j, beta in enumerate(system.positive):
        c = system.pairing(beta, a)
        expect = -1 if c % 2 else 1
        if diag[2 * j] != expect or diag[2 * j + 1] != expect:
            parity_ok = False
        if (c == -1) != (c % 2 == 1):
            disagreements.append({"root": list(beta.coords), "pairing": c})
    cartan_ok = all(d == 1 for d in diag[2 * system.m :])
    return {
        "diagonal": diag,
        "is_diagonal": not off_diag,
        "parity_rule_holds": parity_ok and cartan_ok and not off_diag,
        "disagreements": disagreements,
    }


# -- relation checks ------------------------------------------------------------

RELATIONS = ("R1", "R2", "R4", "R5", "R6")


def thread_count() -> int:
    try:
        v = int(os.environ.get("CHEV_THREADS", "0"))
    except ValueError:
        v = 0
    return v if v > 0 else (os.cpu_count() or 1)


def _case_rng(seed: int, *key) -> random.Random:
    h = hashlib.sha256(repr((seed,) + key).encode()).digest()
    return random.Random(int.from_bytes(h[:8], "big"))


def _sample(ring: Ring, rng: random.Random, count: int, units: bool) -> list[RingElement]:
    return [ring.random_unit(rng) if units else ring.random_element(rng) for _ in range(count)]


def check_relations(system: RootSystem, ring: Ring, samples: int = 20, seed: int = 0,
                    alg: ChevalleyAlgebra | None = None, threads: int | None = None) -> dict:
    """Check (R1), (R2), (R4), (R5), (R6) on all roots/pairs with seeded samples.

    Returns ``{"cases": [...], "summary": {...}, "sign_table": [...]}``.
    Cases are sorted canonically, so the report does not depend on
    scheduling.
    """
    alg = alg or algebra(system)
    gen = generators(alg, ring)
    s = system
    nroots = 2 * s.m
    tasks = [("R1", a, None) for a in range(nroots)]
    tasks += [(rel, a, b) for rel in ("R2", "R4", "R5", "R6") for a in range(nroots) for b in range(nroots)]
    threads = threads or thread_count()

    def run(task):
        rel, a, b = task
        return _check_one(gen, ring, rel, a, b, samples, seed)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            results = list(ex.map(run, tasks))
    else:
        results = [run(t) for t in tasks]
    cases = [c for group in results for c in group]
    order = {r: i for i, r in enumerate(RELATIONS)}
    cases.sort(key=lambda c: (order[c["relation"]], c["_a"], c["_b"], c["sample"]))
    summary = {}
    for rel in RELATIONS:
        sel = [c for c in cases if c["relation"] == rel]
        summary[rel] = {"cases": len(sel), "failures": sum(1 for c in sel if not c["pass"])}
    for c in cases:
        del c["_a"], c["_b"]
    sign_table = []
    for a in range(nroots):
        for b in range(nroots):
            if alg.N[a, b]:
                sign_table.append({"alpha": list(s.roots[a].coords), "beta": list(s.roots[b].coords),
                                   "N": int(alg.N[a, b])})
    return {
        "system": s.name,
        "ring": ring.descriptor,
        "samples": samples,
        "seed": seed,
        "summary": summary,
        "violations": sum(v["failures"] for v in summary.values()),
        "sign_table": sign_table,
        "cases": cases,
    }


def _check_one(gen: Generators, ring: Ring, rel: str, a: int, b: int | None, samples: int, seed: int) -> list[dict]:
    s = gen.alg.system
    rng = _case_rng(seed, rel, a, b)
    ra = list(s.roots[a].coords)
    rb = None if b is None else list(s.roots[b].coords)
    out = []

    def emit(ok, params, signs=None):
        for k in range(samples):
            out.append({
                "relation": rel, "alpha": ra, "beta": rb, "sample": k,
                "params": [str(p[k]) for p in params],
                "pass": bool(ok[k]),
                "realized_sign": None if signs is None else signs[k],
                "_a": a, "_b": -1 if b is None else b,
            })

    mm = ring.matmul
    if rel == "R1":
        t = _sample(ring, rng, samples, False)
        u = _sample(ring, rng, samples, False)
        T, U = ring.stack(t), ring.stack(u)
        ok = gen.equal(mm(gen.x(a, T), gen.x(a, U)), gen.x(a, ring.add(T, U)))
        emit(ok, [t, u])
    elif rel == "R2":
        if int(s.sum_index[a, b]) < 0 and a == gen.neg(b):
            return out  # alpha = -beta is not covered by the commutator formula
        t = _sample(ring, rng, samples, False)
        u = _sample(ring, rng, samples, False)
        T, U = ring.stack(t), ring.stack(u)
        comm = mm(mm(mm(gen.x(a, T), gen.x(b, U)), gen.x(a, ring.neg(T))), gen.x(b, ring.neg(U)))
        g = int(s.sum_index[a, b])
        if g < 0:
            ok = gen.equal(comm, np.broadcast_to(gen.eye, comm.shape))
            emit(ok, [t, u])
        else:
            N = int(gen.alg.N[a, b])
            TU = ring.mul(T, U)
            plus = gen.equal(comm, gen.x(g, TU))
            minus = gen.equal(comm, gen.x(g, ring.neg(TU)))
            # when tu = 0 both signs match; the structure constant is then consistent
            signs = [N if (p and m) else (1 if p else (-1 if m else 0)) for p, m in zip(plus, minus)]
            emit([sg == N for sg in signs], [t, u], signs)
    elif rel == "R4":
        t = _sample(ring, rng, samples, True)
        T = ring.stack(t)
        g = s.index[s.reflect(s.roots[a], s.roots[b]).coords]
        lhs = mm(mm(gen.w_one(a), gen.h(b, T)), gen.w_minus_one(a))
        emit(gen.equal(lhs, gen.h(g, T)), [t])
    elif rel == "R5":
        t = _sample(ring, rng, samples, False)
        T = ring.stack(t)
        g = s.index[s.reflect(s.roots[a], s.roots[b]).coords]
        lhs = mm(mm(gen.w_one(a), gen.x(b, T)), gen.w_minus_one(a))
        plus = gen.equal(lhs, gen.x(g, T))
        minus = gen.equal(lhs, gen.x(g, ring.neg(T)))
        c = 1 if all(plus) else (-1 if all(minus) else 0)
        signs = [c if (p and mi) else (1 if p else (-1 if mi else 0)) for p, mi in zip(plus, minus)]
        emit([c != 0] * samples, [t], signs)
    elif rel == "R6":
        t = _sample(ring, rng, samples, True)
        u = _sample(ring, rng, samples, False)
        T, U = ring.stack(t), ring.stack(u)
        e = s.pairing(s.roots[b], s.roots[a])
        lhs = mm(mm(gen.h(a, T), gen.x(b, U)), gen.h(a, ring.inv(T)))
        scale = ring.stack([ti**e for ti in t])
        emit(gen.equal(lhs, gen.x(b, ring.mul(scale, U))), [t, u])
    return out
