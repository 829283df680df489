"""Chevalley basis, structure constants and adjoint matrices.

Basis ordering (0-based positions): for the j-th positive root beta_j,
position 2j holds x_{beta_j} and 2j+1 holds x_{-beta_j}; positions
2m, ..., 2m+l-1 hold h_1, ..., h_l.  Matrices act on columns: column j of
ad(x) is [x, b_j] in this basis.

Signs are produced by the Frenkel-Kac cocycle on the root lattice:
eps(a, b) = (-1)^(a^T B b) with B the upper triangle of the Cartan matrix
(diagonal entries 1).  Setting x_a = E_a and x_{-a} = -E_{-a} for a > 0
gives [x_a, x_{-a}] = h_a.  The basis is then rescaled on pairs x_{+-xi}
so that every extraspecial pair has N = +1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import MixedSystems, NonIntegralDividedPower
from .roots import Root, RootSystem, build, system_of


@dataclass(frozen=True)
class BasisIndex:
    tag: str  # "X" or "H"
    system: str
    root: tuple[int, ...] | None = None
    node: int | None = None  # 1-based for H
    position: int = 0

    def __str__(self):
        if self.tag == "H":
            return f"h{self.node}"
        return "x" + "(" + ",".join(map(str, self.root)) + ")"


@dataclass(frozen=True, eq=False)
class ChevalleyAlgebra:
    """Structure-constant table and adjoint data for one root system.

    ``signs`` holds the per-positive-root rescaling eps_beta applied to the
    pair x_{+-beta} relative to the Carter-normalised basis.
    """

    system: RootSystem
    N: np.ndarray = field(repr=False)  # N[i, j] for root indices, 0 if i+j not a root
    signs: tuple[int, ...] = ()

    # -- basis ----------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.system.n

    def root_position(self, ridx: int) -> int:
        m = self.system.m
        return 2 * ridx if ridx < m else 2 * (ridx - m) + 1

    @functools.cached_property
    def position_root(self) -> np.ndarray:
        """Root index at each X position, -1 at Cartan positions."""
        out = -np.ones(self.n, dtype=np.int64)
        for r in range(2 * self.system.m):
            out[self.root_position(r)] = r
        return out

    def basis(self) -> list[BasisIndex]:
        s = self.system
        out = []
        for pos in range(self.n):
            r = int(self.position_root[pos])
            if r >= 0:
                out.append(BasisIndex("X", s.name, root=s.roots[r].coords, position=pos))
            else:
                out.append(BasisIndex("H", s.name, node=pos - 2 * s.m + 1, position=pos))
        return out

    def basis_x(self, r: Root) -> BasisIndex:
        return self.basis()[self.root_position(self.system.root_index(r))]

    def basis_h(self, i: int) -> BasisIndex:
        if not 1 <= i <= self.system.rank:
            raise IndexError(f"no h_{i}")
        return self.basis()[2 * self.system.m + i - 1]

    @functools.cached_property
    def weights(self) -> np.ndarray:
        """Root-lattice weight of each basis position (zero for Cartan positions)."""
        w = np.zeros((self.n, self.system.rank), dtype=np.int64)
        for pos in range(self.n):
            r = int(self.position_root[pos])
            if r >= 0:
                w[pos] = self.system.coord_array[r]
        return w

    # -- structure constants --------------------------------------------------
    def structure_constant(self, alpha: Root, beta: Root) -> int:
        """N_{alpha,beta}, or 0 when alpha + beta is not a root."""
        s = self.system
        return int(self.N[s.root_index(alpha), s.root_index(beta)])

    def bracket_vector(self, a: int, b: int) -> np.ndarray:
        """[b_a, b_b] as an integer coefficient vector (positions a, b)."""
        return self.ad_by_position[a][:, b].copy()

    def bracket(self, a: BasisIndex, b: BasisIndex) -> dict[BasisIndex, int]:
        if a.system != self.system.name or b.system != self.system.name:
            raise MixedSystems(f"{a.system}/{b.system} with {self.system.name}")
        v = self.bracket_vector(a.position, b.position)
        basis = self.basis()
        return {basis[i]: int(v[i]) for i in np.flatnonzero(v)}

    @functools.cached_property
    def ad_by_position(self) -> list[np.ndarray]:
        """ad(b_p) for every basis position p, as int64 n x n matrices."""
        s = self.system
        n, m, l = self.n, s.m, s.rank
        coords = s.coord_array
        ads = []
        for p in range(n):
            mat = np.zeros((n, n), dtype=np.int64)
            r = int(self.position_root[p])
            if r >= 0:
                a = coords[r]
                for q in range(n):
                    t = int(self.position_root[q])
                    if t < 0:
                        # [x_a, h_i] = -<a, alpha_i> x_a
                        i = q - 2 * m
                        mat[p, q] = -int(a @ s.cartan[:, i])
                        continue
                    b = coords[t]
                    if np.all(a + b == 0):
                        mat[2 * m :, q] = a  # [x_a, x_-a] = h_a
                    elif self.N[r, t]:
                        mat[self.root_position(int(s.sum_index[r, t])), q] = self.N[r, t]
            else:
                i = p - 2 * m
                for q in range(2 * m):
                    t = int(self.position_root[q])
                    mat[q, q] = int(coords[t] @ s.cartan[:, i])
            ads.append(mat)
        return ads

    def ad_matrix(self, alpha: Root) -> np.ndarray:
        """Integer matrix of ad x_alpha in the basis ordering."""
        s = self.system
        return self.ad_by_position[self.root_position(s.root_index(alpha))]

    def ad_root_index(self, ridx: int) -> np.ndarray:
        return self.ad_by_position[self.root_position(ridx)]

    @functools.lru_cache(maxsize=None)
    def divided_square(self, ridx: int) -> np.ndarray:
        """(ad x)^2 / 2 over Z; raises if (ad x)^2 has an odd entry."""
        a = self.ad_root_index(ridx)
        sq = a @ a
        if np.any(sq % 2):
            raise NonIntegralDividedPower(f"(ad x_{self.system.roots[ridx]})^2 has an odd entry")
        return sq // 2

    def killing_form(self, a: BasisIndex, b: BasisIndex) -> int:
        if a.system != self.system.name or b.system != self.system.name:
            raise MixedSystems(f"{a.system}/{b.system} with {self.system.name}")
        return int(np.trace(self.ad_by_position[a.position] @ self.ad_by_position[b.position]))

    def jacobi_violations(self, pairs=None) -> list[tuple[int, int]]:
        """Position pairs (a, b) where ad[a, b] != [ad a, ad b].

        ad is a representation exactly when the Jacobi identity holds, so
        checking it on all pairs is equivalent to checking all triples.
        """
        n = self.n
        ads = self.ad_by_position
        stacked = np.stack(ads)
        bad = []
        it = pairs if pairs is not None else ((a, b) for a in range(n) for b in range(a + 1, n))
        for a, b in it:
            lhs = np.tensordot(ads[a][:, b], stacked, axes=(0, 0))
            rhs = ads[a] @ ads[b] - ads[b] @ ads[a]
            if not np.array_equal(lhs, rhs):
                bad.append((a, b))
        return bad

    def symmetry_violations(self) -> list[str]:
        s = self.system
        m = s.m
        neg = lambda i: i + m if i < m else i - m
        bad = []
        for i in range(2 * m):
            for j in range(2 * m):
                if self.N[i, j]:
                    if self.N[j, i] != -self.N[i, j]:
                        bad.append(f"N[{i},{j}] antisymmetry")
                    if self.N[neg(i), neg(j)] != -self.N[i, j]:
                        bad.append(f"N[{i},{j}] negation rule")
        return bad

    def extraspecial_pairs(self) -> dict[int, tuple[int, int]]:
        """For each non-simple positive root xi, the pair (alpha, beta) with
        alpha + beta = xi, 0 < alpha < beta, alpha minimal in the root order."""
        s = self.system
        out = {}
        for k in range(s.rank, s.m):
            xi = s.coord_array[k]
            for i in range(k):
                d = tuple(int(x) for x in xi - s.coord_array[i])
                j = s.index.get(d)
                if j is not None and j < s.m and j > i:
                    out[k] = (i, j)
                    break
        return out

    def with_signs(self, signs) -> "ChevalleyAlgebra":
        """Rescale x_{+-beta_j} by signs[j] (signs[j] in {+1,-1})."""
        signs = tuple(int(e) for e in signs)
        m = self.system.m
        if len(signs) != m or any(e not in (1, -1) for e in signs):
            raise ValueError("need one sign +-1 per positive root")
        full = np.array(signs + signs, dtype=np.int64)
        base = np.array(self.signs or (1,) * m, dtype=np.int64)
        s = self.system
        S = s.sum_index
        N = self.N * full[:, None] * full[None, :] * np.where(S >= 0, full[S], 0)
        return ChevalleyAlgebra(s, N, tuple(int(x) for x in base * np.array(signs)))


def _cocycle_table(s: RootSystem) -> np.ndarray:
    """N for the x-basis derived from the Frenkel-Kac cocycle."""
    a = s.cartan
    B = np.triu(a, 1) + np.eye(s.rank, dtype=np.int64)
    c = s.coord_array
    m = s.m
    eps = np.where((c @ B @ c.T) % 2 == 0, 1, -1)
    # x_a = sgn(a) E_a with sgn = +1 on positive roots, -1 on negative ones
    sgn = np.array([1] * m + [-1] * m, dtype=np.int64)
    S = s.sum_index
    N = np.where(S >= 0, sgn[:, None] * sgn[None, :] * sgn[S] * eps, 0)
    return N


@functools.lru_cache(maxsize=None)
def _algebra(family: str, rank: int) -> ChevalleyAlgebra:
    s = build(family, rank)
    alg = ChevalleyAlgebra(s, _cocycle_table(s))
    # roots are visited by increasing height, so each pair is already final
    for k, (i, j) in sorted(alg.extraspecial_pairs().items()):
        if alg.N[i, j] == -1:
            signs = [1] * s.m
            signs[k] = -1
            alg = ChevalleyAlgebra(s, alg.with_signs(signs).N)
    return alg


def algebra(system) -> ChevalleyAlgebra:
    """Cached Carter-normalised Chevalley algebra for a RootSystem or Root."""
    if isinstance(system, Root):
        system = system_of(system)
    if not isinstance(system, RootSystem):
        raise TypeError("expected a RootSystem")
    return _algebra(system.family, system.rank)


def bracket(a: BasisIndex, b: BasisIndex) -> dict[BasisIndex, int]:
    if a.system != b.system:
        raise MixedSystems(f"{a.system} vs {b.system}")
    return algebra(build(a.system[0], int(a.system[1:]))).bracket(a, b)


def ad_matrix(alpha: Root) -> np.ndarray:
    return algebra(alpha).ad_matrix(alpha)


def killing_form(a: BasisIndex, b: BasisIndex) -> int:
    if a.system != b.system:
        raise MixedSystems(f"{a.system} vs {b.system}")
    return algebra(build(a.system[0], int(a.system[1:]))).killing_form(a, b)


def nilpotency_profile(alpha: Root, alg: ChevalleyAlgebra | None = None) -> tuple[bool, bool]:
    """(ad^2 != 0, ad^3 == 0) for x_alpha."""
    alg = alg or algebra(alpha)
    a = alg.ad_matrix(alpha)
    sq = a @ a
    return bool(np.any(sq)), not np.any(sq @ a)


def grading_violations(alg: ChevalleyAlgebra, ridx: int) -> int:
    """Number of nonzero entries of ad x_beta off the weight grading."""
    a = alg.ad_root_index(ridx)
    w = alg.weights
    beta = alg.system.coord_array[ridx]
    rows, cols = np.nonzero(a)
    return int(sum(1 for i, j in zip(rows, cols) if not np.array_equal(w[i], w[j] + beta)))

