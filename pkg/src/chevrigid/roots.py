"""Simply-laced root systems A_l (l >= 2), D_l (l >= 4), E_6, E_7, E_8.

Roots are integer coordinate vectors over the simple roots, numbered as in
Bourbaki.  The full root set is generated by closing the simple roots under
simple reflections.  Positive roots are sorted by height, and within one
height by descending coordinates, so that alpha_1, ..., alpha_l come first
in their natural order.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import MixedSystems, NotARoot, UnsupportedType

EXPECTED_POSITIVE = {"E": {6: 36, 7: 63, 8: 120}}


def cartan_matrix(family: str, rank: int) -> np.ndarray:
    """Bourbaki Cartan matrix (symmetric for simply-laced types)."""
    family, rank = _admissible(family, rank)
    a = 2 * np.eye(rank, dtype=np.int64)
    edges: list[tuple[int, int]] = []
    if family == "A":
        edges = [(i, i + 1) for i in range(rank - 1)]
    elif family == "D":
        edges = [(i, i + 1) for i in range(rank - 2)] + [(rank - 3, rank - 1)]
    else:
        # 1-3-4-5-6(-7-8), with 2 attached to 4
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, rank - 1)]
    for i, j in edges:
        a[i, j] = a[j, i] = -1
    return a


def expected_positive_count(family: str, rank: int) -> int:
    family, rank = _admissible(family, rank)
    if family == "A":
        return rank * (rank + 1) // 2
    if family == "D":
        return rank * (rank - 1)
    return EXPECTED_POSITIVE["E"][rank]


def _admissible(family: str, rank: int) -> tuple[str, int]:
    fam = str(family).strip().upper()
    try:
        rank = int(rank)
    except (TypeError, ValueError):
        raise UnsupportedType(f"rank {rank!r} is not an integer") from None
    ok = (fam == "A" and rank >= 2) or (fam == "D" and rank >= 4) or (fam == "E" and rank in (6, 7, 8))
    if not ok:
        raise UnsupportedType(f"type {fam}{rank} is not one of A_l (l>=2), D_l (l>=4), E_6, E_7, E_8")
    return fam, rank


@dataclass(frozen=True)
class Root:
    system: str  # e.g. "A2"; identifies the owning RootSystem
    coords: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.coords)

    def __neg__(self) -> "Root":
        return Root(self.system, tuple(-c for c in self.coords))

    def __str__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"

    def label(self) -> str:
        """Compact label like ``1+2`` or ``-1-2`` in simple-root indices (with multiplicity)."""
        parts = []
        for i, c in enumerate(self.coords, start=1):
            parts.extend([str(i)] * abs(c))
        sign = "" if self.is_positive else "-"
        return sign + ("+" if self.is_positive else "-").join(parts)


@dataclass(frozen=True, eq=False)
class RootSystem:
    family: str
    rank: int
    cartan: np.ndarray = field(repr=False)
    positive: tuple[Root, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def m(self) -> int:
        return len(self.positive)

    @property
    def n(self) -> int:
        """Dimension of the adjoint representation, l + 2m."""
        return self.rank + 2 * self.m

    @functools.cached_property
    def roots(self) -> tuple[Root, ...]:
        """All roots: positives in order, then their negatives in the same order."""
        return self.positive + tuple(-r for r in self.positive)

    @functools.cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {r.coords: i for i, r in enumerate(self.roots)}

    @functools.cached_property
    def coord_array(self) -> np.ndarray:
        return np.array([r.coords for r in self.roots], dtype=np.int64)

    @functools.cached_property
    def sum_index(self) -> np.ndarray:
        """sum_index[i, j] = index of roots[i] + roots[j], or -1 if not a root."""
        c = self.coord_array
        out = -np.ones((len(c), len(c)), dtype=np.int64)
        for i in range(len(c)):
            for j, v in enumerate(map(tuple, (c[i] + c).tolist())):
                out[i, j] = self.index.get(v, -1)
        return out

    def simple(self, i: int) -> Root:
        """The simple root alpha_i (1-based)."""
        if not 1 <= i <= self.rank:
            raise NotARoot(f"no simple root alpha_{i} in {self.name}")
        return self.positive[i - 1]

    def root(self, coords) -> Root:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank or coords not in self.index:
            raise NotARoot(f"{coords} is not a root of {self.name}")
        return Root(self.name, coords)

    def is_root(self, coords) -> bool:
        return tuple(int(c) for c in coords) in self.index

    def root_index(self, r: Root) -> int:
        self._own(r)
        try:
            return self.index[r.coords]
        except KeyError:
            raise NotARoot(f"{r.coords} is not a root of {self.name}") from None

    def _own(self, *rs: Root):
        for r in rs:
            if not isinstance(r, Root):
                raise TypeError(f"expected a Root, got {type(r).__name__}")
            if r.system != self.name:
                raise MixedSystems(f"root of {r.system} used with {self.name}")

    def pairing(self, beta: Root, alpha: Root) -> int:
        """Cartan integer <beta, alpha> = beta^T A alpha."""
        self._own(beta, alpha)
        return int(np.asarray(beta.coords) @ self.cartan @ np.asarray(alpha.coords))

    def reflect(self, alpha: Root, beta: Root) -> Root:
        """s_alpha(beta) = beta - <beta, alpha> alpha."""
        c = self.pairing(beta, alpha)
        return self.root(tuple(b - c * a for a, b in zip(alpha.coords, beta.coords)))

    def add(self, alpha: Root, beta: Root) -> Root | None:
        """alpha + beta if it is a root, else None."""
        self._own(alpha, beta)
        s = tuple(a + b for a, b in zip(alpha.coords, beta.coords))
        return Root(self.name, s) if s in self.index else None

    def find_weyl_word(self, source: Root, target: Root) -> list[int]:
        """Shortest word i_1..i_r (1-based) with s_{i_r} ... s_{i_1}(source) = target.

        The word is read left to right: s_{i_1} is applied first.
        """
        self._own(source, target)
        if source.coords not in self.index:
            raise NotARoot(f"{source.coords} is not a root of {self.name}")
        if target.coords not in self.index:
            raise NotARoot(f"{target.coords} is not a root of {self.name}")
        start, goal = source.coords, target.coords
        prev: dict[tuple[int, ...], tuple[tuple[int, ...], int] | None] = {start: None}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            if cur == goal:
                break
            v = np.asarray(cur)
            for i in range(self.rank):
                c = int(v @ self.cartan[:, i])
                if c == 0:
                    continue
                nxt = tuple(int(x) for x in v - c * np.eye(self.rank, dtype=np.int64)[i])
                if nxt not in prev:
                    prev[nxt] = (cur, i + 1)
                    queue.append(nxt)
        word: list[int] = []
        node = goal
        while prev[node] is not None:
            node, i = prev[node]
            word.append(i)
        return word[::-1]

    def apply_word(self, word: list[int], r: Root) -> Root:
        for i in word:
            r = self.reflect(self.simple(i), r)
        return r

    def adjacent(self, i: int, j: int) -> bool:
        """True iff nodes i and j (1-based) are joined in the Dynkin diagram."""
        return i != j and self.cartan[i - 1, j - 1] == -1

    def neighbours(self, i: int) -> list[int]:
        return [j for j in range(1, self.rank + 1) if self.adjacent(i, j)]

    def check_invariants(self) -> list[str]:
        """Return a list of violated structural invariants (empty when sound)."""
        bad = []
        if self.m != expected_positive_count(self.family, self.rank):
            bad.append(f"m = {self.m}, expected {expected_positive_count(self.family, self.rank)}")
        g = self.coord_array @ self.cartan @ self.coord_array.T
        if not np.all(np.diag(g) == 2):
            bad.append("some root has <a,a> != 2")
        off = g[~np.eye(len(self.roots), dtype=bool)]
        if not np.all(np.isin(off, (-2, -1, 0, 1))):
            bad.append("pairing outside {0,+-1} for beta != +-alpha")
        for a in self.positive:
            for b in self.positive:
                s = tuple(x + y for x, y in zip(a.coords, b.coords))
                if s in self.index and s not in {p.coords for p in self.positive}:
                    bad.append(f"{a}+{b} is a root but not positive")
        for a in self.roots:
            for b in self.roots:
                s1 = tuple(x + y for x, y in zip(a.coords, b.coords))
                s2 = tuple(x + 2 * y for x, y in zip(b.coords, a.coords))
                if s1 in self.index and s2 in self.index:
                    bad.append(f"string through {b} along {a} longer than 2")
        return bad


@functools.lru_cache(maxsize=None)
def _build(family: str, rank: int) -> RootSystem:
    a = cartan_matrix(family, rank)
    name = f"{family}{rank}"
    eye = np.eye(rank, dtype=np.int64)
    seen = {tuple(int(x) for x in eye[i]) for i in range(rank)}
    queue = deque(seen)
    while queue:
        v = np.asarray(queue.popleft())
        for i in range(rank):
            w = tuple(int(x) for x in v - int(v @ a[:, i]) * eye[i])
            if w not in seen:
                seen.add(w)
                queue.append(w)
    pos = [c for c in seen if all(x >= 0 for x in c)]
    pos.sort(key=lambda c: (sum(c), tuple(-x for x in c)))
    return RootSystem(family, rank, a, tuple(Root(name, c) for c in pos))


def build(family: str, rank: int) -> RootSystem:
    family, rank = _admissible(family, rank)
    return _build(family, rank)


def system_of(r: Root) -> RootSystem:
    return build(r.system[0], int(r.system[1:]))


def pairing(beta: Root, alpha: Root) -> int:
    if beta.system != alpha.system:
        raise MixedSystems(f"{beta.system} vs {alpha.system}")
    return system_of(alpha).pairing(beta, alpha)


def reflect(alpha: Root, beta: Root) -> Root:
    if beta.system != alpha.system:
        raise MixedSystems(f"{beta.system} vs {alpha.system}")
    return system_of(alpha).reflect(alpha, beta)


def find_weyl_word(source: Root, target: Root) -> list[int]:
    if source.system != target.system:
        raise MixedSystems(f"{source.system} vs {target.system}")
    return system_of(source).find_weyl_word(source, target)
