"""Normalising Weyl images on the Cartan block.

Each candidate c_i is an involution congruent to the standard block
w~_i mod J, so P_i = (1 - c_i)/2 is a rank-one idempotent.  Write
P_i = u_i f_i^T with u_i = P_i e_i, so c_i = 1 - 2 u_i f_i^T and u_i = e_i
mod J.  The new basis is b_i = lambda_i u_i.  Nodes are attached one at a
time in a family-specific order, and every node after the first has an
already attached neighbour j.  The scale is lambda_k = -lambda_j / (2 f_j(u_k)),
which forces c_j b_k = b_k + b_j.  Commutation of non-adjacent candidates
gives f_j(u_k) = 0.  The order-three relation gives 4 f_j(u_k) f_k(u_j) = 1,
so the remaining entries come out right too.
"""

from __future__ import annotations

import numpy as np

from ..errors import NotBlockSplit, PivotNotUnit, PreconditionFailed
from ..group import GroupElement
from ..linalg import Matrix
from ..rings import Ring
from ..roots import RootSystem


def cartan_block(w, rank: int | None = None) -> Matrix:
    """Trailing l x l block of a matrix that preserves the root/Cartan split."""
    m = w.matrix if isinstance(w, GroupElement) else w
    if rank is None:
        alg = getattr(w, "algebra", None)
        if alg is None:
            raise ValueError("rank is required for a bare Matrix")
        rank = alg.system.rank
    n = m.nrows
    k = n - rank
    z = m.ring.is_zero(m.data)
    if not (np.all(z[:k, k:]) and np.all(z[k:, :k])):
        raise NotBlockSplit("mixed root/Cartan entries are nonzero")
    return m.submatrix(range(k, n), range(k, n))


def standard_block(system: RootSystem, i: int) -> np.ndarray:
    """w~_i: identity except row i, which is -1 at i and +1 at neighbours of i."""
    l = system.rank
    out = np.eye(l, dtype=np.int64)
    out[i - 1] = -system.cartan[i - 1]
    out[i - 1, i - 1] = -1
    return out


def standard_blocks(system: RootSystem, ring: Ring) -> list[Matrix]:
    return [Matrix.from_ints(ring, standard_block(system, i)) for i in range(1, system.rank + 1)]


def attachment_order(system: RootSystem) -> list[tuple[int, int | None, str]]:
    """(node, parent, step label) in the order nodes are normalised."""
    l = system.rank
    if system.family == "A":
        if l == 2:
            seq = [(1, None, "rank-two block"), (2, 1, "rank-two block")]
        else:
            seq = [(1, None, "initial pair"), (2, 1, "initial pair")]
            seq += [(k, k - 1, f"chain node {k}") for k in range(3, l)]
            seq += [(l, l - 1, f"final node {l}")]
    elif system.family == "D":
        b = l - 2
        seq = [(b, None, "branch quadruple"), (l - 1, b, "branch quadruple"), (l, b, "branch quadruple"),
               (l - 3, b, "branch quadruple")]
        seq += [(k, k + 1, f"chain node {k}") for k in range(l - 4, 1, -1)]
        if l > 4:
            seq += [(1, 2, "final node 1")]
    else:
        seq = [(4, None, "branch quadruple"), (2, 4, "branch quadruple"), (3, 4, "branch quadruple"),
               (5, 4, "branch quadruple")]
        seq += [(k, k - 1, f"chain node {k}") for k in range(6, l)]
        seq += [(1, 3, "final node 1"), (l, l - 1, f"final node {l}")]
    assert sorted(k for k, _, _ in seq) == list(range(1, l + 1))
    return seq


def check_preconditions(system: RootSystem, candidates: list[Matrix]) -> None:
    l = system.rank
    if len(candidates) != l:
        raise PreconditionFailed("one candidate per simple root", None, f"got {len(candidates)}, need {l}")
    ring = candidates[0].ring
    std = standard_blocks(system, ring)
    for i, c in enumerate(candidates, start=1):
        if c.shape != (l, l):
            raise PreconditionFailed("candidate shape", i)
        if not (c @ c).is_identity():
            raise PreconditionFailed("involution c_i^2 = 1", i)
        if not (c - std[i - 1]).in_radical():
            raise PreconditionFailed("congruent to the standard block mod J", i)
    for i in range(1, l + 1):
        for j in range(i + 1, l + 1):
            ci, cj = candidates[i - 1], candidates[j - 1]
            if system.adjacent(i, j):
                p = ci @ cj
                if not (p @ p @ p).is_identity():
                    raise PreconditionFailed("(c_i c_j)^3 = 1 for adjacent nodes", (i, j))
            elif not (ci @ cj == cj @ ci):
                raise PreconditionFailed("c_i c_j = c_j c_i for non-adjacent nodes", (i, j))


def _projector(c: Matrix, i: int):
    """u, f with (1 - c)/2 = u f^T and u = e_i mod J."""
    ring = c.ring
    l = c.nrows
    half = ring(2).inverse()
    p = (Matrix.identity(ring, l) - c).scale(half)
    u = p.submatrix(range(l), [i - 1])
    ui = u[i - 1, 0]
    if not ui.is_unit():
        raise PivotNotUnit(f"projector of node {i}", "diagonal entry is not a unit")
    f = p.submatrix([i - 1], range(l)).scale(ui.inverse())
    return u, f


def normalize_weyl_images(system: RootSystem, candidates: list[Matrix], trace: list | None = None) -> Matrix:
    """Return g = 1 mod J with g^{-1} c_i g = w~_i for every i.

    ``trace`` (if given) receives one dict per attachment step.
    """
    candidates = [c.matrix if isinstance(c, GroupElement) else c for c in candidates]
    check_preconditions(system, candidates)
    ring = candidates[0].ring
    l = system.rank
    proj = {i: _projector(candidates[i - 1], i) for i in range(1, l + 1)}
    # non-adjacent pairs must have f_j(u_k) = 0, adjacent ones 4 f_j(u_k) f_k(u_j) = 1
    for j in range(1, l + 1):
        for k in range(1, l + 1):
            if j == k:
                continue
            fjuk = (proj[j][1] @ proj[k][0])[0, 0]
            if not system.adjacent(j, k) and not fjuk.is_zero():
                raise PreconditionFailed("orthogonality f_j(u_k) = 0 for non-adjacent nodes", (j, k))
            if system.adjacent(j, k) and j < k:
                fkuj = (proj[k][1] @ proj[j][0])[0, 0]
                if fjuk * fkuj * 4 != ring.one:
                    raise PreconditionFailed("braid pairing 4 f_j(u_k) f_k(u_j) = 1", (j, k))
    scale: dict[int, object] = {}
    for node, parent, label in attachment_order(system):
        if parent is None:
            lam = ring.one
        else:
            denom = (proj[parent][1] @ proj[node][0])[0, 0] * 2
            if not denom.is_unit():
                raise PivotNotUnit(f"{system.name}: {label}", f"2 f_{parent}(u_{node}) is not a unit")
            lam = -scale[parent] / denom
        scale[node] = lam
        if trace is not None:
            trace.append({"step": label, "node": node, "parent": parent, "scale": str(lam)})
    cols = [proj[i][0].scale(scale[i]) for i in range(1, l + 1)]
    g = Matrix(ring, np.concatenate([c.data for c in cols], axis=1))
    if not (g - Matrix.identity(ring, l)).in_radical():
        raise PivotNotUnit(f"{system.name}: final basis", "basis change is not congruent to 1 mod J")
    ginv = g.inverse()
    std = standard_blocks(system, ring)
    for i in range(1, l + 1):
        if not (ginv @ candidates[i - 1] @ g) == std[i - 1]:
            raise PivotNotUnit(f"{system.name}: final check", f"node {i} not normalised")
    return g
