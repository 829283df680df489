"""Splitting involutions over a local ring with 1/2.

For a^2 = 1, e = (1 + a)/2 is idempotent and V = eV + (1 - e)V with a
acting as +1 and -1 on the two summands.  Both summands are free; bases
are read off as columns of e and 1 - e whose residues are independent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from ..errors import NotInvolution, NotLocal, StructuralFailure
from ..group import GroupElement
from ..linalg import Matrix, residue_pivot_columns, row_reduce
from ..rings import Ring


@dataclass(frozen=True)
class SplitDecomposition:
    v0: Matrix  # n x r0, columns span eV
    v1: Matrix  # n x r1, columns span (1 - e)V
    e: Matrix

    @property
    def r0(self) -> int:
        return self.v0.ncols

    @property
    def r1(self) -> int:
        return self.v1.ncols

    @property
    def basis(self) -> Matrix:
        return Matrix(self.v0.ring, np.concatenate([self.v0.data, self.v1.data], axis=1))

    def reassemble(self) -> Matrix:
        """B diag(1,..,1,-1,..,-1) B^{-1}."""
        b = self.basis
        ring = b.ring
        d = np.diag([1] * self.r0 + [-1] * self.r1).astype(np.int64)
        return b @ Matrix.from_ints(ring, d) @ b.inverse()


def _as_matrix(a) -> Matrix:
    return a.matrix if isinstance(a, GroupElement) else a


def split_involution(a) -> SplitDecomposition:
    m = _as_matrix(a)
    ring = m.ring
    if not ring.local:
        raise NotLocal(f"{ring.descriptor} has no local structure")
    n = m.nrows
    eye = Matrix.identity(ring, n)
    if not (m @ m).is_identity():
        raise NotInvolution("a^2 != 1")
    half = ring(2).inverse()
    e = (eye + m).scale(half)
    f = eye - e
    p0 = residue_pivot_columns(e)
    p1 = residue_pivot_columns(f)
    dec = SplitDecomposition(e.submatrix(range(n), p0), f.submatrix(range(n), p1), e)
    if dec.r0 + dec.r1 != n or not dec.basis.det().is_unit():
        raise StructuralFailure("column bases of e and 1-e do not form a basis")
    return dec


def congruent_mod_radical(a, b) -> bool:
    """True iff every entry of A - B lies in J."""
    a, b = _as_matrix(a), _as_matrix(b)
    if not a.ring.local:
        raise NotLocal(f"{a.ring.descriptor} has no local structure")
    return (a - b).in_radical()


def _residue_rank(m: Matrix) -> int:
    r = m.residue()
    _, piv, _ = row_reduce(r.ring, r.data, allow_skip=True)
    return len(piv)


def rank_match_residue(a) -> bool:
    """Split ranks equal residue eigenvalue multiplicities, and the residue
    images of the two bases span the residue eigenspaces."""
    return bool(rank_report(a)["match"])


def rank_report(a) -> dict:
    m = _as_matrix(a)
    dec = split_involution(m)
    n = m.nrows
    ring = m.ring
    eye = Matrix.identity(ring, n)
    k = ring.residue_field
    mbar = m.residue()
    ik = Matrix.identity(k, n)
    # dim ker(abar - 1) = n - rank(abar - 1), similarly for -1
    d0 = n - _residue_rank_field(mbar - ik)
    d1 = n - _residue_rank_field(mbar + ik)
    v0b, v1b = dec.v0.residue(), dec.v1.residue()
    span_ok = (
        (mbar @ v0b) == v0b
        and (mbar @ v1b) == -v1b
        and _residue_rank_field(v0b) == dec.r0
        and _residue_rank_field(v1b) == dec.r1
    )
    del eye
    return {
        "r0": dec.r0, "r1": dec.r1, "residue_dim_plus": d0, "residue_dim_minus": d1,
        "images_span_eigenspaces": bool(span_ok),
        "match": dec.r0 == d0 and dec.r1 == d1 and bool(span_ok),
    }


def _residue_rank_field(m: Matrix) -> int:
    _, piv, _ = row_reduce(m.ring, m.data, allow_skip=True)
    return len(piv)


def random_congruence_element(ring: Ring, n: int, rng: random.Random) -> Matrix:
    """Random g = 1 + X with X in M_n(J); invertible since g = 1 mod J."""
    if not ring.local:
        raise NotLocal(f"{ring.descriptor} has no local structure")
    data = ring.eye(n)
    for i in range(n):
        for j in range(n):
            x = ring.random_radical(rng)
            cur = ring._raw_of(data[i, j]) if ring.elem_shape else data[i, j]
            val = ring(cur) + x
            data[i, j] = ring._arr_of(val.raw) if ring.elem_shape else val.raw
    return Matrix(ring, data)
