"""Matrices over the supported rings and unit-pivot elimination.

A :class:`Matrix` is a thin immutable wrapper around a numpy array of raw
ring representatives with shape ``(rows, cols) + ring.elem_shape``.
Elimination only ever divides by units.  Over a local ring, if a column has
no unit pivot the routine raises :class:`StructuralFailure` and does not
fall back to Smith forms.  Over Z, inverses and determinants are computed
in Q and mapped back.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import NonUnit, RingMismatch, StructuralFailure
from .rings import Integers, Ring, RingElement, parse_ring


class Matrix:
    __slots__ = ("ring", "data")

    def __init__(self, ring: Ring, data: np.ndarray):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        return cls(ring, ring.eye(n))

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int | None = None) -> "Matrix":
        return cls(ring, ring.zeros((rows, rows if cols is None else cols)))

    @classmethod
    def from_ints(cls, ring: Ring, rows) -> "Matrix":
        return cls(ring, ring.from_ints(np.asarray(rows, dtype=np.int64)))

    @classmethod
    def from_entries(cls, ring: Ring, rows: Sequence[Sequence]) -> "Matrix":
        """Build from nested lists of ints, strings or ring elements."""
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        data = ring.zeros((nr, nc))
        for i, row in enumerate(rows):
            if len(row) != nc:
                raise ValueError("ragged matrix rows")
            for j, v in enumerate(row):
                raw = ring(v).raw
                data[i, j] = ring._arr_of(raw) if ring.elem_shape else raw
        return cls(ring, data)

    @classmethod
    def unit(cls, ring: Ring, n: int, i: int, j: int) -> "Matrix":
        """The matrix unit E_ij (0-based)."""
        m = np.zeros((n, n), dtype=np.int64)
        m[i, j] = 1
        return cls.from_ints(ring, m)

    # -- shape and access ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape[:2]

    @property
    def nrows(self) -> int:
        return self.data.shape[0]

    @property
    def ncols(self) -> int:
        return self.data.shape[1]

    def __getitem__(self, idx) -> RingElement:
        i, j = idx
        return RingElement(self.ring, self.ring.raw_at(self.data, (i, j)))

    def rows(self) -> list[list[RingElement]]:
        return [[self[i, j] for j in range(self.ncols)] for i in range(self.nrows)]

    def to_strings(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.rows()]

    def to_ints(self) -> np.ndarray:
        """Integer entries for matrices over Z (or with integral entries over Q)."""
        if self.ring.elem_shape:
            raise TypeError("to_ints needs a scalar ring")
        out = np.empty(self.shape, dtype=object)
        for i in range(self.nrows):
            for j in range(self.ncols):
                v = self.data[i, j]
                v = Fraction(v)
                if v.denominator != 1:
                    raise ValueError("non-integral entry")
                out[i, j] = int(v)
        return out

    def submatrix(self, rows, cols) -> "Matrix":
        return Matrix(self.ring, self.data[np.ix_(list(rows), list(cols))])

    def transpose(self) -> "Matrix":
        axes = (1, 0) + tuple(range(2, self.data.ndim))
        return Matrix(self.ring, self.data.transpose(axes).copy())

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring.descriptor} vs {other.ring.descriptor}")

    def __add__(self, other):
        self._check(other)
        return Matrix(self.ring, self.ring.add(self.data, other.data))

    def __sub__(self, other):
        self._check(other)
        return Matrix(self.ring, self.ring.sub(self.data, other.data))

    def __neg__(self):
        return Matrix(self.ring, self.ring.neg(self.data))

    def __matmul__(self, other):
        self._check(other)
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix(self.ring, self.ring.matmul(self.data, other.data))

    def scale(self, c) -> "Matrix":
        c = self.ring(c)
        return Matrix(self.ring, self.ring.mul(self.ring._arr_of(c.raw), self.data))

    def __pow__(self, e: int) -> "Matrix":
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.ring, self.nrows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.shape == other.shape
            and bool(np.all(self.ring.is_zero(self.ring.sub(self.data, other.data))))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return bool(np.all(self.ring.is_zero(self.data)))

    def is_identity(self) -> bool:
        return self.nrows == self.ncols and self == Matrix.identity(self.ring, self.nrows)

    def nonzero_positions(self) -> list[tuple[int, int]]:
        nz = ~self.ring.is_zero(self.data)
        return [tuple(map(int, ij)) for ij in np.argwhere(nz)]

    # -- local structure ----------------------------------------------------
    def residue(self) -> "Matrix":
        """Entrywise image in the residue field."""
        k = self.ring.residue_field
        return Matrix(k, k.from_ints(self.ring.residue_arr(self.data)))

    def in_radical(self) -> bool:
        """True iff every entry lies in the maximal ideal J."""
        return not np.any(self.ring.residue_arr(self.data))

    def map_to(self, ring: Ring) -> "Matrix":
        """Image of an integer matrix in another ring."""
        return Matrix.from_ints(ring, np.asarray(self.to_ints(), dtype=np.int64)) if ring != self.ring else self

    # -- elimination --------------------------------------------------------
    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        if isinstance(self.ring, Integers):
            q = parse_ring("rat")
            inv = Matrix(q, self.data.astype(object) * Fraction(1)).inverse()
            try:
                return Matrix(self.ring, _object_ints(inv.to_ints()))
            except ValueError:
                raise NonUnit("matrix is not invertible over Z") from None
        n = self.nrows
        aug = np.concatenate([self.data, self.ring.eye(n)], axis=1)
        red, pivots, _ = row_reduce(self.ring, aug, ncols=n)
        if len(pivots) < n:
            raise NonUnit("matrix is singular")
        return Matrix(self.ring, red[:, n:].copy())

    def det(self) -> RingElement:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        if isinstance(self.ring, Integers):
            return self.ring(int(integer_det(self.to_ints())))
        _, pivots, d = row_reduce(self.ring, self.data, ncols=self.ncols, need_det=True)
        if len(pivots) < self.nrows:
            return self.ring.zero
        return RingElement(self.ring, self.ring._raw_of(d))

    def solve(self, rhs: "Matrix") -> "Matrix":
        """Unique solution X of self @ X = rhs for square invertible self."""
        self._check(rhs)
        n = self.nrows
        aug = np.concatenate([self.data, rhs.data], axis=1)
        red, pivots, _ = row_reduce(self.ring, aug, ncols=n)
        if len(pivots) < n:
            raise NonUnit("system matrix is singular")
        return Matrix(self.ring, red[:, n:].copy())


def _object_ints(arr) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    out[...] = arr
    return out


def integer_det(rows) -> int:
    """Exact determinant of an integer matrix (fraction-free Bareiss)."""
    a = [[int(v) for v in row] for row in np.asarray(rows, dtype=object)]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def integer_rank(rows) -> int:
    q = parse_ring("rat")
    m = Matrix.from_entries(q, [[int(v) for v in row] for row in np.asarray(rows, dtype=object)])
    _, pivots, _ = row_reduce(q, m.data, ncols=m.ncols, allow_skip=True)
    return len(pivots)


def row_reduce(ring: Ring, data: np.ndarray, ncols: int | None = None, need_det: bool = False, allow_skip: bool | None = None):
    """Reduced row echelon form using unit pivots only.

    Returns ``(reduced, pivot_columns, det)``.  Columns without any nonzero
    entry below the current row are skipped when ``allow_skip`` (default:
    fields only).  Over non-fields, a column whose candidate pivots are all
    non-units but not all zero raises :class:`StructuralFailure`.  ``det``
    is the determinant of the leading square block when requested and the
    block has full rank.
    """
    a = data.copy()
    nr = a.shape[0]
    ncols = a.shape[1] if ncols is None else ncols
    if allow_skip is None:
        allow_skip = ring.is_field
    pivots: list[int] = []
    det = ring.from_ints(np.array(1)) if need_det else None
    r = 0
    for c in range(ncols):
        if r >= nr:
            break
        col = a[r:, c]
        units = np.flatnonzero(ring.is_unit(col))
        if units.size == 0:
            if np.all(ring.is_zero(col)) or allow_skip:
                if need_det:
                    det = None
                continue
            raise StructuralFailure(f"column {c} offers only radical pivots")
        p = r + int(units[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
            if need_det and det is not None:
                det = ring.neg(det)
        piv = a[r, c]
        if need_det and det is not None:
            det = ring.mul(det, piv)
        a[r] = ring.mul(ring.inv(piv), a[r])
        factors = a[:, c].copy()
        factors[r] = ring.from_ints(np.array(0))
        a = ring.sub(a, ring.mul(factors[:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    if need_det and (det is None or len(pivots) < min(nr, ncols)):
        det = ring.from_ints(np.array(0))
    return a, pivots, det


def residue_pivot_columns(m: Matrix) -> list[int]:
    """Indices of columns whose residues form a basis of the residue column space."""
    res = m.residue()
    _, pivots, _ = row_reduce(res.ring, res.data, allow_skip=True)
    return pivots
