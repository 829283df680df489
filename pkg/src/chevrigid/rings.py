"""Exact commutative rings with optional local structure.

Six kinds are supported, named by descriptor strings::

    int            the integers Z
    rat            the rationals Q
    fp:<p>         the prime field F_p
    zmod:<p>^<k>   Z/p^k
    tpoly:<p>:<k>  F_p[t]/(t^k)
    zloc:<p>       Z localised at the prime p

Everything except ``int`` and ``rat`` is local, and local rings must have
an odd residue characteristic so that 2 is invertible.

Two layers live here.  :class:`RingElement` is the value-semantic scalar
used by the public API.  Underneath, every ring also exposes a small set of
vectorised primitives (``add``, ``mul``, ``matmul``, ``inv`` ...) acting on
numpy arrays of raw representatives; matrices in :mod:`chevrigid.linalg`
are built on those so that group computations stay fast.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import DescriptorError, NonUnit, NotLocal, RingMismatch

# int64 matmul of n x n matrices with entries < q stays exact while
# n * q^2 < 2^63; 2^24 leaves room for n up to a few thousand.
_INT64_MODULUS_LIMIT = 1 << 24


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Ring:
    """Abstract base for the supported rings.

    Subclasses fix the raw representation; see the module docstring.
    """

    kind: str = ""
    p: int | None = None
    k: int | None = None
    local: bool = False
    elem_shape: tuple[int, ...] = ()
    dtype: object = object

    # -- identity -----------------------------------------------------------
    @property
    def descriptor(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"Ring({self.descriptor!r})"

    def __eq__(self, other):
        return isinstance(other, Ring) and other.descriptor == self.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    @property
    def is_field(self) -> bool:
        return False

    @property
    def characteristic(self) -> int:
        raise NotImplementedError

    # -- scalar API ---------------------------------------------------------
    def __call__(self, value) -> "RingElement":
        if isinstance(value, RingElement):
            if value.ring != self:
                raise RingMismatch(f"{value.ring.descriptor} element used in {self.descriptor}")
            return value
        if isinstance(value, str):
            return RingElement(self, self.canon(self.parse(value)))
        return RingElement(self, self.canon(value))

    def canon(self, value):
        """Canonical raw representative of an int (or native value)."""
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, raw) -> str:
        return str(raw)

    @property
    def zero(self) -> "RingElement":
        return self(0)

    @property
    def one(self) -> "RingElement":
        return self(1)

    def invert(self, x: "RingElement") -> "RingElement":
        x = self(x)
        return RingElement(self, self._raw_of(self.inv(self._arr_of(x.raw))))

    def residue(self, x: "RingElement") -> "RingElement":
        """Image of ``x`` in the residue field R/J."""
        self._require_local()
        x = self(x)
        return self.residue_field(int(self.residue_arr(self._arr_of(x.raw))))

    def in_radical(self, x: "RingElement") -> bool:
        self._require_local()
        x = self(x)
        return int(self.residue_arr(self._arr_of(x.raw))) == 0

    def is_unit_element(self, x: "RingElement") -> bool:
        x = self(x)
        return bool(self.is_unit(self._arr_of(x.raw)))

    @property
    def residue_field(self) -> "Ring":
        self._require_local()
        return parse_ring(f"fp:{self.p}")

    def _require_local(self):
        if not self.local:
            raise NotLocal(f"{self.descriptor} has no local structure")

    # -- sampling -----------------------------------------------------------
    def random_element(self, rng) -> "RingElement":
        raise NotImplementedError

    def random_unit(self, rng) -> "RingElement":
        while True:
            x = self.random_element(rng)
            if self.is_unit_element(x):
                return x

    def random_radical(self, rng) -> "RingElement":
        """A random element of the maximal ideal J."""
        self._require_local()
        raise NotImplementedError

    def units(self) -> list["RingElement"]:
        """All units, for finite rings."""
        raise NotImplementedError(f"{self.descriptor} is infinite")

    # -- raw array primitives -----------------------------------------------
    def zeros(self, shape) -> np.ndarray:
        return self.from_ints(np.zeros(shape, dtype=np.int64))

    def eye(self, n: int) -> np.ndarray:
        return self.from_ints(np.eye(n, dtype=np.int64))

    def from_ints(self, arr) -> np.ndarray:
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def sub(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        """Elementwise product with numpy broadcasting on the leading axes."""
        raise NotImplementedError

    def matmul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> np.ndarray:
        raise NotImplementedError

    def is_unit(self, a) -> np.ndarray:
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def residue_arr(self, a) -> np.ndarray:
        """Entrywise residues as an int64 array with values in [0, p)."""
        self._require_local()
        raise NotImplementedError

    def _arr_of(self, raw):
        return np.array(raw, dtype=self.dtype)

    def _raw_of(self, arr):
        v = arr.item() if isinstance(arr, np.ndarray) else arr
        return self.canon(v)

    def stack(self, values) -> np.ndarray:
        """Raw array of shape (len(values),) + elem_shape."""
        return np.stack([self._arr_of(self(v).raw) for v in values])

    def leading_shape(self, a) -> tuple[int, ...]:
        return a.shape[: a.ndim - len(self.elem_shape)]

    def raw_at(self, a, index):
        """Raw representative stored at ``index`` of array ``a``."""
        return self._raw_of(a[index])


class Integers(Ring):
    kind = "integers"

    @property
    def descriptor(self):
        return "int"

    @property
    def characteristic(self):
        return 0

    def canon(self, value):
        if isinstance(value, Fraction):
            if value.denominator != 1:
                raise NonUnit(f"{value} is not an integer")
            return int(value.numerator)
        return int(value)

    def parse(self, text):
        return int(text.strip())

    def random_element(self, rng):
        return self(rng.randint(-9, 9))

    def from_ints(self, arr):
        return _object_map(int, np.asarray(arr))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def matmul(self, a, b):
        return a @ b

    def is_zero(self, a):
        return np.asarray(a == 0, dtype=bool)

    def is_unit(self, a):
        return np.asarray((a == 1) | (a == -1), dtype=bool)

    def inv(self, a):
        if not np.all(self.is_unit(a)):
            raise NonUnit("only +-1 are units in Z")
        return a.copy() if isinstance(a, np.ndarray) else a


class Rationals(Ring):
    kind = "rationals"

    @property
    def descriptor(self):
        return "rat"

    @property
    def is_field(self):
        return True

    @property
    def characteristic(self):
        return 0

    def canon(self, value):
        return Fraction(value)

    def parse(self, text):
        return Fraction(text.strip())

    def random_element(self, rng):
        return self(Fraction(rng.randint(-9, 9), rng.randint(1, 5)))

    def from_ints(self, arr):
        return _object_map(lambda v: Fraction(int(v)), np.asarray(arr))

    add = Integers.add
    sub = Integers.sub
    neg = Integers.neg
    mul = Integers.mul
    matmul = Integers.matmul
    is_zero = Integers.is_zero

    def is_unit(self, a):
        return np.asarray(a != 0, dtype=bool)

    def inv(self, a):
        if not np.all(self.is_unit(a)):
            raise NonUnit("0 is not invertible")
        return _object_map(lambda v: 1 / Fraction(v), a)


class LocalizedIntegers(Rationals):
    """Z_(p): fractions whose denominator is prime to p."""

    kind = "localized-integers"
    local = True

    def __init__(self, p: int):
        self.p = p

    @property
    def descriptor(self):
        return f"zloc:{self.p}"

    @property
    def is_field(self):
        return False

    def canon(self, value):
        f = Fraction(value)
        if f.denominator % self.p == 0:
            raise NonUnit(f"{f} is not in Z_({self.p})")
        return f

    def random_element(self, rng):
        den = rng.randint(1, 4 * self.p)
        while den % self.p == 0:
            den = rng.randint(1, 4 * self.p)
        return self(Fraction(rng.randint(-4 * self.p, 4 * self.p), den))

    def random_radical(self, rng):
        return self(self.p) * self.random_element(rng)

    def is_unit(self, a):
        return _object_bool(lambda v: Fraction(v).numerator % self.p != 0, a)

    def inv(self, a):
        if not np.all(self.is_unit(a)):
            raise NonUnit(f"element lies in the radical ({self.p})")
        return _object_map(lambda v: 1 / Fraction(v), a)

    def residue_arr(self, a):
        p = self.p

        def res(v):
            v = Fraction(v)
            return (v.numerator * pow(v.denominator, -1, p)) % p

        return np.asarray(_object_map(res, a), dtype=np.int64)


class ModularIntegers(Ring):
    """Z/p^k; with k == 1 this is the prime field F_p."""

    local = True

    def __init__(self, p: int, k: int = 1):
        self.p = p
        self.k = k
        self.q = p**k
        self.dtype = np.int64 if self.q < _INT64_MODULUS_LIMIT else object

    @property
    def kind(self):
        return "prime-field" if self.k == 1 else "integers-mod"

    @property
    def descriptor(self):
        return f"fp:{self.p}" if self.k == 1 else f"zmod:{self.p}^{self.k}"

    @property
    def is_field(self):
        return self.k == 1

    @property
    def characteristic(self):
        return self.q

    def canon(self, value):
        if isinstance(value, Fraction):
            return _frac_mod(value, self.q)
        return int(value) % self.q

    def parse(self, text):
        return self.canon(Fraction(text.strip()))

    def random_element(self, rng):
        return self(rng.randrange(self.q))

    def random_radical(self, rng):
        return self(self.p * rng.randrange(self.q // self.p))

    def units(self):
        return [self(v) for v in range(1, self.q) if v % self.p]

    def from_ints(self, arr):
        if self.dtype is object:
            return Integers.from_ints(self, arr) % self.q
        return np.mod(np.asarray(arr, dtype=np.int64), self.q)

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def matmul(self, a, b):
        if self.dtype is object:
            return (a @ b) % self.q
        return _modmatmul(a, b, self.q)

    def is_zero(self, a):
        return np.asarray(a == 0, dtype=bool)

    def is_unit(self, a):
        return np.asarray(a % self.p != 0, dtype=bool)

    def inv(self, a):
        if not np.all(self.is_unit(a)):
            raise NonUnit(f"element lies in the radical ({self.p})")
        q = self.q
        return _object_map(lambda v: pow(int(v), -1, q), a, self.dtype)

    def residue_arr(self, a):
        return np.asarray(a % self.p, dtype=np.int64)


class TruncatedPolynomials(Ring):
    """F_p[t]/(t^k); raw values are length-k coefficient vectors (constant first)."""

    kind = "truncated-poly"
    local = True
    dtype = np.int64

    def __init__(self, p: int, k: int):
        self.p = p
        self.k = k
        self.elem_shape = (k,)

    @property
    def descriptor(self):
        return f"tpoly:{self.p}:{self.k}"

    @property
    def is_field(self):
        return self.k == 1

    @property
    def characteristic(self):
        return self.p

    def canon(self, value):
        if isinstance(value, (tuple, list, np.ndarray)):
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                if any(coeffs[self.k :]):
                    raise ValueError("coefficient beyond the truncation degree")
                coeffs = coeffs[: self.k]
            return tuple(coeffs + [0] * (self.k - len(coeffs)))
        if isinstance(value, Fraction):
            value = _frac_mod(value, self.p)
        return tuple([int(value) % self.p] + [0] * (self.k - 1))

    _TERM = re.compile(r"^([+-]?\d*)\*?(t(?:\^(\d+))?)?$")

    def parse(self, text):
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial")
        coeffs = [0] * self.k
        for term in re.findall(r"[+-]?[^+-]+", s):
            m = self._TERM.match(term)
            if not m:
                raise ValueError(f"cannot parse term {term!r}")
            c, tpart, exp = m.groups()
            if c in ("", "+"):
                c = 1
            elif c == "-":
                c = -1
            deg = 0 if tpart is None else (int(exp) if exp else 1)
            if deg >= self.k:
                raise ValueError(f"degree {deg} >= truncation {self.k}")
            coeffs[deg] += int(c)
        return self.canon(coeffs)

    def format(self, raw):
        parts = [str(raw[0])]
        for i, c in enumerate(raw[1:], start=1):
            if c:
                parts.append(f"{c}*t" if i == 1 else f"{c}*t^{i}")
        return "+".join(parts)

    def random_element(self, rng):
        return self(tuple(rng.randrange(self.p) for _ in range(self.k)))

    def random_radical(self, rng):
        return self((0,) + tuple(rng.randrange(self.p) for _ in range(self.k - 1)))

    def units(self):
        import itertools

        return [self(c) for c in itertools.product(range(self.p), repeat=self.k) if c[0]]

    def _arr_of(self, raw):
        return np.array(raw, dtype=np.int64)

    def _raw_of(self, arr):
        return tuple(int(v) for v in np.asarray(arr).reshape(self.k))

    def raw_at(self, a, index):
        return self._raw_of(a[index])

    def from_ints(self, arr):
        arr = np.asarray(arr, dtype=np.int64)
        out = np.zeros(arr.shape + (self.k,), dtype=np.int64)
        out[..., 0] = np.mod(arr, self.p)
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1]) + (self.k,)
        out = np.zeros(shape, dtype=np.int64)
        for i in range(self.k):
            for j in range(self.k - i):
                out[..., i + j] += a[..., i] * b[..., j]
        return out % self.p

    def matmul(self, a, b):
        k, p = self.k, self.p
        if a.shape[-2] * k * (p - 1) ** 2 >= (1 << 53):
            parts = [0] * k
            for i in range(k):
                for j in range(k - i):
                    parts[i + j] = parts[i + j] + np.matmul(a[..., i], b[..., j]) % p
            return np.stack(parts, axis=-1) % p
        af = np.ascontiguousarray(np.moveaxis(a, -1, 0), dtype=np.float64)
        bf = np.ascontiguousarray(np.moveaxis(b, -1, 0), dtype=np.float64)
        parts = [None] * k
        for i in range(k):
            for j in range(k - i):
                prod = np.matmul(af[i], bf[j])
                parts[i + j] = prod if parts[i + j] is None else parts[i + j] + prod
        return np.stack(parts, axis=-1).astype(np.int64) % p

    def is_zero(self, a):
        return np.all(np.asarray(a) == 0, axis=-1)

    def is_unit(self, a):
        return np.asarray(a)[..., 0] != 0

    def inv(self, a):
        a = np.asarray(a)
        if not np.all(self.is_unit(a)):
            raise NonUnit("constant term is zero")
        p = self.p
        inv0 = np.vectorize(lambda v: pow(int(v), -1, p), otypes=[np.int64])(a[..., 0])
        out = np.zeros_like(a)
        out[..., 0] = inv0
        # power-series recursion b_s = -a_0^{-1} * sum_{i=1..s} a_i b_{s-i}
        for s in range(1, self.k):
            acc = np.zeros_like(inv0)
            for i in range(1, s + 1):
                acc = acc + a[..., i] * out[..., s - i]
            out[..., s] = (-inv0 * acc) % p
        return out % p

    def residue_arr(self, a):
        return np.asarray(np.asarray(a)[..., 0], dtype=np.int64)


def _modmatmul(a, b, q: int) -> np.ndarray:
    """Exact (a @ b) mod q for int64 residues, via BLAS when the float sum is exact."""
    inner = a.shape[-1]
    if inner * (q - 1) ** 2 < (1 << 53):
        prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return prod.astype(np.int64) % q
    return np.matmul(a, b) % q


def _frac_mod(f: Fraction, m: int) -> int:
    if math.gcd(f.denominator, m) != 1:
        raise NonUnit(f"{f} has a denominator that is not invertible mod {m}")
    return f.numerator * pow(f.denominator, -1, m) % m


def _object_map(fn, a, dtype=object):
    if not isinstance(a, np.ndarray) or a.ndim == 0:
        v = a.item() if isinstance(a, np.ndarray) else a
        return np.array(fn(v), dtype=dtype)
    flat = [fn(v) for v in a.ravel()]
    out = np.empty(len(flat), dtype=dtype)
    out[:] = flat
    return out.reshape(a.shape)


def _object_bool(fn, a):
    if not isinstance(a, np.ndarray) or a.ndim == 0:
        v = a.item() if isinstance(a, np.ndarray) else a
        return np.bool_(fn(v))
    return np.array([fn(v) for v in a.ravel()], dtype=bool).reshape(a.shape)


@functools.lru_cache(maxsize=None)
def parse_ring(descriptor: str) -> Ring:
    """Build a ring from its descriptor string (see module docstring)."""
    d = descriptor.strip()
    if d == "int":
        return Integers()
    if d == "rat":
        return Rationals()
    m = re.fullmatch(r"fp:(\d+)", d)
    if m:
        return ModularIntegers(_local_prime(m.group(1), d), 1)
    m = re.fullmatch(r"zmod:(\d+)\^(\d+)", d)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise DescriptorError(f"{d}: exponent must be >= 1")
        return ModularIntegers(_local_prime(m.group(1), d), k)
    m = re.fullmatch(r"tpoly:(\d+):(\d+)", d)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise DescriptorError(f"{d}: truncation must be >= 1")
        return TruncatedPolynomials(_local_prime(m.group(1), d), k)
    m = re.fullmatch(r"zloc:(\d+)", d)
    if m:
        return LocalizedIntegers(_local_prime(m.group(1), d))
    raise DescriptorError(f"unrecognised ring descriptor {descriptor!r}")


def _local_prime(text: str, descriptor: str) -> int:
    p = int(text)
    if not _is_prime(p):
        raise DescriptorError(f"{descriptor}: {p} is not prime")
    if p == 2:
        raise DescriptorError(f"{descriptor}: residue characteristic 2, so 1/2 does not exist")
    return p


class RingElement:
    """An immutable element of a :class:`Ring`.

    Python ints are coerced into the ring; elements of a different ring are
    rejected with :class:`RingMismatch`.
    """

    __slots__ = ("ring", "raw")

    def __init__(self, ring: Ring, raw):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "raw", raw)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    def _coerce(self, other) -> "RingElement":
        if isinstance(other, RingElement):
            if other.ring != self.ring:
                raise RingMismatch(f"cannot combine {self.ring.descriptor} with {other.ring.descriptor}")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.ring(other)
        return NotImplemented

    def _arr(self):
        return self.ring._arr_of(self.raw)

    def _wrap(self, arr) -> "RingElement":
        return RingElement(self.ring, self.ring._raw_of(arr))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.ring.add(self._arr(), other._arr()))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.ring.sub(self._arr(), other._arr()))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._wrap(self.ring.mul(self._arr(), other._arr()))

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(self.ring.neg(self._arr()))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> "RingElement":
        return self.ring.invert(self)

    def is_unit(self) -> bool:
        return self.ring.is_unit_element(self)

    def is_zero(self) -> bool:
        return bool(self.ring.is_zero(self._arr()))

    def residue(self) -> "RingElement":
        return self.ring.residue(self)

    def in_radical(self) -> bool:
        return self.ring.in_radical(self)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            try:
                other = self.ring(other)
            except Exception:
                return False
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring == other.ring and self.raw == other.raw

    def __hash__(self):
        return hash((self.ring.descriptor, self.raw))

    def __str__(self):
        return self.ring.format(self.raw)

    def __repr__(self):
        return f"{self.ring.descriptor}({self})"


def invert(x: RingElement) -> RingElement:
    return x.ring.invert(x)


def residue(x: RingElement) -> RingElement:
    return x.ring.residue(x)


def in_radical(x: RingElement) -> bool:
    return x.ring.in_radical(x)


def elements(ring: Ring, values: Iterable) -> list[RingElement]:
    return [ring(v) for v in values]
