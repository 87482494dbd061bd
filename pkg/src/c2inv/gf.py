"""Arithmetic in GF(p^s) and batched linear algebra over it.

Elements are encoded as integers ``c_0 + c_1 p + ... + c_{s-1} p^{s-1}`` where
``c_i`` is the coefficient of ``x^i`` in the residue modulo the field's
irreducible polynomial.  The public :class:`FieldElement` value type carries its
field and coefficient vector; the hot loops (point counting, determinants) work
on numpy arrays of integer codes through the ``v_*`` methods of :class:`Field`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

import numpy as np

# Extension fields up to this size get full add/mul tables.
TABLE_LIMIT = 1024
MAX_Q = 2**16


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit integers."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for sp in small:
        if n % sp == 0:
            return n == sp
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimePower:
    p: int
    s: int = 1

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.s < 1:
            raise FieldError(f"exponent s must be >= 1, got {self.s}")
        if self.p**self.s > MAX_Q:
            raise FieldError(f"q = {self.p}^{self.s} exceeds the desk-scale bound {MAX_Q}")

    @property
    def q(self) -> int:
        return self.p**self.s

    @classmethod
    def from_q(cls, q: int) -> PrimePower:
        for p in range(2, q + 1):
            if q % p == 0:
                s, rest = 0, q
                while rest % p == 0:
                    rest //= p
                    s += 1
                if rest != 1:
                    raise FieldError(f"{q} is not a prime power")
                return cls(p, s)
        raise FieldError(f"{q} is not a prime power")

    def __str__(self):
        return f"{self.q}" if self.s == 1 else f"{self.p}^{self.s}"


# -- polynomials over F_p as little-endian coefficient lists -----------------


def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - lead * c) % p
        _poly_trim(a)
    return a


def _monic_polys(degree: int, p: int) -> Iterator[tuple[int, ...]]:
    """Monic polynomials of the given degree, ordered by the integer value of
    their coefficient vector read from the leading end."""
    for low in itertools.product(range(p), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    s = len(modulus) - 1
    if s < 1 or modulus[-1] != 1:
        return False
    if s == 1:
        return True
    # degree-1 divisors are exactly the roots
    for r in range(p):
        if sum(c * pow(r, i, p) for i, c in enumerate(modulus)) % p == 0:
            return False
    for d in range(2, s // 2 + 1):
        for f in _monic_polys(d, p):
            if not _poly_mod(modulus, f, p):
                return False
    return True


def smallest_irreducible(p: int, s: int) -> tuple[int, ...]:
    for f in _monic_polys(s, p):
        if is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible polynomial of degree {s} over F_{p}")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class Field:
    """GF(p^s) with an explicit monic irreducible modulus (little-endian)."""

    prime_power: PrimePower
    modulus: tuple[int, ...]
    _tables: dict = dc_field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        s = self.prime_power.s
        if len(self.modulus) != s + 1 or not is_irreducible(self.modulus, self.p):
            raise FieldError(f"modulus {self.modulus} is not monic irreducible of degree {s}")
        q, p = self.q, self.p
        neg = np.array([self._encode([(-c) % p for c in self._decode(a)]) for a in range(q)], dtype=np.int64)
        self._tables["neg"] = neg
        if s > 1 and q <= TABLE_LIMIT:
            a = np.arange(q, dtype=np.int64)
            A, B = np.meshgrid(a, a, indexing="ij")
            self._tables["add"] = self._add_digits(A, B)
            self._tables["mul"] = self._mul_digits(A, B)
        self._tables["inv"] = self._v_pow(np.arange(q, dtype=np.int64), q - 2)

    def __eq__(self, other):
        return isinstance(other, Field) and (self.prime_power, self.modulus) == (
            other.prime_power,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.prime_power, self.modulus))

    def __repr__(self):
        return f"Field(GF({self.q}), modulus={self.modulus})"

    @property
    def p(self) -> int:
        return self.prime_power.p

    @property
    def s(self) -> int:
        return self.prime_power.s

    @property
    def q(self) -> int:
        return self.prime_power.q

    # -- code <-> coefficient vector ----------------------------------------

    def _decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.s):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def _encode(self, coeffs: Sequence[int]) -> int:
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + c
        return code

    def _digits(self, codes: np.ndarray) -> list[np.ndarray]:
        return [(codes // self.p**i) % self.p for i in range(self.s)]

    def _from_digits(self, digits: Sequence[np.ndarray]) -> np.ndarray:
        out = np.zeros_like(digits[0])
        for i in reversed(range(self.s)):
            out = out * self.p + digits[i]
        return out

    def _add_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        da, db = self._digits(a), self._digits(b)
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def _mul_digits(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        p, s = self.p, self.s
        da, db = self._digits(a), self._digits(b)
        prod = [np.zeros_like(da[0]) for _ in range(2 * s - 1)]
        for i in range(s):
            for j in range(s):
                prod[i + j] = prod[i + j] + da[i] * db[j]
        prod = [c % p for c in prod]
        # reduce x^k for k >= s using x^s = -(m_0 + ... + m_{s-1} x^{s-1})
        for k in range(2 * s - 2, s - 1, -1):
            lead = prod[k]
            for i in range(s):
                prod[k - s + i] = (prod[k - s + i] - lead * self.modulus[i]) % p
        return self._from_digits(prod[:s])

    def _v_pow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.ones_like(a)
        base = a.copy()
        while e:
            if e & 1:
                result = self.v_mul(result, base)
            base = self.v_mul(base, base)
            e >>= 1
        return result

    def _pow_code(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = int(self.v_mul(np.int64(result), np.int64(base)))
            base = int(self.v_mul(np.int64(base), np.int64(base)))
            e >>= 1
        return result

    # -- vectorised arithmetic on integer codes -----------------------------

    def v_add(self, a, b):
        if self.s == 1:
            return (a + b) % self.p
        if "add" in self._tables:
            return self._tables["add"][a, b]
        return self._add_digits(np.asarray(a), np.asarray(b))

    def v_neg(self, a):
        return self._tables["neg"][a]

    def v_sub(self, a, b):
        return self.v_add(a, self.v_neg(b))

    def v_mul(self, a, b):
        if self.s == 1:
            return (a * b) % self.p
        if "mul" in self._tables:
            return self._tables["mul"][a, b]
        return self._mul_digits(np.asarray(a), np.asarray(b))

    def v_inv(self, a):
        """Inverse codes; zero maps to zero (callers check for zero)."""
        return self._tables["inv"][a]

    def v_from_int(self, n: int) -> int:
        """Code of the integer n mapped into the prime subfield."""
        return n % self.p

    # -- scalar API ----------------------------------------------------------

    def element(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement(self, (int(value) % self.p,) + (0,) * (self.s - 1))
        coeffs = tuple(int(c) for c in value)
        if len(coeffs) != self.s or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"coefficient vector {coeffs} invalid for GF({self.q})")
        return FieldElement(self, coeffs)

    def from_code(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise FieldError(f"code {code} out of range for GF({self.q})")
        return FieldElement(self, self._decode(int(code)))

    @property
    def zero(self) -> FieldElement:
        return self.from_code(0)

    @property
    def one(self) -> FieldElement:
        return self.from_code(1)

    @property
    def gen(self) -> FieldElement:
        """The class of x (equal to a prime-field element when s = 1)."""
        return self.from_code(self.p % self.q if self.s > 1 else 0)

    def _check(self, *elems: FieldElement):
        for e in elems:
            if e.field != self:
                raise FieldError(f"element of {e.field!r} used in {self!r}")

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        return self.from_code(int(self.v_add(a.code, b.code)))

    def sub(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        return self.from_code(int(self.v_sub(a.code, b.code)))

    def neg(self, a: FieldElement) -> FieldElement:
        self._check(a)
        return self.from_code(int(self.v_neg(a.code)))

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self._check(a, b)
        return self.from_code(int(self.v_mul(a.code, b.code)))

    def inv(self, a: FieldElement) -> FieldElement:
        self._check(a)
        if a.code == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.from_code(int(self.v_inv(a.code)))

    def pow(self, a: FieldElement, e: int) -> FieldElement:
        self._check(a)
        if e < 0:
            a, e = self.inv(a), -e
        return self.from_code(self._pow_code(a.code, e))

    def elements(self) -> list[FieldElement]:
        return enumerate_field(self)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    coefficients: tuple[int, ...]

    @property
    def code(self) -> int:
        return self.field._encode(self.coefficients)

    def __add__(self, other):
        return self.field.add(self, self.field.element(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.field.sub(self, self.field.element(other))

    def __rsub__(self, other):
        return self.field.sub(self.field.element(other), self)

    def __mul__(self, other):
        return self.field.mul(self, self.field.element(other))

    __rmul__ = __mul__

    def __neg__(self):
        return self.field.neg(self)

    def __truediv__(self, other):
        return self * self.field.inv(self.field.element(other))

    def __pow__(self, e: int):
        return self.field.pow(self, e)

    def __bool__(self):
        return any(self.coefficients)

    def __repr__(self):
        if self.field.s == 1:
            return f"{self.coefficients[0]}"
        terms = []
        for i, c in enumerate(self.coefficients):
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and mono else f"{c}{mono}")
        return " + ".join(reversed(terms)) or "0"


_FIELD_CACHE: dict[tuple[int, int], Field] = {}


def make_field(p: int, s: int = 1) -> Field:
    """GF(p^s) with the smallest monic irreducible modulus; deterministic."""
    key = (p, s)
    if key not in _FIELD_CACHE:
        pp = PrimePower(p, s)
        modulus = (0, 1) if s == 1 else smallest_irreducible(p, s)
        _FIELD_CACHE[key] = Field(pp, modulus)
    return _FIELD_CACHE[key]


def enumerate_field(F: Field) -> list[FieldElement]:
    return [F.from_code(c) for c in range(F.q)]


class FieldMatrix:
    """Dense matrix over a field, stored as an integer-code array."""

    def __init__(self, field: Field, entries):
        codes = []
        for row in entries:
            codes.append([field.element(e).code for e in row])
        width = {len(r) for r in codes}
        if len(width) > 1:
            raise FieldError("matrix rows have unequal length")
        self.field = field
        self.codes = np.array(codes, dtype=np.int64).reshape(len(codes), width.pop() if width else 0)

    @classmethod
    def from_codes(cls, field: Field, codes: np.ndarray) -> FieldMatrix:
        m = cls.__new__(cls)
        m.field = field
        m.codes = np.asarray(codes, dtype=np.int64)
        return m

    @property
    def shape(self) -> tuple[int, int]:
        return self.codes.shape

    def __getitem__(self, idx) -> FieldElement:
        return self.field.from_code(int(self.codes[idx]))

    def matmul(self, other: FieldMatrix) -> FieldMatrix:
        F = self.field
        if other.field != F:
            raise FieldError("matrices over different fields")
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise FieldError("inner dimensions differ")
        out = np.zeros((n, m), dtype=np.int64)
        for t in range(k):
            out = F.v_add(out, F.v_mul(self.codes[:, t : t + 1], other.codes[t : t + 1, :]))
        return FieldMatrix.from_codes(F, out)


def batch_determinant(F: Field, mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of square code matrices, shape (B, m, m).

    Gaussian elimination with a per-matrix pivot search, vectorised across
    the batch.  The input array is not modified.
    """
    A = np.array(mats, dtype=np.int64, copy=True)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise FieldError(f"expected a stack of square matrices, got shape {A.shape}")
    B, m, _ = A.shape
    det = np.ones(B, dtype=np.int64)
    rows = np.arange(B)
    for k in range(m):
        nz = A[:, k:, k] != 0
        has = nz.any(axis=1)
        piv = nz.argmax(axis=1) + k
        det[~has] = 0
        swap = has & (piv != k)
        if swap.any():
            idx = rows[swap]
            pk = piv[swap]
            tmp = A[idx, k, :].copy()
            A[idx, k, :] = A[idx, pk, :]
            A[idx, pk, :] = tmp
            det[idx] = F.v_neg(det[idx])
        pivot = A[:, k, k]
        det = F.v_mul(det, pivot)
        if k == m - 1:
            break
        inv = F.v_inv(pivot)
        factors = F.v_mul(A[:, k + 1 :, k], inv[:, None])
        update = F.v_mul(factors[:, :, None], A[:, None, k, k:])
        A[:, k + 1 :, k:] = F.v_sub(A[:, k + 1 :, k:], update)
    if m == 0:
        return np.ones(B, dtype=np.int64)
    return det


def determinant(M: FieldMatrix) -> FieldElement:
    n, m = M.shape
    if n != m:
        raise FieldError(f"determinant of a non-square {n}x{m} matrix")
    return M.field.from_code(int(batch_determinant(M.field, M.codes[None])[0]))
