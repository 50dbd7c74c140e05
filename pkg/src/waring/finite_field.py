"""Exact arithmetic in GF(p^m) on integer-indexed elements.

An element is the integer ``c_0 + c_1 p + ... + c_{m-1} p^{m-1}`` built from
the coefficients of its residue polynomial modulo the field's defining
polynomial, so 0 and 1 are the additive and multiplicative identities and a
whole field fits in a flat array of length q.

Scalar operations work on Python ints. The ``*_vec`` helpers apply the same
operations to numpy index arrays and are what the graph search runs on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from waring.errors import DivisionByZero, NotADivisor, NotPrime, SizeCapExceeded, WaringError
from waring.number_theory import factorize, is_prime

DEFAULT_SIZE_CAP = 1 << 26
_CHUNK = 1 << 18


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by the monic den over GF(p); coefficient lists lowest first."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            off = i - dd
            for j in range(dd + 1):
                num[off + j] = (num[off + j] - c * den[j]) % p
    out = num[:dd]
    while out and out[-1] == 0:
        out.pop()
    return out


def is_irreducible(poly: list[int] | tuple[int, ...], p: int) -> bool:
    """Trial division of a monic polynomial by every monic polynomial of degree <= deg/2."""
    m = len(poly) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_rem(poly, [*low, 1], p):
                return False
    return True


def _digits(x: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        x, c = divmod(x, p)
        out.append(c)
    return out


@dataclass(frozen=True)
class FieldContext:
    """Immutable description of GF(p^m).

    ``modulus`` lists the m+1 coefficients of the monic defining polynomial,
    lowest degree first. ``primitive`` is the index of a generator of the
    multiplicative group.
    """

    p: int
    m: int
    modulus: tuple[int, ...]
    primitive: int
    q: int = field(init=False)
    _powers: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)
        pw = np.array([self.p**j for j in range(self.m)], dtype=np.int64)
        pw.flags.writeable = False
        object.__setattr__(self, "_powers", pw)

    # -- encoding -----------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        return _digits(a, self.p, self.m)

    def from_coeffs(self, coeffs) -> int:
        out = 0
        for c in reversed(list(coeffs)):
            out = out * self.p + (c % self.p)
        return out

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise WaringError(f"{a} is not an element of GF({self.q})")
        return a

    # -- scalar arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        if p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % p
        return self.from_coeffs(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        if self.m == 1:
            return -a % self.p
        return self.from_coeffs(-c for c in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        if p == 2:
            return self._mul_gf2(a, b)
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] += x * y
        return self.from_coeffs(_poly_rem([c % p for c in prod], list(self.modulus), p))

    def _mul_gf2(self, a: int, b: int) -> int:
        m = self.m
        red = self.from_coeffs(self.modulus[:m])
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a >> m:
                a = (a ^ (1 << m)) ^ red
        return out

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise WaringError("negative exponent")
        out, base = 1, a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero()
        return self.pow(a, self.q - 2)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise DivisionByZero()
        n = self.q - 1
        for r, t in factorize(n) if n > 1 else ():
            for _ in range(t):
                if self.pow(a, n // r) == 1:
                    n //= r
                else:
                    break
        return n

    # -- vectorized arithmetic ---------------------------------------------

    def digits_vec(self, arr: np.ndarray) -> np.ndarray:
        """Coefficient matrix of shape (m, len(arr))."""
        arr = np.asarray(arr, dtype=np.int64)
        return np.stack([(arr // int(pj)) % self.p for pj in self._powers])

    def add_vec(self, arr: np.ndarray, b) -> np.ndarray:
        """Add the scalar or array b to every entry of arr."""
        arr = np.asarray(arr, dtype=np.int64)
        p, m = self.p, self.m
        if p == 2:
            return arr ^ b
        if m == 1:
            s = arr + b
            s[s >= p] -= p
            return s
        if np.isscalar(b) or np.ndim(b) == 0:
            b = int(b)
            # digitwise sum minus p * p^j for every digit that overflows
            out = arr + b
            for j, pj in enumerate(self._powers):
                pj = int(pj)
                bj = (b // pj) % p
                if bj:
                    over = (arr // pj) % p >= p - bj
                    out -= over * (p * pj)
            return out
        b = np.asarray(b, dtype=np.int64)
        out = arr + b
        for pj in self._powers:
            pj = int(pj)
            over = (arr // pj) % p + (b // pj) % p >= p
            out -= over * (p * pj)
        return out

    def neg_vec(self, arr: np.ndarray) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        if self.p == 2:
            return arr.copy()
        d = self.digits_vec(arr)
        return self._powers @ ((-d) % self.p)

    def mul_matrix(self, c: int) -> np.ndarray:
        """Matrix over GF(p) of the linear map x -> c*x in the coefficient basis."""
        # x^j has index p^j
        cols = [self.coeffs(self.mul(c, self.p**j)) for j in range(self.m)]
        return np.array(cols, dtype=np.int64).T

    def mul_const_vec(self, arr: np.ndarray, c: int) -> np.ndarray:
        arr = np.asarray(arr, dtype=np.int64)
        if self.m == 1:
            return arr * c % self.p
        mat = self.mul_matrix(c)
        out = np.empty_like(arr)
        for lo in range(0, arr.size, _CHUNK):
            d = self.digits_vec(arr[lo : lo + _CHUNK])
            out[lo : lo + _CHUNK] = self._powers @ ((mat @ d) % self.p)
        return out

    def powers_vec(self, g: int, count: int) -> np.ndarray:
        """``[g**0, g**1, ..., g**(count-1)]`` by repeated doubling."""
        out = np.empty(count, dtype=np.int64)
        if count == 0:
            return out
        out[0] = 1
        filled, step = 1, g
        while filled < count:
            take = min(filled, count - filled)
            out[filled : filled + take] = self.mul_const_vec(out[:take], step)
            filled += take
            step = self.mul(step, step)
        return out

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus), "primitive": self.primitive}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldContext":
        return cls(int(data["p"]), int(data["m"]), tuple(int(c) for c in data["modulus"]), int(data["primitive"]))


def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree m (low coefficients read base p)."""
    for j in range(p**m):
        poly = (*_digits(j, p, m), 1)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError("an irreducible polynomial exists for every degree")  # pragma: no cover


def _least_primitive(ctx: FieldContext) -> int:
    n = ctx.q - 1
    if n == 1:
        return 1
    primes = factorize(n).primes
    for g in range(1, ctx.q):
        if all(ctx.pow(g, n // r) != 1 for r in primes):
            return g
    raise AssertionError("the multiplicative group is cyclic")  # pragma: no cover


_FIELD_CACHE: dict[tuple[int, int], FieldContext] = {}


def build_field(p: int, m: int, size_cap: int = DEFAULT_SIZE_CAP) -> FieldContext:
    """Deterministically construct GF(p^m).

    The defining polynomial is the least monic irreducible in base-p order and
    the primitive element is the least index of multiplicative order q-1.
    """
    if m < 1:
        raise WaringError("degree m must be positive")
    if p >= 1 << 63 or not is_prime(p):
        raise NotPrime(p)
    q = p**m
    if q > size_cap:
        raise SizeCapExceeded(q, size_cap)
    key = (p, m)
    if key not in _FIELD_CACHE:
        modulus = least_irreducible(p, m)
        probe = FieldContext(p, m, modulus, 1)
        _FIELD_CACHE[key] = FieldContext(p, m, modulus, _least_primitive(probe))
    return _FIELD_CACHE[key]


def kth_power_subgroup(ctx: FieldContext, k: int) -> np.ndarray:
    """Sorted indices of the k-th powers of the nonzero elements (k must divide q-1)."""
    if k < 1 or (ctx.q - 1) % k:
        raise NotADivisor(k, ctx.q - 1)
    n = (ctx.q - 1) // k
    gen = ctx.pow(ctx.primitive, k)
    return np.sort(ctx.powers_vec(gen, n))


# Module-level spellings of the field operations.


def add(ctx: FieldContext, a: int, b: int) -> int:
    return ctx.add(a, b)


def neg(ctx: FieldContext, a: int) -> int:
    return ctx.neg(a)


def mul(ctx: FieldContext, a: int, b: int) -> int:
    return ctx.mul(a, b)


def inv(ctx: FieldContext, a: int) -> int:
    return ctx.inv(a)


def pow(ctx: FieldContext, a: int, e: int) -> int:  # noqa: A001
    return ctx.pow(a, e)
