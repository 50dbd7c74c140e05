"""Integer-side machinery.

Primality and factorization, Euler's totient, radicals, multiplicative
orders, the geometric sums ``psi(x, b) = 1 + x + ... + x**(b-1)`` (exactly and
modulo an integer), cyclotomic values, and decision procedures for
``b | psi(x, b)``.

All decisions are made with modular arithmetic; only :func:`psi` builds the
full integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from waring.errors import DegreeCapExceeded, NotCoprime, WaringError

FACTOR_CAP = 1 << 63
CYCLOTOMIC_CAP = 10_000
TRIAL_LIMIT = 10**6

# The primes up to 41 are a deterministic witness set for n < 3.3e24 (well past 2**64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _small_primes(limit: int) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i in range(limit + 1) if sieve[i]]


_SMALL_PRIMES = _small_primes(1000)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; exact for every n below 2**64."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n."""
    # Seeds walk 1, 2, 3, ... so the result is reproducible.
    for c in range(1, 1000):
        y, r, qprod, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    qprod = qprod * abs(x - y) % n
                g = math.gcd(qprod, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise WaringError(f"Pollard rho failed to split {n}")  # pragma: no cover


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending ``(prime, exponent)`` pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(r for r, _ in self.pairs)

    def value(self) -> int:
        out = 1
        for r, t in self.pairs:
            out *= r**t
        return out

    @property
    def is_squarefree(self) -> bool:
        return all(t == 1 for _, t in self.pairs)

    @property
    def is_prime_power(self) -> bool:
        return len(self.pairs) == 1

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)


@lru_cache(maxsize=4096)
def factorize(n: int) -> Factorization:
    if n < 1:
        raise WaringError(f"cannot factor {n}")
    if n > FACTOR_CAP:
        raise WaringError(f"{n} exceeds the factorization cap 2**63")
    counts: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
    p = _SMALL_PRIMES[-1] + 2
    while n > 1 and p <= TRIAL_LIMIT and p * p <= n:
        while n % p == 0:
            counts[p] = counts.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    while stack:
        x = stack.pop()
        if is_prime(x):
            counts[x] = counts.get(x, 0) + 1
            continue
        r = math.isqrt(x)
        if r * r == x:
            stack += [r, r]
            continue
        f = _pollard_brent(x)
        stack += [f, x // f]
    return Factorization(tuple(sorted(counts.items())))


def divisors(n: int) -> list[int]:
    """All positive divisors of n in ascending order."""
    divs = [1]
    for r, t in factorize(n):
        divs = [d * r**e for d in divs for e in range(t + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    out = n
    for r, _ in factorize(n):
        out = out // r * (r - 1)
    return out


def radical(n: int) -> int:
    out = 1
    for r, _ in factorize(n):
        out *= r
    return out


def mult_order(x: int, n: int) -> int:
    """Least s >= 1 with x**s == 1 (mod n).

    Divisors of phi(n) are tested in ascending order, so the first hit is
    the order.
    """
    if n == 1:
        return 1
    x %= n
    if math.gcd(x, n) != 1:
        raise NotCoprime(x, n)
    for d in divisors(euler_phi(n)):
        if pow(x, d, n) == 1:
            return d
    raise AssertionError("unreachable: x**phi(n) == 1 by Euler")  # pragma: no cover


def is_primitive_root(x: int, n: int) -> bool:
    if math.gcd(x, n) != 1:
        return False
    return mult_order(x, n) == euler_phi(n)


def psi(x: int, b: int) -> int:
    """Exact ``1 + x + ... + x**(b-1)``; equals b at x == 1."""
    if b < 1:
        raise WaringError("b must be positive")
    if x == 1:
        return b
    return (x**b - 1) // (x - 1)


def _psi_pow_mod(x: int, b: int, modulus: int) -> tuple[int, int]:
    # Returns (psi(x, b) mod M, x**b mod M).
    if b == 0:
        return 0, 1 % modulus
    s, xt = _psi_pow_mod(x, b // 2, modulus)
    s = s * (xt + 1) % modulus
    xt = xt * xt % modulus
    if b % 2:
        s = (s * x + 1) % modulus
        xt = xt * x % modulus
    return s, xt


def psi_mod(x: int, b: int, modulus: int) -> int:
    """``psi(x, b) mod modulus`` in O(log b) multiplications."""
    if modulus < 1:
        raise WaringError("modulus must be positive")
    if b < 1:
        raise WaringError("b must be positive")
    return _psi_pow_mod(x % modulus, b, modulus)[0]


def mobius(n: int) -> int:
    f = factorize(n)
    if not f.is_squarefree:
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=512)
def cyclotomic_coeffs(d: int) -> tuple[int, ...]:
    """Integer coefficients of the d-th cyclotomic polynomial, lowest degree first.

    Built as the product of ``(x**e - 1) ** mobius(d // e)`` over e | d, doing
    the multiplications before the exact divisions.
    """
    if d < 1:
        raise WaringError("cyclotomic index must be positive")
    if d > CYCLOTOMIC_CAP:
        raise DegreeCapExceeded(d, CYCLOTOMIC_CAP)
    ups, downs = [], []
    for e in divisors(d):
        mu = mobius(d // e)
        if mu == 1:
            ups.append(e)
        elif mu == -1:
            downs.append(e)
    poly = [1]
    for e in ups:
        # poly * (x^e - 1)
        new = [0] * (len(poly) + e)
        for i, c in enumerate(poly):
            new[i] -= c
            new[i + e] += c
        poly = new
    for e in downs:
        # exact division by (x^e - 1): P[i] = Q[i-e] - Q[i]
        deg_q = len(poly) - 1 - e
        quo = [0] * (deg_q + 1)
        for i in range(deg_q + 1):
            quo[i] = (quo[i - e] if i >= e else 0) - poly[i]
        poly = quo
    return tuple(poly)


def cyclotomic_eval_mod(d: int, x: int, modulus: int) -> int:
    acc = 0
    for c in reversed(cyclotomic_coeffs(d)):
        acc = (acc * x + c) % modulus
    return acc


@dataclass(frozen=True)
class PsiDivisibilityVerdict:
    """Outcome of ``b | psi(x, b)``.

    ``divides`` is always the direct modular test. ``criterion_used`` names
    the structural criterion that was applied and ``criterion_verdict`` is its
    answer (``None`` when only the direct test ran).
    """

    divides: bool
    criterion_used: str
    criterion_verdict: bool | None = None
    details: str = ""


SQUAREFREE = "squarefree-L5.1"
PRIME_POWER = "prime-power-L5.2"
GENERAL = "general-L5.3"
DIRECT = "direct-modular"


def squarefree_criterion(b: int, x: int) -> tuple[bool, str]:
    """For squarefree b = r1 < ... < rl: x = 1 mod r1 and x**(b/ri) = 1 mod ri."""
    primes = factorize(b).primes
    if not primes:
        return True, "b = 1"
    r1 = primes[0]
    if x % r1 != 1 % r1:
        return False, f"x = {x % r1} != 1 (mod {r1})"
    for r in primes[1:]:
        if pow(x, b // r, r) != 1:
            return False, f"x^{b // r} != 1 (mod {r})"
    return True, "all congruences hold"


def _order_is_small_power(x: int, r: int, t: int) -> tuple[bool, int]:
    # ord_{r^t}(x) == r^h for some 0 <= h <= t-1 ?
    o = mult_order(x, r**t)
    h = 0
    while o % r == 0:
        o //= r
        h += 1
    return o == 1 and h <= t - 1, h


def prime_power_criterion(r: int, t: int, x: int) -> tuple[bool, str]:
    ok, h = _order_is_small_power(x, r, t)
    order = mult_order(x, r**t)
    if ok:
        return True, f"ord_{r**t}(x) = {r}^{h}"
    return False, f"ord_{r**t}(x) = {order} is not a power of {r} below {r**t}"


def general_criterion(b: int, x: int) -> tuple[bool, str]:
    """Sufficient condition: every ord_{ri^ti}(x) is a power of ri below ri^ti."""
    for r, t in factorize(b):
        ok, _ = _order_is_small_power(x, r, t)
        if not ok:
            return False, f"ord_{r**t}(x) = {mult_order(x, r**t)}"
    return True, "every local order is a small prime power"


def divides_psi(b: int, x: int) -> PsiDivisibilityVerdict:
    if b < 1:
        raise WaringError("b must be positive")
    if math.gcd(x, b) != 1:
        raise NotCoprime(x, b)
    direct = psi_mod(x, b, b) == 0
    f = factorize(b)
    if f.is_squarefree:
        verdict, why = squarefree_criterion(b, x)
        used = SQUAREFREE
    elif f.is_prime_power:
        (r, t), = f.pairs
        verdict, why = prime_power_criterion(r, t, x)
        used = PRIME_POWER
    else:
        verdict, why = general_criterion(b, x)
        used = GENERAL
        if not verdict:
            return PsiDivisibilityVerdict(direct, DIRECT, None, f"general criterion silent ({why})")
    return PsiDivisibilityVerdict(direct, used, verdict, why)


@dataclass(frozen=True)
class HammingCondition:
    """Whether ``b | psi(p**a, b)`` and which named sufficient conditions fire."""

    holds: bool
    verdict: PsiDivisibilityVerdict
    fired: tuple[str, ...] = field(default_factory=tuple)


def _named_items(p: int, a: int, b: int) -> list[str]:
    x = pow(p, a, b)
    f = factorize(b)
    primes = f.primes
    fired = []
    if b > 1 and f.is_squarefree and len(primes) == 1:
        if x % b == 1:
            fired.append("Thm6.1(a)")
    if b > 2 and b % 2 == 0 and is_prime(b // 2):
        r = b // 2
        if x % r in (1, r - 1) and math.gcd(x, b) == 1:
            fired.append("Thm6.1(b)")
    if len(primes) == 2 and f.is_squarefree and primes[0] > 2:
        r, r2 = primes
        if (r2 - 1) % r != 0 and x % b == 1:
            fired.append("Thm6.1(c)")
    if b > 1 and f.is_squarefree and squarefree_criterion(b, x % b)[0]:
        fired.append("Thm6.1(d)")
    if b > 1 and f.is_prime_power:
        (r, t), = f.pairs
        if _order_is_small_power(x % b, r, t)[0]:
            fired.append("Thm6.1(e)")
    if b > 1 and general_criterion(b, x % b)[0]:
        fired.append("Thm6.1(f)")
    if a % euler_phi(radical(b)) == 0:
        fired.append("Prop6.11")
    return fired


def hamming_condition(p: int, a: int, b: int) -> HammingCondition:
    """Decide ``b | psi(p**a, b)``, the integrality condition behind g = b.

    When it holds and the resulting graph is connected,
    ``g(psi(p**a, b) // b, p**(a*b)) == b``. Connectivity can fail: p = 3,
    a = 1, b = 4 gives k = 10 and R_10 = GF(9)*.
    """
    if math.gcd(p, b) != 1:
        raise NotCoprime(p, b)
    x = pow(p, a, b)
    verdict = divides_psi(b, x)
    return HammingCondition(verdict.divides, verdict, tuple(_named_items(p, a, b)))
