"""Closed forms and bounds for Waring numbers g(k, q).

``predict_exact`` returns every catalogued exact-value rule whose hypotheses
hold for (k, q = p^m). ``bounds`` collects the applicable lower and upper
bounds. ``waring_pair_for_b`` builds a pair (k, q) with g(k, q) = b for any
positive b.

Rule tags are stable strings and form part of the CLI output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from waring.errors import Disconnected, NotCoprime, NotNormalized, NotPrime, WaringError
from waring.gp_graph import is_connected, subfield_witness
from waring.number_theory import (
    divides_psi,
    divisors,
    euler_phi,
    factorize,
    hamming_condition,
    is_prime,
    is_primitive_root,
    mult_order,
    psi,
    radical,
)

PROP71_MAX_H = 20


@dataclass(frozen=True)
class ExactPrediction:
    """A predicted value of g together with the rule and the hypotheses it checked.

    ``k`` and ``q`` record the pair the prediction is about.
    """

    value: int
    rule: str
    hypotheses: tuple[tuple[str, bool], ...] = ()
    k: int | None = None
    q: int | None = None

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "value": self.value,
            "k": None if self.k is None else str(self.k),
            "q": None if self.q is None else str(self.q),
            "hypotheses": [{"condition": c, "holds": h} for c, h in self.hypotheses],
        }


def _normalize(p: int, m: int, k: int, normalize: bool) -> tuple[int, int]:
    if not is_prime(p):
        raise NotPrime(p)
    if m < 1 or k < 1:
        raise WaringError("m and k must be positive")
    q = p**m
    if (q - 1) % k:
        if not normalize:
            raise NotNormalized(k, q - 1)
        k = math.gcd(k, q - 1)
    return q, k


# -- prime fields ----------------------------------------------------------------


def cox_pairs(p: int, form: str) -> list[tuple[int, int]]:
    """All (a, b) with a > b > 0 and a^2 + ab + b^2 = p (form "hex") or a^2 + b^2 = p ("square")."""
    out = []
    for b in range(1, math.isqrt(p) + 1):
        for a in range(b + 1, math.isqrt(p) + 1):
            v = a * a + b * b + (a * b if form == "hex" else 0)
            if v == p:
                out.append((a, b))
            if v >= p:
                break
    return out


def _prime_field_rules(p: int, k: int, k_raw: int) -> list[ExactPrediction]:
    out = []
    q = p
    n = (p - 1) // k
    special = {1, 2, (p - 1) // 2, p - 1} if p > 2 else {1}
    if k in special:
        out.append(ExactPrediction(k, "Cauchy1813", (("k in {1, 2, (p-1)/2, p-1}", True),), k, q))
    if k == 3 or k_raw == 3:
        if k == 3:
            value = 3 if p == 7 else 2
            hyp = ("p = 1 mod 3", True)
        else:
            value, hyp = 1, ("p != 1 mod 3", True)
        out.append(ExactPrediction(value, "Small1977-g3", (hyp,), k, q))
    if n in (3, 6):
        pairs = cox_pairs(p, "hex")
        if len(pairs) == 1:
            a, b = pairs[0]
            value = a + b - 1 if n == 3 else (2 * a + b) // 3
            out.append(
                ExactPrediction(value, f"Cox-n{n}", ((f"p = {a}^2 + {a}*{b} + {b}^2", True),), k, q)
            )
    if n == 4:
        pairs = cox_pairs(p, "square")
        if len(pairs) == 1:
            a, b = pairs[0]
            out.append(ExactPrediction(a - 1, "Cox-n4", ((f"p = {a}^2 + {b}^2", True),), k, q))
    return out


# -- Hamming family ------------------------------------------------------------------

# Residues of p and the exponent step e such that the rule covers every a divisible by e.
_COR67_STEP = {1: 1, 6: 2, 2: 3, 3: 6, 4: 6, 5: 6}


def family_rules(p: int, a: int, b: int) -> list[str]:
    """Named special cases whose hypotheses on (p, a, b) give g(psi(p^a, b)/b, p^(ab)) = b."""
    fired = []
    if b == 2 and p % 2:
        fired.append("Cor6.2")
    if b == 3 and p != 3 and (p % 3 == 1 or a % 2 == 0):
        fired.append("Cor6.3")
    if b == 5 and p != 5 and a % mult_order(p, 5) == 0:
        fired.append("Cor6.4")
    if b == 7 and p != 7 and a % _COR67_STEP[p % 7] == 0:
        fired.append("Cor6.7")
    if b == 6 and p % 2 and p != 3:
        fired.append("Cor6.8")
    if b == 10 and p % 2 and p != 5 and (p % 5 in (1, 4) or a % 2 == 0):
        fired.append("Cor6.8")
    if b == 15 and p not in (3, 5):
        r = p % 15
        step = 1 if r == 1 else 2 if r in (14, 4, 11) else 4
        if a % step == 0:
            fired.append("Cor6.9")
    if b == 21 and p not in (3, 7):
        step = 1 if p % 3 == 1 and p % 7 in (1, 2, 4) else 2
        if a % step == 0:
            fired.append("Cor6.10")
    if b > 1 and b % p and a % euler_phi(radical(b)) == 0:
        fired.append("Prop6.11")
    f = factorize(b)
    if b > 1 and f.is_prime_power and f.primes[0] != p and a % (f.primes[0] - 1) == 0:
        fired.append("Cor6.13")
    return fired


def _hamming_rules(p: int, m: int, k: int) -> list[ExactPrediction]:
    out = []
    q = p**m
    for b in divisors(m):
        if b == 1:
            continue
        a = m // b
        if math.gcd(p, b) != 1:
            continue
        cond = hamming_condition(p, a, b)
        if not cond.holds:
            continue
        kk = (q - 1) // ((p**a - 1) * b)
        if kk != k:
            continue
        hyp = [(f"b = {b} divides psi(p^{a}, {b})", True), ("Gamma(k, q) connected", True)]
        hyp += [(item, True) for item in cond.fired]
        hyp = tuple(hyp)
        out.append(ExactPrediction(b, "Thm4.2", hyp, k, q))
        for tag in family_rules(p, a, b):
            out.append(ExactPrediction(b, tag, ((f"a = {a}, b = {b}", True),), k, q))
    return out


# -- prime powers ----------------------------------------------------------------------


def _prime_power_rules(p: int, m: int, k: int) -> list[ExactPrediction]:
    out = []
    q = p**m
    if k >= 2 and (k - 1) ** 4 < q:
        out.append(ExactPrediction(2, "Small1977-g2", (("2 <= k < q^(1/4) + 1", True),), k, q))
    if k >= 2:
        for ell in range(1, m // 2 + 1):
            if m % (2 * ell) == 0 and m // (2 * ell) != 1 and (p**ell + 1) % k == 0:
                hyp = ((f"k | p^{ell} + 1", True), (f"s = {m // (2 * ell)} != 1", True))
                out.append(ExactPrediction(2, "MC2008", hyp, k, q))
                break
    return out


def katz_kurlberg(p: int, r: int, t: int) -> tuple[ExactPrediction, ...] | None:
    """Exact values for q = p^phi(r^t) when p is a primitive root modulo r^t.

    Returns None when p is not a primitive root; otherwise the first entry is
    the value for k = (q-1)/r^t and, for odd p and r, the second is the value
    for k = (q-1)/(2 r^t).
    """
    if not is_prime(p):
        raise NotPrime(p)
    if not is_prime(r):
        raise NotPrime(r)
    if p == r or t < 1:
        raise WaringError("need distinct primes p, r and t >= 1")
    rt = r**t
    if not is_primitive_root(p, rt):
        return None
    phi = euler_phi(rt)
    q = p**phi
    hyp = ((f"p primitive root mod {r}^{t}", True),)
    res = [ExactPrediction((p - 1) * phi // 2, "KK-Eq2.1", hyp, (q - 1) // rt, q)]
    if p % 2 and r % 2:
        inner = Fraction(p * r, 4) - (Fraction(p, 4 * r) if r < p else Fraction(r, 4 * p))
        value = r ** (t - 1) * math.floor(inner)
        res.append(ExactPrediction(value, "KK-Eq2.2", hyp, (q - 1) // (2 * rt), q))
    return tuple(res)


def _kk_rules(p: int, m: int, k: int) -> list[ExactPrediction]:
    out = []
    for d in divisors(m):
        r = d + 1
        if not is_prime(r) or r == p:
            continue
        rest, t = m // d, 1
        while rest % r == 0:
            rest //= r
            t += 1
        if rest != 1:
            continue
        for pred in katz_kurlberg(p, r, t) or ():
            if pred.k == k:
                out.append(pred)
    return out


# Every tag predict_exact can emit.
EXACT_RULES: tuple[str, ...] = (
    "Cauchy1813", "Small1977-g3", "Small1977-g2", "Cox-n3", "Cox-n4", "Cox-n6",
    "KK-Eq2.1", "KK-Eq2.2", "MC2008", "Thm4.2", "Prop6.11", "Cor6.13",
    "Cor6.2", "Cor6.3", "Cor6.4", "Cor6.7", "Cor6.8", "Cor6.9", "Cor6.10",
)


def predict_exact(p: int, m: int, k: int, *, normalize: bool = True) -> list[ExactPrediction]:
    """Every catalogued exact value that applies to g(k, p^m)."""
    k_raw = k
    q, k = _normalize(p, m, k, normalize)
    if not is_connected(p, m, k):
        return []
    out: list[ExactPrediction] = []
    if m == 1:
        out += _prime_field_rules(p, k, k_raw)
    elif k == 1:
        out.append(ExactPrediction(1, "Cauchy1813", (("k = 1", True),), 1, q))
    if m > 1:
        out += _prime_power_rules(p, m, k)
    out += _kk_rules(p, m, k)
    out += _hamming_rules(p, m, k)
    return out


# -- bounds --------------------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    """One bound. ``value`` is the raw real bound; ``integer`` is its ceiling
    (lower) or floor (upper), or None when the rule gives no usable number."""

    rule: str
    value: float | None
    integer: int | None

    def to_dict(self) -> dict:
        return {"rule": self.rule, "value": self.value, "integer": self.integer}


@dataclass(frozen=True)
class BoundReport:
    lower: tuple[Bound, ...] = ()
    upper: tuple[Bound, ...] = ()
    best_lower: int = field(init=False)
    best_upper: int | None = field(init=False)

    def __post_init__(self):
        lows = [b.integer for b in self.lower if b.integer is not None]
        ups = [b.integer for b in self.upper if b.integer is not None]
        object.__setattr__(self, "best_lower", max(lows) if lows else 1)
        object.__setattr__(self, "best_upper", min(ups) if ups else None)

    def to_dict(self) -> dict:
        return {
            "lower": [b.to_dict() for b in self.lower],
            "upper": [b.to_dict() for b in self.upper],
            "best_lower": self.best_lower,
            "best_upper": self.best_upper,
        }


_EPS = 1e-9


def _ceil(x: float) -> int:
    return math.ceil(x - _EPS * max(1.0, abs(x)))


def _floor(x: float) -> int:
    return math.floor(x + _EPS * max(1.0, abs(x)))


def _least_int_root_bound(target: int, h: int, offset: int) -> int:
    """Least integer c with 2c + offset >= 0 and (2c + offset)^h >= target."""
    c = _ceil((target ** (1.0 / h) - offset) / 2)
    while c > -offset / 2 and (2 * (c - 1) + offset) >= 0 and (2 * (c - 1) + offset) ** h >= target:
        c -= 1
    while (2 * c + offset) < 0 or (2 * c + offset) ** h < target:
        c += 1
    return c


def prop71_lower(p: int, h: int) -> Bound | None:
    """Circulant diameter bound for g((p-1)/(2h), p)."""
    if p % 2 == 0 or (p - 1) % (2 * h) or h > PROP71_MAX_H:
        return None
    hp = math.factorial(h) * p
    value = hp ** (1.0 / h) / 2 - (h + 1) / 2
    integer = _least_int_root_bound(hp, h, h + 1) if hp > (h + 1) ** h else None
    return Bound("Prop7.1-circulant", value, integer)


def _cipra_constant(n: int) -> float:
    c = 1.0
    for ell in factorize(n).primes:
        if ell % 2:
            c *= ell ** (1.0 / (2 * (ell - 1)))
    return c


def winterhof_s(q: int, k: int) -> int | None:
    """Least s >= 1 with q^(s-1) > (k-1)^(2s), or None if none exists."""
    base = (k - 1) ** 2
    if base == 0:
        return 1
    if q <= base:
        return None
    s = max(1, int(math.log(q) / (math.log(q) - math.log(base))) - 1)
    while s > 1 and q ** (s - 2) > base ** (s - 1):
        s -= 1
    while q ** (s - 1) <= base**s:
        s += 1
    return s


@lru_cache(maxsize=1024)
def _prime_field_g(d: int, p: int) -> int:
    from waring.gp_graph import gp_graph, waring_number_bfs

    return waring_number_bfs(gp_graph(p, 1, d)).g


def bounds(p: int, m: int, k: int, *, normalize: bool = True, lift_cap: int = 1 << 20) -> BoundReport:
    """All applicable lower and upper bounds on g(k, p^m)."""
    q, k = _normalize(p, m, k, normalize)
    witness = subfield_witness(p, m, k)
    if witness is not None:
        raise Disconnected(k, q, witness)
    n = (q - 1) // k
    lower = [Bound("Trivial", 1.0, 1)]
    upper = []
    if m == 1 or k == 1:
        upper.append(Bound("Cauchy1813", float(k), k))
    if m == 1:
        if n > 2 and k > 1:
            upper.append(Bound("CMS1959", float(k // 2 + 1), k // 2 + 1))
        if 1 < k < p - 1 and k**7 >= (p - 1) ** 4:
            v = 170 * k ** (7 / 3) / (p - 1) ** (4 / 3) * math.log(p)
            upper.append(Bound("GV1988", v, _floor(v)))
        # g((p-1)/2, p) = (p-1)/2 exceeds 83*sqrt(k) once k > 6889, so n = 2 is excluded
        if n > 2:
            v = 83 * math.sqrt(k)
            upper.append(Bound("CP2008", v, _floor(v)))
        if p > 2 and ((p - 1) // 2) % k == 0:
            b = prop71_lower(p, (p - 1) // (2 * k))
            if b is not None:
                lower.append(b)
        lower.append(Bound("GS1993-Eq2.3", None, None))
        v = (1 - 1 / p) / (2 * _cipra_constant(n)) * p ** (1.0 / euler_phi(n))
        lower.append(Bound("Ci2007-Eq2.6", v, _ceil(v)))
    else:
        s = winterhof_s(q, k)
        if s is not None:
            upper.append(Bound("Win1998-s", float(s), s))
        d = (p - 1) // math.gcd(m, p - 1)
        gd = _prime_field_g(d, p) if p <= lift_cap else d
        upper.append(Bound("Win1998-lift", float(m * gd), m * gd))
        if (k - 1) ** 7 >= q**3 and k * k <= q:
            upper.append(Bound("Ci2009-8", 8.0, 8))
        if k * k < q:
            upper.append(Bound("GlR2009-8", 8.0, 8))
        v = (16 if m == 2 else 10) * math.sqrt(k + 1)
        upper.append(Bound("Ci2009-sqrt", v, _floor(v)))
    r = n
    if m == r - 1 and is_prime(r) and r != p and is_primitive_root(p, r):
        v = ((r * k) ** (1.0 / (r - 1)) - 1) / 2
        lower.append(Bound("Win2001-Eq2.5", v, _least_int_root_bound(r * k, r - 1, 1)))
    return BoundReport(tuple(lower), tuple(upper))


# -- constructor -----------------------------------------------------------------------


class WaringPair(NamedTuple):
    k: int
    p: int
    m: int


def _least_coprime_prime(b: int) -> int:
    p = 2
    while b % p == 0 or not is_prime(p):
        p += 1
    return p


_PAIR_MAX_STEPS = 64


def waring_pair_for_b(b: int, p: int | None = None) -> WaringPair:
    """A pair (k, p^m) with g(k, p^m) = b.

    The exponent is the least multiple a of phi(rad(b)) for which the graph is
    connected. For most b that is phi(rad(b)) itself; b = 4 with p = 3 needs
    a = 2 because k = psi(3, 4)/4 = 10 leaves R_k inside GF(9).
    """
    if b < 1:
        raise WaringError("b must be positive")
    if p is None:
        p = _least_coprime_prime(b)
    elif not is_prime(p):
        raise NotPrime(p)
    elif math.gcd(p, b) != 1:
        raise NotCoprime(p, b)
    if b == 1:
        return WaringPair(1, p, 1)
    step = euler_phi(radical(b))
    for a in range(step, step * (_PAIR_MAX_STEPS + 1), step):
        k, rem = divmod(psi(p**a, b), b)
        assert rem == 0 and divides_psi(b, pow(p, a, b)).divides
        if subfield_witness(p, a * b, k) is None:
            return WaringPair(k, p, a * b)
    raise WaringError(f"no connected pair found for b={b}, p={p}")  # pragma: no cover
