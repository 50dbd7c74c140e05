"""Golden-value and oracle verification suites driven by ``waring verify``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from waring.formulas import bounds, predict_exact, waring_pair_for_b
from waring.gp_graph import (
    _all_pairs,
    connectivity,
    gp_graph,
    waring_number_bfs,
)
from waring.number_theory import divisors, is_prime


@dataclass(frozen=True)
class Golden:
    """One published value. ``kind`` is "g", "lower", "upper" or "pair"."""

    kind: str
    rule: str
    p: int
    m: int
    k: int
    expected: int


# fmt: off
GOLDEN: tuple[Golden, ...] = (
    Golden("g", "Thm4.2", 2, 6, 7, 3),
    Golden("g", "Thm4.2", 2, 12, 91, 3),
    Golden("g", "Thm4.2", 2, 20, 13981, 5),
    Golden("g", "Cor6.4", 2, 20, 13981, 5),
    Golden("g", "Cor6.2", 3, 2, 2, 2),
    Golden("g", "Cor6.2", 3, 4, 5, 2),
    Golden("g", "Cor6.2", 3, 6, 14, 2),
    Golden("g", "Cor6.2", 5, 2, 3, 2),
    Golden("g", "Cor6.2", 5, 4, 13, 2),
    Golden("g", "Cor6.2", 5, 6, 63, 2),
    Golden("g", "Cor6.2", 7, 2, 4, 2),
    Golden("g", "Cor6.2", 7, 4, 25, 2),
    Golden("g", "Cor6.2", 7, 6, 172, 2),
    Golden("g", "Cor6.2", 11, 2, 6, 2),
    Golden("g", "Cor6.2", 13, 2, 7, 2),
    Golden("g", "Cor6.3", 13, 3, 61, 3),
    Golden("g", "Cor6.4", 11, 5, 3221, 5),
    Golden("g", "Small1977-g3", 7, 1, 3, 3),
    Golden("g", "Cox-n4", 13, 1, 3, 2),
    Golden("g", "KK-Eq2.1", 3, 4, 16, 4),
    Golden("g", "KK-Eq2.2", 3, 4, 8, 3),
    Golden("g", "Prop6.11", 2, 18, 9709, 9),
    Golden("g", "Cor6.13", 2, 18, 9709, 9),
    Golden("lower", "Prop7.1-circulant", 37, 1, 9, 3),
    Golden("upper", "Cauchy1813", 37, 1, 9, 9),
    Golden("lower", "Prop7.1-circulant", 37, 1, 6, 2),
    Golden("upper", "Cauchy1813", 37, 1, 6, 6),
    # for pairs: p, m, k are the expected construction and expected is b
    Golden("pair", "Prop6.11", 2, 6, 7, 3),
    Golden("pair", "Prop6.11", 2, 20, 13981, 5),
    Golden("pair", "Prop6.11", 2, 18, 9709, 9),
)
# fmt: on


@dataclass(frozen=True)
class Outcome:
    kind: str
    rule: str
    p: int
    m: int
    k: int
    expected: int
    observed: int | None
    passed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "rule": self.rule,
            "p": self.p,
            "m": self.m,
            "k": str(self.k),
            "expected": self.expected,
            "observed": self.observed,
            "passed": self.passed,
            "note": self.note,
        }


_BFS_MEMO: dict[tuple[int, int, int], int] = {}


def _bfs_value(p: int, m: int, k: int, threads: int = 1) -> int:
    key = (p, m, k)
    if key not in _BFS_MEMO:
        _BFS_MEMO[key] = waring_number_bfs(gp_graph(p, m, k), threads=threads).g
    return _BFS_MEMO[key]


def _check_golden(row: Golden, threads: int) -> Outcome:
    if row.kind == "g":
        g = _bfs_value(row.p, row.m, row.k, threads)
        preds = {(e.rule, e.value) for e in predict_exact(row.p, row.m, row.k)}
        cited = (row.rule, row.expected) in preds
        ok = g == row.expected and cited
        note = "" if cited else f"rule {row.rule} did not fire"
        return Outcome(row.kind, row.rule, row.p, row.m, row.k, row.expected, g, ok, note)
    if row.kind in ("lower", "upper"):
        rep = bounds(row.p, row.m, row.k)
        entries = rep.lower if row.kind == "lower" else rep.upper
        vals = [b.integer for b in entries if b.rule == row.rule]
        got = vals[0] if vals else None
        return Outcome(row.kind, row.rule, row.p, row.m, row.k, row.expected, got, got == row.expected)
    if row.kind == "pair":
        b = row.expected
        pair = waring_pair_for_b(b, row.p)
        ok = (pair.k, pair.p, pair.m) == (row.k, row.p, row.m)
        g = _bfs_value(pair.p, pair.m, pair.k, threads) if ok else None
        return Outcome(row.kind, row.rule, pair.p, pair.m, pair.k, b, g, ok and g == b)
    raise ValueError(row.kind)


def run_golden_suite(rule: str | None = None, threads: int = 1) -> list[Outcome]:
    rows = [r for r in GOLDEN if rule is None or r.rule == rule]
    return [_check_golden(r, threads) for r in rows]


def prime_powers(limit: int) -> Iterator[tuple[int, int]]:
    """(p, m) with p^m <= limit, ordered by p^m."""
    out = []
    for p in range(2, limit + 1):
        if is_prime(p):
            q, m = p, 1
            while q <= limit:
                out.append((q, p, m))
                q, m = q * p, m + 1
    for _, p, m in sorted(out):
        yield p, m


def oracle_case(p: int, m: int, k: int) -> Outcome:
    """Compare BFS, the all-pairs oracle, the arithmetic connectivity test and every prediction."""
    spec = gp_graph(p, m, k)
    ecc, from_zero = _all_pairs(spec)
    connected = connectivity(spec).connected
    if connected != from_zero:
        return Outcome("oracle", "connectivity", p, m, k, int(connected), int(from_zero), False)
    if not connected:
        return Outcome("oracle", "connectivity", p, m, k, 0, 0, True)
    diam = int(ecc.max())
    g = waring_number_bfs(spec).g
    bad = [e.rule for e in predict_exact(p, m, k) if e.value != diam]
    radius = int(ecc.min())
    ok = g == diam and radius == diam and not bad
    note = ",".join(bad) if bad else ""
    return Outcome("oracle", "diameter", p, m, k, diam, g, ok, note)


def run_oracle_suite(max_q: int = 2048, rule: str | None = None) -> list[Outcome]:
    out = []
    for p, m in prime_powers(max_q):
        for k in divisors(p**m - 1):
            if rule is not None and rule not in {e.rule for e in predict_exact(p, m, k)}:
                continue
            out.append(oracle_case(p, m, k))
    return out


def first_failure(outcomes: list[Outcome]) -> Outcome | None:
    return next((o for o in outcomes if not o.passed), None)


__all__ = [
    "GOLDEN",
    "Golden",
    "Outcome",
    "first_failure",
    "oracle_case",
    "prime_powers",
    "run_oracle_suite",
    "run_golden_suite",
]
