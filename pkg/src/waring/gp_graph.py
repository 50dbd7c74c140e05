"""Generalized Paley graphs Cay(F_q, R_k) and their diameters.

The Waring number g(k, q), when it exists, is the eccentricity of 0 in the
Cayley graph whose connection set is the group R_k of nonzero k-th powers.
``waring_number_bfs`` grows the sumsets R_k, R_k + R_k, ... from 0 over a flat
boolean array of length q. ``diameter_all_pairs_oracle`` is an independent,
deliberately naive check that runs a breadth-first search from every vertex
over the explicit edge list.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from waring.errors import (
    Disconnected,
    OracleCapExceeded,
    SizeCapExceeded,
    WaringError,
    WorkCapExceeded,
)
from waring.finite_field import DEFAULT_SIZE_CAP, FieldContext, build_field, kth_power_subgroup
from waring.number_theory import divisors

DEFAULT_BFS_CAP = 1 << 22
DEFAULT_WORK_CAP = 4 * 10**10
ORACLE_CAP = 1 << 12
# The transform path works in float64; above this size rounding could blur the 0.5 threshold.
DENSE_CAP = 1 << 22
_DENSE_WEIGHT = 6
_SCALAR_WORK = 256
_SCAN_BLOCK = 1 << 21


@dataclass(frozen=True)
class GpGraphSpec:
    """Gamma(k, q) with k already reduced to gcd(k_raw, q-1)."""

    ctx: FieldContext
    k_raw: int
    k: int
    n: int
    r_set: np.ndarray = field(repr=False, compare=False)
    undirected: bool

    @property
    def q(self) -> int:
        return self.ctx.q

    @classmethod
    def build(cls, ctx: FieldContext, k_raw: int) -> "GpGraphSpec":
        if k_raw < 1:
            raise WaringError("k must be a positive integer")
        k = math.gcd(k_raw, ctx.q - 1)
        r_set = kth_power_subgroup(ctx, k)
        r_set.flags.writeable = False
        n = (ctx.q - 1) // k
        undirected = ctx.p == 2 or ((ctx.q - 1) // 2) % k == 0
        return cls(ctx, k_raw, k, n, r_set, undirected)


def gp_graph(p: int, m: int, k: int, size_cap: int = DEFAULT_SIZE_CAP) -> GpGraphSpec:
    return GpGraphSpec.build(build_field(p, m, size_cap), k)


@dataclass(frozen=True)
class ConnectivityReport:
    connected: bool
    witness: int | None = None  # degree a of a proper subfield GF(p^a) that contains R_k


def subfield_witness(p: int, m: int, k: int) -> int | None:
    """Largest proper divisor a of m with n | p^a - 1 (n = |R_k|), or None."""
    q = p**m
    k = math.gcd(k, q - 1)
    n = (q - 1) // k
    hits = [a for a in divisors(m) if a < m and (p**a - 1) % n == 0]
    return max(hits) if hits else None


def connectivity(spec: GpGraphSpec) -> ConnectivityReport:
    a = subfield_witness(spec.ctx.p, spec.ctx.m, spec.k)
    return ConnectivityReport(a is None, a)


def is_connected(p: int, m: int, k: int) -> bool:
    return subfield_witness(p, m, k) is None


@dataclass(frozen=True)
class WaringResult:
    """g(k, q) and how it was obtained.

    ``level_counts[i]`` is the number of elements first reached at distance
    ``i + 1``; zero itself (distance 0) is not counted.
    """

    g: int
    method: str
    witness: int | None
    level_counts: tuple[int, ...] = ()


# -- sumset search -------------------------------------------------------------


def _wht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform of a length-2^m vector."""
    out = a.astype(np.float64, copy=True)
    n, h = out.size, 1
    while h < n:
        v = out.reshape(-1, 2, h)
        x = v[:, 0, :].copy()
        v[:, 0, :] += v[:, 1, :]
        v[:, 1, :] = x - v[:, 1, :]
        h *= 2
    return out


class _Expander:
    """Computes S + R_k for index sets S, by direct scanning or by group convolution."""

    def __init__(self, spec: GpGraphSpec, threads: int = 1):
        self.spec = spec
        self.ctx = spec.ctx
        self.threads = max(1, threads)
        self._r_hat = None

    # scanning: visit every (s, r) pair
    def scan(self, frontier: np.ndarray) -> np.ndarray:
        ctx, r_set = self.ctx, self.spec.r_set
        hit = np.zeros(ctx.q, dtype=bool)
        rows = max(1, _SCAN_BLOCK // max(1, frontier.size))
        blocks = [r_set[i : i + rows] for i in range(0, r_set.size, rows)]

        def expand(block):
            return ctx.add_vec(frontier[None, :], block[:, None]).ravel()

        if self.threads > 1 and len(blocks) > 1:
            with ThreadPoolExecutor(self.threads) as pool:
                for cand in pool.map(expand, blocks):
                    hit[cand] = True
        else:
            for block in blocks:
                hit[expand(block)] = True
        return hit

    # convolution over the additive group (Z/p)^m
    def dense(self, frontier: np.ndarray) -> np.ndarray:
        ctx = self.ctx
        ind = np.zeros(ctx.q, dtype=np.float64)
        ind[frontier] = 1.0
        if ctx.p == 2:
            if self._r_hat is None:
                r_ind = np.zeros(ctx.q)
                r_ind[self.spec.r_set] = 1.0
                self._r_hat = _wht(r_ind)
            conv = _wht(_wht(ind) * self._r_hat) / ctx.q
        else:
            shape = (ctx.p,) * ctx.m
            if self._r_hat is None:
                r_ind = np.zeros(ctx.q)
                r_ind[self.spec.r_set] = 1.0
                self._r_hat = np.fft.rfftn(r_ind.reshape(shape))
            axes = tuple(range(ctx.m))
            conv = np.fft.irfftn(np.fft.rfftn(ind.reshape(shape)) * self._r_hat, s=shape, axes=axes).ravel()
        return conv > 0.5

    def dense_cost(self) -> int:
        q = self.ctx.q
        return _DENSE_WEIGHT * q * max(1, q.bit_length())


@dataclass
class _Levels:
    dist: np.ndarray
    counts: list[int]
    last: np.ndarray
    complete: bool


def _scalar_level(frontier, r_list, view, p, m, level):
    out = []
    if m == 1:
        for f in frontier:
            for r in r_list:
                v = f + r
                if v >= p:
                    v -= p
                if view[v] < 0:
                    view[v] = level
                    out.append(v)
    else:
        for f in frontier:
            for r in r_list:
                v = f ^ r
                if view[v] < 0:
                    view[v] = level
                    out.append(v)
    return out


def _grow(spec: GpGraphSpec, work_cap: int, threads: int, strategy: str, stop_when_disconnected: bool = True):
    if strategy not in ("auto", "scan", "dense"):
        raise WaringError(f"unknown strategy {strategy!r}")
    q = spec.q
    # dist and its memoryview share storage, so scalar levels avoid numpy call overhead
    buf = bytearray(4 * q)
    dist = np.frombuffer(buf, dtype=np.int32)
    dist[:] = -1
    dist[0] = 0
    view = memoryview(buf).cast("i")
    frontier = np.asarray(spec.r_set, dtype=np.int64)
    dist[frontier] = 1
    counts = [int(frontier.size)]
    covered = 1 + frontier.size
    exp = _Expander(spec, threads)
    p = spec.ctx.p
    scalar_ok = spec.ctx.m == 1 or p == 2
    r_list = [int(r) for r in spec.r_set] if scalar_ok else []
    work = 0
    level = 1
    while covered < q:
        scan_cost = frontier.size * spec.n
        if scalar_ok and scan_cost <= _SCALAR_WORK and strategy == "auto":
            work += scan_cost
            if work > work_cap:
                raise WorkCapExceeded(work, work_cap)
            nxt = _scalar_level(frontier.tolist(), r_list, view, p, spec.ctx.m, level + 1)
            if not nxt:
                return _Levels(dist, counts, frontier, False)
            level += 1
            counts.append(len(nxt))
            covered += len(nxt)
            frontier = np.array(sorted(nxt), dtype=np.int64)
            continue
        dense_ok = q <= DENSE_CAP
        if strategy == "dense" and dense_ok:
            use_dense = True
        elif strategy == "auto" and dense_ok:
            use_dense = exp.dense_cost() < scan_cost
        else:
            use_dense = False
        work += exp.dense_cost() if use_dense else scan_cost
        if work > work_cap:
            raise WorkCapExceeded(work, work_cap)
        hit = exp.dense(frontier) if use_dense else exp.scan(frontier)
        hit &= dist < 0
        nxt = np.flatnonzero(hit)
        if nxt.size == 0:
            return _Levels(dist, counts, frontier, False)
        level += 1
        dist[nxt] = level
        counts.append(int(nxt.size))
        covered += nxt.size
        frontier = nxt
    return _Levels(dist, counts, frontier, True)


def _check_size(spec: GpGraphSpec, size_cap: int):
    if spec.q > size_cap:
        raise SizeCapExceeded(spec.q, size_cap)


def _require_connected(spec: GpGraphSpec):
    rep = connectivity(spec)
    if not rep.connected:
        raise Disconnected(spec.k, spec.q, rep.witness)


def waring_number_bfs(
    spec: GpGraphSpec,
    size_cap: int = DEFAULT_BFS_CAP,
    *,
    work_cap: int = DEFAULT_WORK_CAP,
    threads: int = 1,
    strategy: str = "auto",
) -> WaringResult:
    """g(k, q) as the number of sumset levels needed to cover the nonzero elements.

    Distances are out-distances from 0, so the answer is right whether or not
    R_k is closed under negation. The witness is the least element on the
    last level.
    """
    _check_size(spec, size_cap)
    _require_connected(spec)
    lv = _grow(spec, work_cap, threads, strategy)
    if not lv.complete:  # pragma: no cover - arithmetic test already passed
        raise Disconnected(spec.k, spec.q)
    return WaringResult(len(lv.counts), "bfs", int(lv.last[0]), tuple(lv.counts))


def distances_from_zero(spec: GpGraphSpec, size_cap: int = DEFAULT_BFS_CAP, **kw) -> np.ndarray:
    """Array of d(0, c) for every element index c."""
    _check_size(spec, size_cap)
    _require_connected(spec)
    return _grow(spec, kw.get("work_cap", DEFAULT_WORK_CAP), kw.get("threads", 1), kw.get("strategy", "auto")).dist


def distance_from_zero(spec: GpGraphSpec, c: int, size_cap: int = DEFAULT_BFS_CAP) -> int:
    """Least s such that c is a sum of s nonzero k-th powers."""
    spec.ctx.check(c)
    if c == 0:
        return 0
    return int(distances_from_zero(spec, size_cap)[c])


def waring_number(spec: GpGraphSpec, size_cap: int = DEFAULT_BFS_CAP, **kw) -> WaringResult:
    """BFS when the field fits under ``size_cap``, otherwise the first matching closed form."""
    _require_connected(spec)
    if spec.q <= size_cap:
        return waring_number_bfs(spec, size_cap, **kw)
    from waring.formulas import predict_exact

    preds = predict_exact(spec.ctx.p, spec.ctx.m, spec.k)
    if not preds:
        raise SizeCapExceeded(spec.q, size_cap)
    return WaringResult(preds[0].value, f"formula:{preds[0].rule}", None, ())


# -- all-pairs oracle ----------------------------------------------------------


@lru_cache(maxsize=2)
def _addition_table(ctx: FieldContext) -> np.ndarray:
    """Read-only q x q table of u + v built from per-element coefficient vectors."""
    q, p = ctx.q, ctx.p
    digits = np.array([ctx.coeffs(u) for u in range(q)], dtype=np.int64).reshape(q, ctx.m)
    weights = np.array([p**j for j in range(ctx.m)], dtype=np.int64)
    table = np.zeros((q, q), dtype=np.int32)
    for j in range(ctx.m):
        table += (((digits[:, None, j] + digits[None, :, j]) % p) * weights[j]).astype(np.int32)
    table.flags.writeable = False
    return table


def _all_pairs(spec: GpGraphSpec):
    """Eccentricity of every vertex (-1 where some vertex is unreachable)."""
    ctx = spec.ctx
    q = ctx.q
    if q > ORACLE_CAP:
        raise OracleCapExceeded(q, ORACLE_CAP)
    table = _addition_table(ctx)
    conn = [int(r) for r in spec.r_set]
    # v is reached from u in one step iff v - r = u for some r in the connection set
    neg = [int(np.flatnonzero(table[r] == 0)[0]) for r in conn]
    back = np.stack([table[:, s] for s in neg])  # back[i, v] = v - r_i
    words = (q + 63) // 64
    src = np.arange(q)
    reach = np.zeros((q, words), dtype=np.uint64)
    reach[src, src // 64] = np.left_shift(np.uint64(1), (src % 64).astype(np.uint64))
    frontier = reach.copy()
    ecc = np.zeros(q, dtype=np.int64)
    chunk = max(1, (1 << 22) // (q * words))
    level = 0
    while True:
        nxt = np.zeros_like(reach)
        for i in range(0, len(conn), chunk):
            nxt |= np.bitwise_or.reduce(frontier[back[i : i + chunk]], axis=0)
        nxt &= ~reach
        active = np.bitwise_or.reduce(nxt, axis=0)
        if not active.any():
            break
        level += 1
        reach |= nxt
        bits = np.unpackbits(active.view(np.uint8), bitorder="little")[:q].astype(bool)
        ecc[bits] = level
        frontier = nxt
    full = np.bitwise_and.reduce(reach, axis=0)
    covered = np.unpackbits(full.view(np.uint8), bitorder="little")[:q].astype(bool)
    complete = np.unpackbits(reach.view(np.uint8), axis=1, bitorder="little")[:, :q].astype(bool)
    ecc[~covered] = -1
    from_zero = bool(complete[:, 0].all())
    return ecc, from_zero


def eccentricities(spec: GpGraphSpec) -> np.ndarray:
    ecc, _ = _all_pairs(spec)
    if (ecc < 0).any():
        raise Disconnected(spec.k, spec.q)
    return ecc


def reaches_all_from_zero(spec: GpGraphSpec) -> bool:
    """Whether every vertex is reachable from 0, by explicit search."""
    return _all_pairs(spec)[1]


def diameter_all_pairs_oracle(spec: GpGraphSpec) -> int:
    """Maximum eccentricity over all vertices by brute force."""
    return int(eccentricities(spec).max())
