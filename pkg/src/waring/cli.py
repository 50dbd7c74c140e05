"""``waring`` command-line interface.

Exit codes: 0 success, 1 usage or resource error, 2 the Waring number does
not exist (disconnected graph), 3 a verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time

from waring import __version__
from waring.cache import ResultCache, ResultRecord
from waring.errors import Disconnected, WaringError
from waring.formulas import bounds, predict_exact, waring_pair_for_b
from waring.gp_graph import DEFAULT_BFS_CAP, connectivity, gp_graph, subfield_witness, waring_number
from waring.finite_field import DEFAULT_SIZE_CAP
from waring.number_theory import divisors
from waring.suites import run_oracle_suite, run_golden_suite

EXIT_OK, EXIT_USAGE, EXIT_DISCONNECTED, EXIT_MISMATCH = 0, 1, 2, 3
HARD_CAP = DEFAULT_SIZE_CAP
ORACLE_DEFAULT_Q = 2048


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _common(sp: argparse.ArgumentParser, *, pmk: bool = True) -> None:
    if pmk:
        sp.add_argument("-p", type=int, required=True, help="characteristic (prime)")
        sp.add_argument("-m", type=int, default=1, help="extension degree (default 1)")
        sp.add_argument("-k", type=int, required=True, help="exponent k")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="waring", description="Waring numbers over finite fields via generalized Paley graphs.")
    ap.add_argument("--version", action="version", version=f"waring {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("compute", help="g(k, p^m) by breadth-first search")
    _common(sp)
    sp.add_argument("--cache", default=None, help="CSV cache path (default $WARING_CACHE)")
    sp.add_argument("--max-q", type=int, default=DEFAULT_BFS_CAP)
    sp.add_argument("--detail", action="store_true", help="include witness and level counts (skips the cache)")
    sp.add_argument("--timing", action="store_true", help="report wall time on stderr")

    sp = sub.add_parser("predict", help="closed-form values whose hypotheses hold")
    _common(sp)
    sp.add_argument("--filter", default=None, metavar="RULE")

    sp = sub.add_parser("bounds", help="applicable lower and upper bounds")
    _common(sp)

    sp = sub.add_parser("verify", help="replay golden values or sweep against the oracle")
    _common(sp, pmk=False)
    sp.add_argument("--suite", choices=("paper", "oracle"), required=True)
    sp.add_argument("--filter", default=None, metavar="RULE")
    sp.add_argument("--max-q", type=int, default=ORACLE_DEFAULT_Q)

    sp = sub.add_parser("search-pair", help="a pair (k, q) with g(k, q) = b")
    _common(sp, pmk=False)
    sp.add_argument("-b", type=int, required=True)
    sp.add_argument("-p", type=int, default=None)

    sp = sub.add_parser("table", help="one row per divisor k of p^m - 1")
    _common(sp, pmk=False)
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-m", type=int, default=1)
    sp.add_argument("--max-q", type=int, default=DEFAULT_BFS_CAP)
    sp.add_argument("--filter", default=None, metavar="RULE")
    return ap


# -- output ----------------------------------------------------------------------


def _emit(fmt: str, query: dict, result, provenance: dict, rows: list[dict] | None = None) -> None:
    if fmt == "json":
        obj = {"query": query, "result": result, "provenance": provenance}
        sys.stdout.write(json.dumps(obj, indent=2) + "\n")
        return
    if rows is None:
        rows = [result] if isinstance(result, dict) else list(result)
    buf = io.StringIO()
    if rows:
        cols = list(rows[0].keys())
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({c: _csv_cell(r.get(c)) for c in cols})
    sys.stdout.write(buf.getvalue())


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ";".join(str(x) for x in v)
    return v


def _provenance(**extra) -> dict:
    return {"tool": "waring", "tool_version": __version__, **extra}


def _check_cap(q_exp: tuple[int, int], cap: int) -> None:
    if cap > HARD_CAP:
        raise WaringError(f"--max-q {cap} exceeds the hard cap {HARD_CAP}")
    p, m = q_exp
    if m > 0 and m * math.log2(max(p, 2)) > 64:
        raise WaringError(f"q = {p}^{m} is beyond any supported size")
    if p**m > cap:
        raise WaringError(f"q = {p**m} exceeds the size cap {cap}; raise --max-q (hard cap {HARD_CAP})")


# -- commands ------------------------------------------------------------------------


def _disconnect_message(k: int, p: int, m: int, a: int | None) -> str:
    q = p**m
    n = (q - 1) // k
    sub = f"F_{p}" if a == 1 else f"F_{p}^{a}"
    return (
        f"disconnected: R_{k} is contained in {sub} "
        f"(n = (q-1)/k = {n} divides p^{a} - 1 = {p**a - 1}); g({k}, {q}) does not exist"
    )


def cmd_compute(args) -> int:
    p, m, k_raw = args.p, args.m, args.k
    query = {"command": "compute", "p": p, "m": m, "k": str(k_raw)}
    _check_cap((p, m), args.max_q)
    cache_path = args.cache or os.environ.get("WARING_CACHE")
    cache = ResultCache(cache_path) if cache_path and not args.detail else None
    t0 = time.perf_counter()
    rec = cache.lookup(p, m, k_raw, __version__) if cache else None
    detail = {}
    if rec is None:
        spec = gp_graph(p, m, k_raw, size_cap=args.max_q)
        rep = connectivity(spec)
        if rep.connected:
            res = waring_number(spec, size_cap=args.max_q, threads=args.threads)
            g, method = res.g, res.method
            detail = {"witness": res.witness, "level_counts": list(res.level_counts)}
        else:
            g, method = None, "connectivity"
            detail = {"subfield_degree": rep.witness}
        ms = int((time.perf_counter() - t0) * 1000)
        rec = ResultRecord(p, m, k_raw, spec.k, g, method, rep.connected, __version__, ms)
        if cache:
            cache.append(rec)
        if args.timing:
            print(f"wall_time_ms={ms}", file=sys.stderr)
    elif args.timing:
        print("wall_time_ms=0 (cache hit)", file=sys.stderr)
    result = {
        "p": rec.p,
        "m": rec.m,
        "q": str(rec.p**rec.m),
        "k_raw": str(rec.k_raw),
        "k": str(rec.k),
        "connected": rec.connected,
        "g": rec.g,
        "method": rec.method,
    }
    if args.detail:
        result.update(detail)
    _emit(args.format, query, result, _provenance())
    if not rec.connected:
        sub = detail.get("subfield_degree")
        if sub is None:
            sub = subfield_witness(p, m, rec.k)
        print(_disconnect_message(rec.k, p, m, sub), file=sys.stderr)
        return EXIT_DISCONNECTED
    return EXIT_OK


def cmd_predict(args) -> int:
    query = {"command": "predict", "p": args.p, "m": args.m, "k": str(args.k)}
    preds = predict_exact(args.p, args.m, args.k)
    if args.filter:
        preds = [e for e in preds if e.rule == args.filter]
    rows = [e.to_dict() for e in preds]
    csv_rows = [{"rule": e.rule, "value": e.value, "k": str(e.k), "q": str(e.q)} for e in preds]
    _emit(args.format, query, rows, _provenance(), csv_rows)
    return EXIT_OK


def cmd_bounds(args) -> int:
    query = {"command": "bounds", "p": args.p, "m": args.m, "k": str(args.k)}
    rep = bounds(args.p, args.m, args.k)
    csv_rows = [{"side": "lower", **b.to_dict()} for b in rep.lower]
    csv_rows += [{"side": "upper", **b.to_dict()} for b in rep.upper]
    _emit(args.format, query, rep.to_dict(), _provenance(), csv_rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    query = {"command": "verify", "suite": args.suite, "filter": args.filter}
    if args.suite == "paper":
        outcomes = run_golden_suite(args.filter, threads=args.threads)
    else:
        _check_cap((args.max_q, 1), 1 << 12)
        query["max_q"] = args.max_q
        outcomes = run_oracle_suite(args.max_q, args.filter)
    rows = [o.to_dict() for o in outcomes]
    failed = [r for r in rows if not r["passed"]]
    result = {"total": len(rows), "passed": len(rows) - len(failed), "failed": len(failed), "rows": rows}
    _emit(args.format, query, result, _provenance(), rows)
    for r in failed:
        print(f"MISMATCH {r['kind']} {r['rule']} (p={r['p']}, m={r['m']}, k={r['k']}): "
              f"expected {r['expected']}, observed {r['observed']} {r['note']}".rstrip(), file=sys.stderr)
    return EXIT_MISMATCH if failed else EXIT_OK


def cmd_search_pair(args) -> int:
    query = {"command": "search-pair", "b": args.b, "p": args.p}
    pair = waring_pair_for_b(args.b, args.p)
    result = {"b": args.b, "k": str(pair.k), "p": pair.p, "m": pair.m, "q": str(pair.p**pair.m)}
    _emit(args.format, query, result, _provenance(rule="Prop6.11"))
    return EXIT_OK


def cmd_table(args) -> int:
    p, m = args.p, args.m
    query = {"command": "table", "p": p, "m": m}
    if args.max_q > HARD_CAP:
        raise WaringError(f"--max-q {args.max_q} exceeds the hard cap {HARD_CAP}")
    q = p**m
    rows = []
    for k in divisors(q - 1):
        preds = predict_exact(p, m, k)
        if args.filter and args.filter not in {e.rule for e in preds}:
            continue
        row = {"k": str(k), "n": str((q - 1) // k), "connected": False, "g": None, "method": None,
               "rules": [e.rule for e in preds], "best_lower": None, "best_upper": None}
        try:
            rep = bounds(p, m, k)
        except Disconnected:
            rows.append(row)
            continue
        row.update(connected=True, best_lower=rep.best_lower, best_upper=rep.best_upper)
        if q <= args.max_q:
            res = waring_number(gp_graph(p, m, k, size_cap=args.max_q), size_cap=args.max_q, threads=args.threads)
            row.update(g=res.g, method=res.method)
        elif preds:
            row.update(g=preds[0].value, method=f"formula:{preds[0].rule}")
        rows.append(row)
    _emit(args.format, query, rows, _provenance(), rows)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "predict": cmd_predict,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "search-pair": cmd_search_pair,
    "table": cmd_table,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except Disconnected as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DISCONNECTED
    except (WaringError, OverflowError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
