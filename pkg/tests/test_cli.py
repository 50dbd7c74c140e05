import csv
import io
import json
import multiprocessing as mp
import os
import subprocess
import sys

import pytest

from waring import __version__
from waring.cache import HEADER, ResultCache, ResultRecord
from waring.cli import EXIT_DISCONNECTED, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_compute_example(capsys):
    code, obj, _ = run_json(capsys, "compute", "-p", "2", "-m", "12", "-k", "91")
    assert code == EXIT_OK
    assert obj["result"]["g"] == 3 and obj["result"]["method"] == "bfs"
    assert obj["query"]["k"] == "91" and obj["result"]["q"] == "4096"
    assert obj["provenance"]["tool_version"] == __version__


def test_compute_normalizes_k(capsys):
    _, obj, _ = run_json(capsys, "compute", "-p", "7", "-k", "9")
    assert obj["result"]["k_raw"] == "9" and obj["result"]["k"] == "3" and obj["result"]["g"] == 3


def test_compute_disconnected(capsys):
    code, out, err = run(capsys, "compute", "-p", "3", "-m", "2", "-k", "4")
    assert code == EXIT_DISCONNECTED
    assert json.loads(out)["result"]["g"] is None
    assert "disconnected: R_4 is contained in F_3" in err


def test_compute_detail_and_timing(capsys):
    code, obj, err = run_json(capsys, "compute", "-p", "2", "-m", "6", "-k", "7", "--detail", "--timing")
    assert code == EXIT_OK
    assert obj["result"]["level_counts"] == [9, 27, 27] and obj["result"]["witness"] == 2
    assert "wall_time_ms=" in err
    assert "wall_time" not in json.dumps(obj)


def test_usage_errors(capsys):
    assert run(capsys, "compute", "-p", "2")[0] == EXIT_USAGE
    assert run(capsys, "nonsense")[0] == EXIT_USAGE
    assert run(capsys, "compute", "-p", "9", "-k", "2")[0] == EXIT_USAGE  # not prime
    assert run(capsys, "compute", "-p", "2", "-m", "23", "-k", "1")[0] == EXIT_USAGE  # above default cap
    code, _, err = run(capsys, "compute", "-p", "2", "-m", "12", "-k", "1", "--max-q", str(1 << 40))
    assert code == EXIT_USAGE and "hard cap" in err
    assert run(capsys, "compute", "-p", "2", "-m", "100", "-k", "1")[0] == EXIT_USAGE
    assert run(capsys, "search-pair", "-b", "6", "-p", "3")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--suite", "oracle", "--max-q", "100000")[0] == EXIT_USAGE


def test_compute_cache_round_trip(capsys, tmp_path):
    path = tmp_path / "cache.csv"
    argv = ["compute", "-p", "2", "-m", "6", "-k", "14", "--cache", str(path)]
    c1, o1, _ = run(capsys, *argv)
    c2, o2, err = run(capsys, *argv, "--timing")
    assert c1 == c2 == EXIT_OK and o1 == o2
    assert "cache hit" in err
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(HEADER) and len(lines) == 2
    rec = ResultCache(path).lookup(2, 6, 14, __version__)
    assert rec.k == 7 and rec.g == 3 and rec.connected


def test_cache_env_variable_and_disconnected_record(capsys, tmp_path, monkeypatch):
    path = tmp_path / "env.csv"
    monkeypatch.setenv("WARING_CACHE", str(path))
    assert run(capsys, "compute", "-p", "3", "-m", "2", "-k", "4")[0] == EXIT_DISCONNECTED
    code, _, err = run(capsys, "compute", "-p", "3", "-m", "2", "-k", "4")
    assert code == EXIT_DISCONNECTED and "F_3" in err
    (rec,) = ResultCache(path).records()
    assert rec.g is None and not rec.connected


def test_cache_ignores_other_versions(tmp_path):
    cache = ResultCache(tmp_path / "c.csv")
    cache.append(ResultRecord(7, 1, 3, 3, 3, "bfs", True, "0.0.0"))
    assert cache.lookup(7, 1, 3, __version__) is None
    assert cache.lookup(7, 1, 3, "0.0.0").g == 3


def _writer(path, start):
    cache = ResultCache(path)
    for i in range(start, start + 200):
        cache.append(ResultRecord(2, 1, i, 1, 1, "bfs-" + "x" * 300, True, __version__))


def test_concurrent_appends_do_not_interleave(tmp_path):
    path = str(tmp_path / "shared.csv")
    ctx = mp.get_context("fork")
    procs = [ctx.Process(target=_writer, args=(path, 1000 * j)) for j in range(6)]
    for pr in procs:
        pr.start()
    for pr in procs:
        pr.join()
        assert pr.exitcode == 0
    text = open(path).read()
    assert text.count(",".join(HEADER)) == 1
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 1200
    assert len({r["k_raw"] for r in rows}) == 1200
    assert all(len(r) == len(HEADER) and r["tool_version"] == __version__ for r in rows)


def test_predict_and_filter(capsys):
    code, obj, _ = run_json(capsys, "predict", "-p", "2", "-m", "18", "-k", "9709")
    assert code == EXIT_OK
    assert {e["rule"] for e in obj["result"]} >= {"Thm4.2", "Prop6.11"}
    assert {e["value"] for e in obj["result"]} == {9}
    _, obj, _ = run_json(capsys, "predict", "-p", "2", "-m", "18", "-k", "9709", "--filter", "Prop6.11")
    assert [e["rule"] for e in obj["result"]] == ["Prop6.11"]


def test_predict_csv(capsys):
    code, out, _ = run(capsys, "predict", "-p", "7", "-k", "3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == EXIT_OK and rows
    assert all(r["value"] == "3" for r in rows)


def test_bounds_example(capsys):
    code, obj, _ = run_json(capsys, "bounds", "-p", "37", "-k", "9")
    assert code == EXIT_OK
    assert obj["result"]["best_lower"] >= 3 and obj["result"]["best_upper"] <= 9
    code, out, _ = run(capsys, "bounds", "-p", "37", "-k", "6", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["side"] for r in rows} == {"lower", "upper"}
    assert run(capsys, "bounds", "-p", "3", "-m", "2", "-k", "4")[0] == EXIT_DISCONNECTED


def test_verify_golden_filter(capsys):
    code, obj, _ = run_json(capsys, "verify", "--suite", "paper", "--filter", "Cauchy1813")
    assert code == EXIT_OK
    res = obj["result"]
    assert res["total"] >= 1 and res["failed"] == 0
    assert all(r["rule"] == "Cauchy1813" for r in res["rows"])


def test_verify_oracle_small(capsys):
    code, obj, _ = run_json(capsys, "verify", "--suite", "oracle", "--max-q", "128")
    assert code == EXIT_OK
    assert obj["result"]["failed"] == 0 and obj["result"]["total"] > 50


def test_verify_mismatch_exit_code(capsys, monkeypatch):
    from waring import cli
    from waring.suites import Outcome

    def bad(*a, **kw):
        return [Outcome("g", "Fake", 7, 1, 3, 4, 3, False, "")]

    monkeypatch.setattr(cli, "run_golden_suite", bad)
    code, _, err = run(capsys, "verify", "--suite", "paper")
    assert code == EXIT_MISMATCH and "MISMATCH" in err and "p=7" in err


def test_search_pair(capsys):
    code, obj, _ = run_json(capsys, "search-pair", "-b", "9")
    assert code == EXIT_OK
    assert obj["result"] == {"b": 9, "k": "9709", "p": 2, "m": 18, "q": str(2**18)}
    _, obj, _ = run_json(capsys, "search-pair", "-b", "4", "-p", "5")
    assert (obj["result"]["k"], obj["result"]["m"]) == ("39", 4)


def test_big_integers_are_strings(capsys):
    _, obj, _ = run_json(capsys, "search-pair", "-b", "40")
    assert isinstance(obj["result"]["k"], str) and int(obj["result"]["k"]) > 2**53


def test_table(capsys):
    code, obj, _ = run_json(capsys, "table", "-p", "3", "-m", "2")
    assert code == EXIT_OK
    rows = {r["k"]: r for r in obj["result"]}
    assert set(rows) == {"1", "2", "4", "8"}
    assert rows["2"]["g"] == 2 and rows["4"]["connected"] is False
    code, out, _ = run(capsys, "table", "-p", "7", "--filter", "Small1977-g3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["k"] for r in rows] == ["3"]


def test_json_is_deterministic(capsys):
    outs = {run(capsys, "table", "-p", "2", "-m", "8")[1] for _ in range(2)}
    assert len(outs) == 1


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "waring.cli", "compute", "-p", "7", "-k", "3"],
        capture_output=True, text=True, env={**os.environ, "WARING_CACHE": ""},
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["g"] == 3
