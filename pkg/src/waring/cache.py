"""Append-only CSV store of computed Waring numbers.

Writers take an exclusive ``fcntl`` lock and emit each record as a single
line, so concurrent processes never interleave partial rows.
"""

from __future__ import annotations

import csv
import fcntl
import io
import os
from dataclasses import dataclass

HEADER = ("p", "m", "k_raw", "k", "g", "method", "connected", "tool_version")


@dataclass(frozen=True)
class ResultRecord:
    p: int
    m: int
    k_raw: int
    k: int
    g: int | None
    method: str
    connected: bool
    tool_version: str
    wall_time_ms: int = 0

    def row(self) -> list[str]:
        return [
            str(self.p),
            str(self.m),
            str(self.k_raw),
            str(self.k),
            "" if self.g is None else str(self.g),
            self.method,
            "true" if self.connected else "false",
            self.tool_version,
        ]

    @classmethod
    def from_row(cls, row: dict) -> "ResultRecord":
        return cls(
            int(row["p"]),
            int(row["m"]),
            int(row["k_raw"]),
            int(row["k"]),
            int(row["g"]) if row["g"] else None,
            row["method"],
            row["connected"] == "true",
            row["tool_version"],
        )

    def same_result(self, other: "ResultRecord") -> bool:
        return self.row() == other.row()


class ResultCache:
    def __init__(self, path: str | os.PathLike):
        self.path = os.fspath(path)

    def records(self) -> list[ResultRecord]:
        if not os.path.exists(self.path):
            return []
        with open(self.path, newline="") as fh:
            fcntl.flock(fh, fcntl.LOCK_SH)
            try:
                return [ResultRecord.from_row(r) for r in csv.DictReader(fh)]
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def lookup(self, p: int, m: int, k_raw: int, tool_version: str | None = None) -> ResultRecord | None:
        hit = None
        for rec in self.records():
            if (rec.p, rec.m, rec.k_raw) == (p, m, k_raw):
                if tool_version is None or rec.tool_version == tool_version:
                    hit = rec
        return hit

    def append(self, rec: ResultRecord) -> None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerow(rec.row())
        line = buf.getvalue()
        fd = os.open(self.path, os.O_WRONLY | os.O_CREAT | os.O_APPEND, 0o644)
        try:
            fcntl.flock(fd, fcntl.LOCK_EX)
            if os.fstat(fd).st_size == 0:
                os.write(fd, (",".join(HEADER) + "\n").encode())
            os.write(fd, line.encode())
        finally:
            fcntl.flock(fd, fcntl.LOCK_UN)
            os.close(fd)
