"""Machine-readable check reports shared by every verification routine."""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any

FORMAT_VERSION = 1


class Status(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNTESTED = "untested"


@dataclass(frozen=True)
class Record:
    check: str
    status: Status
    witness: Any = None
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status is not Status.FAIL

    def to_dict(self) -> dict:
        out = {"check": self.check, "status": self.status.value}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.detail:
            out["detail"] = self.detail
        return out


def _plain(obj):
    # witnesses may hold Paths, tuples, frozensets; flatten to JSON-able values
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((_plain(x) for x in obj), key=str)
    return str(obj)


@dataclass
class Report:
    name: str
    records: list[Record] = field(default_factory=list)

    def add(self, check: str, status: Status | bool, witness=None, detail: str = "") -> Record:
        if isinstance(status, bool):
            status = Status.PASS if status else Status.FAIL
        rec = Record(check, status, witness, detail)
        self.records.append(rec)
        return rec

    def extend(self, other: "Report", prefix: str = "") -> None:
        for r in other.records:
            self.records.append(Record(prefix + r.check, r.status, r.witness, r.detail))

    @property
    def passed(self) -> bool:
        """No failures (untested records do not count against the report)."""
        return all(r.ok for r in self.records)

    @property
    def failures(self) -> list[Record]:
        return [r for r in self.records if r.status is Status.FAIL]

    @property
    def untested(self) -> list[Record]:
        return [r for r in self.records if r.status is Status.UNTESTED]

    def __getitem__(self, check: str) -> Record:
        for r in self.records:
            if r.check == check:
                return r
        raise KeyError(check)

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_VERSION,
            "report": self.name,
            "passed": self.passed,
            "records": [r.to_dict() for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def render(self, full: bool = False) -> str:
        width = max([len(r.check) for r in self.records] + [5])
        lines = [f"== {self.name} =="]
        for r in self.records:
            line = f"  {r.check:<{width}}  {r.status.value:<8}"
            if r.detail:
                line += f"  {r.detail}"
            lines.append(line)
            if r.witness is not None and (full or r.status is Status.FAIL):
                lines.append(f"  {'':<{width}}  witness: {_plain(r.witness)}")
        n_fail, n_un = len(self.failures), len(self.untested)
        lines.append(f"  -- {len(self.records)} checks, {n_fail} failed, {n_un} untested")
        return "\n".join(lines)


class Tally:
    """Aggregate many instances of one identity into a single record."""

    def __init__(self, check: str):
        self.check = check
        self.n_pass = 0
        self.first_failure = None
        self.n_fail = 0
        self.boundary: list = []

    def ok(self) -> None:
        self.n_pass += 1

    def fail(self, witness) -> None:
        self.n_fail += 1
        if self.first_failure is None:
            self.first_failure = witness

    def record(self, cond: bool, witness) -> None:
        if cond:
            self.ok()
        else:
            self.fail(witness)

    def skip(self, case) -> None:
        self.boundary.append(case)

    def into(self, report: Report) -> None:
        if self.n_fail:
            report.add(self.check, Status.FAIL, self.first_failure,
                       f"{self.n_fail} of {self.n_fail + self.n_pass} instances failed")
        elif self.n_pass or not self.boundary:
            report.add(self.check, Status.PASS, None, f"{self.n_pass} instances")
        if self.boundary:
            report.add(self.check + " [boundary]", Status.UNTESTED, self.boundary[:20],
                       f"{len(self.boundary)} cases outside the window interior")
