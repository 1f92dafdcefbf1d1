"""FubiniReport assembly and JSON-lines serialization."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .checks import CheckResult


def jsonable(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=jsonable, separators=(",", ":"))


@dataclass
class FubiniReport:
    config: dict
    instances: list = field(default_factory=list)
    tallies: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @classmethod
    def from_results(cls, config: dict, results: Iterable[CheckResult], timing: dict | None = None) -> "FubiniReport":
        rep = cls(config, timing=dict(timing or {}))
        for r in results:
            bucket = rep.tallies.setdefault(r.suite, {}).setdefault(r.check, {"pass": 0, "fail": 0, "skip": 0})
            bucket[r.status] += 1
            if r.verdict is not None:
                rep.instances.append(r.verdict)
            entry = {"suite": r.suite, "check": r.check, "key": r.key, "detail": r.detail}
            if r.status == "fail":
                rep.failures.append(entry)
            elif r.status == "skip":
                rep.skipped.append(entry)
        rep.instances.sort(key=lambda v: v["instance"])
        rep.failures.sort(key=lambda f: (f["suite"], f["check"], f["key"]))
        rep.skipped.sort(key=lambda f: (f["suite"], f["check"], f["key"]))
        return rep

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def summary(self, include_timing: bool = False) -> dict:
        out = {
            "kind": "summary",
            "config": self.config,
            "seed": self.config.get("seed"),
            "instances": len(self.instances),
            "tallies": self.tallies,
            "failures": self.failures,
            "skipped": self.skipped,
            "ok": self.ok,
        }
        if include_timing:
            out["timing"] = self.timing
        return out

    def lines(self, include_timing: bool = False) -> list[str]:
        rows = [dumps({"kind": "instance", **v}) for v in self.instances]
        rows.append(dumps(self.summary(include_timing)))
        return rows

    def dump(self, path: str, include_timing: bool = False) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.lines(include_timing):
                fh.write(row + "\n")

    def text(self) -> str:
        """One line per check with its tallies."""
        out = []
        for suite in sorted(self.tallies):
            for check in sorted(self.tallies[suite]):
                t = self.tallies[suite][check]
                state = "FAIL" if t["fail"] else "ok"
                out.append(f"{state:4} {suite}/{check}: {t['pass']} passed, {t['fail']} failed, {t['skip']} skipped")
        out.append("all checks passed" if self.ok else f"{len(self.failures)} failing checks")
        return "\n".join(out)


def load(path: str) -> tuple[list[dict], dict]:
    """Instance rows and the summary object of a report file."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rows.append(json.loads(line))
    summary = [r for r in rows if r.get("kind") == "summary"]
    if len(summary) != 1:
        raise ValueError("report must end with exactly one summary object")
    return [r for r in rows if r.get("kind") == "instance"], summary[0]
