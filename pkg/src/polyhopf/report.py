"""Structured pass/fail reports shared by every checker.

A report is an ordered list of named results; rendering to text and to a
dict carry the same content.  Checks append results in a deterministic
order so reports are bit-stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from typing import Any


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: str = ""
    witness: Any = None

    def as_dict(self) -> dict:
        d = {"name": self.name, "passed": self.passed, "details": self.details}
        if self.witness is not None:
            d["witness"] = repr(self.witness)
        return d


@dataclass
class Report:
    title: str
    results: list[CheckResult] = dfield(default_factory=list)
    notes: list[str] = dfield(default_factory=list)

    def ok(self, name: str, details: str = "") -> None:
        self.results.append(CheckResult(name, True, details))

    def fail(self, name: str, details: str = "", witness: Any = None) -> None:
        self.results.append(CheckResult(name, False, details, witness))

    def record(self, name: str, passed: bool, details: str = "", witness: Any = None) -> None:
        self.results.append(CheckResult(name, passed, details, witness))

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: "Report", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(CheckResult(prefix + r.name, r.passed, r.details, r.witness))
        for n in other.notes:
            self.notes.append(prefix + n)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def as_text(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.passed else 'FAIL'}"]
        for r in self.results:
            mark = "ok  " if r.passed else "FAIL"
            detail = f"  {r.details}" if r.details else ""
            lines.append(f"  [{mark}] {r.name}{detail}")
            if r.witness is not None and not r.passed:
                lines.append(f"         witness: {r.witness!r}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "results": [r.as_dict() for r in self.results],
            "notes": list(self.notes),
        }
