"""Certification reports: named clauses with pass/fail and witnesses."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Clause:
    name: str
    passed: bool
    witness: str | None = None

    def as_dict(self):
        d = {"name": self.name, "pass": self.passed}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class CertReport:
    title: str
    clauses: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, name, passed, witness=None):
        self.clauses.append(Clause(name, bool(passed), witness))
        return passed

    def note(self, text):
        self.notes.append(text)

    @property
    def passed(self):
        return all(c.passed for c in self.clauses)

    def failed_clauses(self):
        return [c for c in self.clauses if not c.passed]

    def as_dict(self):
        d = {
            "title": self.title,
            "pass": self.passed,
            "clauses": [c.as_dict() for c in self.clauses],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self, **kw):
        return json.dumps(self.as_dict(), sort_keys=True, **kw)

    def __str__(self):
        lines = [f"[{'PASS' if self.passed else 'FAIL'}] {self.title}"]
        for c in self.clauses:
            mark = "ok " if c.passed else "FAIL"
            w = f"  ({c.witness})" if c.witness else ""
            lines.append(f"  {mark} {c.name}{w}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)
