"""Named pass/fail results with witnesses, merged deterministically."""

from __future__ import annotations

import fnmatch
from collections.abc import Iterable
from dataclasses import dataclass, field

from .dsl import CheckResult


@dataclass
class Report:
    """Collection of named check results; passes iff every entry passes."""

    results: dict[str, CheckResult] = field(default_factory=dict)
    notes: dict[str, object] = field(default_factory=dict)

    def add(self, result: CheckResult, prefix: str = "") -> CheckResult:
        name = prefix + result.name
        if prefix:
            result = CheckResult(name, result.passed, result.witness, result.label, result.seconds)
        if name in self.results:
            raise KeyError(f"duplicate check name {name}")
        self.results[name] = result
        return result

    def flag(self, name: str, passed: bool, label: str = "", witness=None) -> CheckResult:
        return self.add(CheckResult(name, bool(passed), witness, label or name))

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for r in other.results.values():
            self.add(r, prefix)
        for k, v in other.notes.items():
            self.notes[prefix + k] = v
        return self

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __bool__(self) -> bool:
        return self.passed

    def sorted(self) -> list[CheckResult]:
        return [self.results[k] for k in sorted(self.results)]

    def failures(self) -> list[CheckResult]:
        return [r for r in self.sorted() if not r.passed]

    def first_failure(self) -> CheckResult | None:
        """Earliest failing check in the order the checks were run."""
        return next((r for r in self.results.values() if not r.passed), None)

    def __getitem__(self, name: str) -> CheckResult:
        return self.results[name]

    def __contains__(self, name: str) -> bool:
        return name in self.results

    def __len__(self) -> int:
        return len(self.results)

    def only(self, patterns: Iterable[str] | None) -> "Report":
        if not patterns:
            return self
        pats = list(patterns)
        out = Report(notes=dict(self.notes))
        for k, r in self.results.items():
            if any(fnmatch.fnmatchcase(k, p) for p in pats):
                out.results[k] = r
        return out

    def summary(self) -> str:
        bad = self.failures()
        if not bad:
            return f"{len(self)} checks passed"
        return f"{len(bad)} of {len(self)} checks failed; first: {self.first_failure().name}"
