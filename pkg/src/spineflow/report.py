"""Pass/fail reports with itemized checks.

A report never raises: it records, per named check, whether the check
passed together with a short human-readable detail line.  Malformed
*inputs* (as opposed to failing conditions) raise ``InputError`` in the
operations that build reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    """An ordered list of named checks with an overall verdict."""

    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for check in other.checks:
            self.checks.append(
                Check(prefix + check.name, check.passed, check.detail))

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [check for check in self.checks if not check.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }

    def lines(self) -> list[str]:
        out = []
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            suffix = f" ({c.detail})" if c.detail else ""
            out.append(f"{c.name}: {status}{suffix}")
        out.append("overall: " + ("pass" if self.passed else "FAIL"))
        return out
