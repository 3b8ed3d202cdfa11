"""Verification reports shared by every module and the command line."""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Entry", "Report", "PASS", "FAIL", "AT_CAP", "INCONCLUSIVE"]

PASS = "pass"
FAIL = "fail"
AT_CAP = "at-cap"
INCONCLUSIVE = "inconclusive"


@dataclass
class Entry:
    suite: str
    instance: str
    status: str
    f_order: object = None
    expected: object = None
    witness: str = ""

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "instance": self.instance,
            "status": self.status,
            "f_order": _jsonable(self.f_order),
            "expected": _jsonable(self.expected),
            "witness": self.witness,
        }


def _jsonable(x):
    if x is None or isinstance(x, (int, str)):
        return x
    if x == float("inf"):
        return "inf"
    return str(x)


@dataclass
class Report:
    suite: str
    entries: list = field(default_factory=list)

    def add(self, instance: str, status: str, f_order=None, expected=None, witness: str = "", suite: str | None = None):
        self.entries.append(Entry(suite or self.suite, instance, status, f_order, expected, witness))

    def extend(self, other: "Report") -> "Report":
        self.entries.extend(other.entries)
        return self

    def count(self, status: str) -> int:
        return sum(1 for e in self.entries if e.status == status)

    @property
    def passed(self) -> bool:
        """True iff every entry passed."""
        return all(e.status == PASS for e in self.entries)

    def ok(self, allow_at_cap: bool = False) -> bool:
        allowed = {PASS, AT_CAP} if allow_at_cap else {PASS}
        return all(e.status in allowed for e in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if e.status != PASS]

    def summary(self) -> str:
        parts = [f"{s}={self.count(s)}" for s in (PASS, FAIL, AT_CAP, INCONCLUSIVE) if self.count(s)]
        return f"{self.suite}: {len(self.entries)} instances ({', '.join(parts) or 'empty'})"

    def to_json(self) -> list:
        items = [e.to_json() for e in self.entries]
        items.sort(key=lambda d: (d["suite"], d["instance"]))
        return items
