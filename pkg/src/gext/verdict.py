"""Boolean results that carry a human-readable witness."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Verdict:
    ok: bool
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __eq__(self, other) -> bool:
        if isinstance(other, bool):
            return self.ok is other
        if isinstance(other, Verdict):
            return self.ok == other.ok and self.detail == other.detail
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.ok, self.detail))


def passed(detail: str = "") -> Verdict:
    return Verdict(True, detail)


def failed(detail: str) -> Verdict:
    return Verdict(False, detail)


def all_of(verdicts) -> Verdict:
    """First failing verdict, else a pass joining the details."""
    details = []
    for v in verdicts:
        if not v:
            return v
        if v.detail:
            details.append(v.detail)
    return Verdict(True, "; ".join(details))


STATUSES = ("pass", "fail", "inconclusive")


@dataclass(frozen=True)
class CheckResult:
    """A named check in a report; the detail is a witness on pass, a counterexample on fail."""

    name: str
    status: str
    detail: str = ""

    def __post_init__(self) -> None:
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @classmethod
    def from_verdict(cls, name: str, v: Verdict) -> "CheckResult":
        return cls(name, "pass" if v else "fail", v.detail)

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        key = "witness" if self.status == "pass" else "counterexample"
        return {"name": self.name, "status": self.status, key: self.detail}

    @classmethod
    def from_json(cls, d: dict) -> "CheckResult":
        return cls(d["name"], d["status"], d.get("witness", d.get("counterexample", "")))
