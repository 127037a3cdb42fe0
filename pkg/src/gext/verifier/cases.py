"""Case files and reports (JSON, ``"schema": 1``)."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ParseError
from ..verdict import CheckResult

SCHEMA = 1
KINDS = ("variety-extension", "cocycle", "tower", "gluing", "synthesis")


@dataclass(frozen=True)
class CaseFile:
    id: str
    kind: str
    payload: dict
    expected: dict = field(default_factory=dict)   # {"checks": {name: status}, "citation": str}
    citation: str = ""
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown case kind {self.kind!r}; expected one of {KINDS}")

    def expected_status(self, name: str) -> str:
        return self.expected.get("checks", {}).get(name, "pass")

    def to_json(self) -> dict:
        d = {"schema": SCHEMA, "id": self.id, "kind": self.kind, "citation": self.citation,
             "payload": self.payload, "expected": self.expected}
        d = copy.deepcopy(d)    # callers may edit the result; corpus builders share data
        if self.flags:
            d["flags"] = list(self.flags)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_json(cls, d: dict) -> "CaseFile":
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported case schema {d.get('schema')!r}; expected {SCHEMA}")
        return cls(d["id"], d["kind"], d["payload"], d.get("expected", {}), d.get("citation", ""),
                   tuple(d.get("flags", ())))

    @classmethod
    def loads(cls, text: str) -> "CaseFile":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed case JSON: {exc.msg}", exc.lineno, exc.colno) from exc
        return cls.from_json(d)

    @classmethod
    def load(cls, path: str | Path) -> "CaseFile":
        return cls.loads(Path(path).read_text())


@dataclass
class Report:
    case_id: str
    checks: list[CheckResult] = field(default_factory=list)
    expected: dict[str, str] = field(default_factory=dict)
    seconds: float = 0.0
    budget: int = 0
    flags: tuple[str, ...] = ()

    def add(self, check: CheckResult) -> None:
        if any(c.name == check.name for c in self.checks):
            raise ValueError(f"duplicate check {check.name!r} in report {self.case_id}")
        self.checks.append(check)

    def outcome(self, check: CheckResult) -> str:
        """'pass' when the check matches its expectation, else its mismatch status."""
        want = self.expected.get(check.name, "pass")
        if check.status == want:
            return "pass"
        return "inconclusive" if check.status == "inconclusive" else "fail"

    @property
    def status(self) -> str:
        outs = [self.outcome(c) for c in self.checks]
        missing = [n for n in self.expected if not any(c.name == n for c in self.checks)]
        if "fail" in outs or missing:
            return "fail"
        if "inconclusive" in outs:
            return "inconclusive"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {"case": self.case_id, "status": self.status, "seconds": round(self.seconds, 4),
                "budget": self.budget, "flags": list(self.flags),
                "checks": [{**c.to_json(), "expected": self.expected.get(c.name, "pass")}
                           for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, d: dict) -> "Report":
        checks = [CheckResult.from_json(c) for c in d["checks"]]
        expected = {c["name"]: c.get("expected", "pass") for c in d["checks"]}
        return cls(d["case"], checks, expected, d.get("seconds", 0.0), d.get("budget", 0),
                   tuple(d.get("flags", ())))

    def summary_line(self) -> str:
        bad = [c.name for c in self.checks if self.outcome(c) != "pass"]
        tail = f" ({', '.join(bad)})" if bad else ""
        return f"{self.status.upper():12s} {self.case_id}  [{len(self.checks)} checks, {self.seconds:.2f}s]{tail}"


