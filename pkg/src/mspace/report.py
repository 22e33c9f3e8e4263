"""Check reports shared by every verifier.

A report is a list of named laws, each with a status and an optional
witness.  Reports serialize to deterministic JSON (sorted keys inside
witnesses, checks kept in the order they were run).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
STATUSES = (PASS, FAIL, INCONCLUSIVE)


@dataclass
class Check:
    law: str
    status: str
    witness: dict | None = None
    info: dict | None = None

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out: dict[str, Any] = {"law": self.law, "status": self.status, "witness": self.witness}
        if self.info:
            out["info"] = self.info
        return out


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    population: dict = field(default_factory=dict)
    seed: int = 0
    summary: dict = field(default_factory=dict)

    def add(self, law: str, ok: bool | None, witness: dict | None = None, info: dict | None = None) -> Check:
        """``ok=None`` records an inconclusive result."""
        status = INCONCLUSIVE if ok is None else (PASS if ok else FAIL)
        c = Check(law, status, None if status == PASS else witness, info)
        self.checks.append(c)
        return c

    def extend(self, other: Report, prefix: str = "") -> None:
        for c in other.checks:
            self.checks.append(Check(prefix + c.law, c.status, c.witness, c.info))
        self.summary.update(other.summary)

    def check(self, law: str) -> Check:
        for c in self.checks:
            if c.law == law:
                return c
        raise KeyError(law)

    def status_of(self, law: str) -> str:
        return self.check(law).status

    @property
    def failed(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        out = {
            "suite": self.suite,
            "population": self.population,
            "checks": [c.to_json() for c in self.checks],
            "seed": self.seed,
        }
        if self.summary:
            out["summary"] = self.summary
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=False, ensure_ascii=False) + "\n"

    def render_text(self) -> str:
        lines = [f"suite: {self.suite}  seed: {self.seed}"]
        if self.population:
            lines.append("population: " + ", ".join(f"{k}={v}" for k, v in self.population.items()))
        for k, v in self.summary.items():
            lines.append(f"{k}: {v}")
        width = max((len(c.law) for c in self.checks), default=0)
        for c in self.checks:
            line = f"  [{c.status.upper():^12}] {c.law.ljust(width)}"
            if c.witness:
                line += "  witness: " + json.dumps(c.witness, ensure_ascii=False)
            lines.append(line)
        n_fail = len(self.failed)
        lines.append(f"{len(self.checks)} checks, {n_fail} failed")
        return "\n".join(lines) + "\n"
