"""Check records and the JSON / text report emitted by the command line."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

SCHEMA = 1
PASS, FAIL, NA = "pass", "fail", "n/a"


@dataclass
class Check:
    name: str
    paper_eq: str
    status: str
    witness: Optional[str] = None

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NA):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError(f"check {self.name!r} failed without a witness")

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "paper_eq": self.paper_eq, "status": self.status,
                "witness": self.witness}


def check(name: str, identity: str, ok: bool, witness: Optional[str] = None) -> Check:
    """A pass/fail record; ``witness`` is only kept for failures."""
    if ok:
        return Check(name, identity, PASS)
    return Check(name, identity, FAIL, witness or "identity does not hold")


def info(name: str, identity: str, finding: str) -> Check:
    return Check(name, identity, NA, finding)


@dataclass
class Report:
    command: str
    family: Optional[str]
    bindings: Dict[str, str] = field(default_factory=dict)
    seed: Optional[int] = None
    checks: List[Check] = field(default_factory=list)
    output: Optional[str] = None
    as_json: bool = False
    plain: bool = False     # text mode prints only ``output``

    @property
    def failed(self) -> bool:
        return any(c.status == FAIL for c in self.checks)

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    def as_dict(self) -> Dict[str, Any]:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "family": self.family,
            "bindings": dict(sorted(self.bindings.items())),
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        if self.plain and self.output is not None:
            return self.output
        lines = []
        if self.output is not None:
            lines.append(self.output)
        if self.checks:
            head = f"{self.command}"
            if self.family:
                head += f"  family {self.family}"
            if self.bindings:
                head += "  " + " ".join(f"{k}={v}" for k, v in sorted(self.bindings.items()))
            if self.seed is not None:
                head += f"  seed {self.seed}"
            lines.append(head)
            width = max(len(c.name) for c in self.checks)
            for c in self.checks:
                lines.append(f"  [{c.status:>4}] {c.name:<{width}}  {c.paper_eq}")
                if c.witness and c.status != PASS:
                    lines.append(f"         {c.witness}")
            n_fail = sum(c.status == FAIL for c in self.checks)
            n_pass = sum(c.status == PASS for c in self.checks)
            lines.append(f"{n_pass} passed, {n_fail} failed, "
                         f"{len(self.checks) - n_pass - n_fail} informational")
        return "\n".join(lines)
