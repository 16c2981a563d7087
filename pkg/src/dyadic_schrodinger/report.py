from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

REPORT_VERSION = 1


@dataclass
class Case:
    id: str
    anchor: str
    residual: float
    tol: float
    passed: bool | None = None

    def __post_init__(self):
        self.residual = float(self.residual)
        if not math.isfinite(self.residual) or self.residual < 0:
            # a NaN or negative residual is a bug in the check, never a pass
            self.passed = False
        elif self.passed is None:
            self.passed = self.residual <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.id:<32} residual={self.residual:.3e}  tol={self.tol:.1e}  ({self.anchor})"


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    def add(self, case: Case) -> Case:
        self.cases.append(case)
        return case

    def failing(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {
            "version": REPORT_VERSION,
            "suite": self.suite,
            "cases": [
                {"id": c.id, "anchor": c.anchor, "residual": c.residual, "tol": c.tol, "pass": c.passed}
                for c in self.cases
            ],
            "pass": self.passed,
            "seconds": self.seconds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "VerificationReport":
        cases = [Case(c["id"], c["anchor"], c["residual"], c["tol"], c["pass"]) for c in data["cases"]]
        return cls(data["suite"], cases, data.get("seconds", 0.0))

    def summary(self) -> str:
        lines = [c.line() for c in self.cases]
        n_ok = sum(c.passed for c in self.cases)
        lines.append(f"{self.suite}: {n_ok}/{len(self.cases)} passed in {self.seconds:.2f}s")
        return "\n".join(lines)


__all__ = ["Case", "VerificationReport", "REPORT_VERSION"]
