"""Residual checks and the JSON verification report."""

import json
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Check:
    """One named residual compared against its tolerance."""

    name: str
    residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.residual <= self.tolerance)

    def to_dict(self):
        residual = self.residual
        # JSON has no infinity; an infinite residual is reported as null.
        if not math.isfinite(residual):
            residual = None
        return {
            "name": self.name,
            "residual": residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    instance: Dict[str, Any]
    checks: List[Check] = field(default_factory=list)

    def add(self, name, residual, tolerance):
        check = Check(name, float(residual), float(tolerance))
        self.checks.append(check)
        return check

    def extend(self, checks):
        self.checks.extend(checks)

    @property
    def passed(self):
        return sum(c.passed for c in self.checks)

    @property
    def failed(self):
        return len(self.checks) - self.passed

    @property
    def ok(self):
        return self.failed == 0

    def to_dict(self):
        return {
            "schema_version": SCHEMA_VERSION,
            "instance": self.instance,
            "checks": [c.to_dict() for c in self.checks],
            "summary": {"passed": self.passed, "failed": self.failed},
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)
