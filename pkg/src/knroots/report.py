"""
Verification reports and canonical JSON output.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

# Failures beyond this count are tallied but not recorded.
MAX_RECORDED_FAILURES = 50


def dumps(data: Any, indent: Optional[int] = 2) -> str:
    """Deterministic JSON text: sorted keys, fixed separators."""
    separators = (",", ": ") if indent is not None else (",", ":")
    return json.dumps(data, sort_keys=True, indent=indent, separators=separators)


def suite_parameters(monoid: Any, settings: Any, **extra: Any) -> Dict[str, Any]:
    """Report parameters: the monoid, the tolerances and suite-specific values."""
    params = {
        "monoid": monoid.to_json(),
        "angle_tol": settings.angle_tol,
        "log_tol": settings.log_tol,
    }
    params.update(extra)
    return params


@dataclass(frozen=True)
class Failure:
    """One failed check, with enough data to reproduce it."""

    check: str
    input: Any
    expected: Any
    actual: Any
    detail: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "input": self.input,
            "expected": self.expected,
            "actual": self.actual,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """Outcome of a verification suite; ``passed`` iff no check failed."""

    suite: str
    parameters: Dict[str, Any]
    cases_run: int = 0
    failures: List[Failure] = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0

    def check(
        self,
        ok: bool,
        check: str,
        input: Any = None,
        expected: Any = None,
        actual: Any = None,
        detail: str = "",
    ) -> bool:
        """Record one check; returns ``ok``."""
        self.cases_run += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_RECORDED_FAILURES:
                self.failures.append(Failure(check, input, expected, actual, detail))
        return ok

    def to_json(self) -> Dict[str, Any]:
        return {
            "suite": self.suite,
            "parameters": self.parameters,
            "passed": self.passed,
            "cases_run": self.cases_run,
            "failure_count": self.failure_count,
            "failures": [f.to_json() for f in self.failures],
        }

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical report JSON."""
        text = dumps(self.to_json(), indent=None)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()
