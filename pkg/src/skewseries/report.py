"""Uniform result type for the exact property checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckReport:
    """Outcome of one property-check run.

    ``checked`` counts individual verified assertions.  ``counterexample``
    holds a rendered description of the first failure, or ``None`` when the
    run passed.  ``details`` carries check-specific counters (branch counts,
    enumeration mode, side observations) and must stay JSON-serializable.
    """

    name: str
    passed: bool
    checked: int
    counterexample: str | None = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "suite": self.name,
            "checked": self.checked,
            "counterexample": self.counterexample,
            "details": {k: self.details[k] for k in sorted(self.details)},
        }
