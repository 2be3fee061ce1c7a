"""Verification reports shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

MAX_WITNESSES = 20


def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


@dataclass
class Report:
    name: str
    mode: str = "exact"
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    n_failures: int = 0

    @property
    def passed(self) -> bool:
        return self.n_failures == 0

    def __bool__(self):
        return self.passed

    def tally(self, check: str, k: int = 1):
        self.counts[check] = self.counts.get(check, 0) + int(k)

    def fail(self, check: str, k: int = 1, **witness):
        self.n_failures += int(k)
        if len(self.failures) < MAX_WITNESSES:
            self.failures.append({"check": check, **jsonable(witness)})

    def absorb(self, other: "Report", prefix: str | None = None):
        pre = f"{prefix or other.name}."
        for k, v in other.counts.items():
            self.tally(pre + k, v)
        self.n_failures += other.n_failures
        for f in other.failures:
            if len(self.failures) < MAX_WITNESSES:
                self.failures.append({**f, "check": pre + f["check"]})
        return self

    def to_dict(self) -> dict:
        return jsonable({
            "name": self.name,
            "passed": self.passed,
            "mode": self.mode,
            "counts": dict(sorted(self.counts.items())),
            "n_failures": self.n_failures,
            "failures": self.failures,
            "details": self.details,
        })

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        checks = sum(self.counts.values())
        return f"[{status}] {self.name}: {checks} checks, {self.n_failures} failures ({self.mode})"
